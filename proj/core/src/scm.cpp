#include "causalinfo/scm.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "causalinfo/error.hpp"

namespace causalinfo {

struct Scm::Data {
  std::string name;
  std::vector<Variable> endogenous;
  std::vector<NoiseDecl> noise;
  std::vector<Assignment> assignments;
  ValidationReport report;

  std::vector<std::size_t> topo;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::size_t> noise_of;
  std::vector<std::vector<std::size_t>> mechanism;
};

namespace {

void add(ValidationReport& r, Violation::Kind kind, std::string variable, std::string message, SourceSpan span = {}) {
  Violation v;
  v.kind = kind;
  v.variable = std::move(variable);
  v.message = std::move(message);
  v.span = span;
  r.violations.push_back(std::move(v));
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

// Finds one cycle in the parent graph; returns the path with first == last.
std::vector<std::size_t> find_cycle(const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t n = parents.size();
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t p : parents[v]) children[p].push_back(v);
  }
  for (auto& c : children) std::sort(c.begin(), c.end());
  std::vector<int> color(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> cycle;
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    color[v] = 1;
    stack.push_back(v);
    for (std::size_t c : children[v]) {
      if (color[c] == 1) {
        auto it = std::find(stack.begin(), stack.end(), c);
        cycle.assign(it, stack.end());
        cycle.push_back(c);
        return true;
      }
      if (color[c] == 0 && dfs(c)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (color[v] == 0 && dfs(v)) return cycle;
  }
  return {};
}

std::vector<std::size_t> least_topological_order(const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t n = parents.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    indegree[v] = parents[v].size();
    for (std::size_t p : parents[v]) children[p].push_back(v);
  }
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t c : children[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  return order;
}

}  // namespace

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Structure: return "structure";
    case Violation::Kind::Cycle: return "cycle";
    case Violation::Kind::NonTotal: return "non-total";
    case Violation::Kind::RangeViolation: return "range";
    case Violation::Kind::UnnormalizedNoise: return "noise";
  }
  return "?";
}

Scm::Scm(std::string name, std::vector<Variable> endogenous, std::vector<NoiseDecl> noise,
         std::vector<Assignment> assignments) {
  auto d = std::make_shared<Data>();
  d->name = std::move(name);
  d->endogenous = std::move(endogenous);
  d->noise = std::move(noise);
  ValidationReport& report = d->report;

  std::map<std::string, std::size_t> endo_index;
  std::map<std::string, std::size_t> noise_index;
  for (std::size_t i = 0; i < d->endogenous.size(); ++i) {
    if (!endo_index.emplace(d->endogenous[i].id, i).second) {
      add(report, Violation::Kind::Structure, d->endogenous[i].id, "duplicate variable '" + d->endogenous[i].id + "'");
    }
  }
  for (std::size_t i = 0; i < d->noise.size(); ++i) {
    const auto& nz = d->noise[i];
    if (endo_index.count(nz.id) || !noise_index.emplace(nz.id, i).second) {
      add(report, Violation::Kind::Structure, nz.id, "duplicate variable '" + nz.id + "'", nz.span);
    }
    if (nz.masses.size() != nz.range.size()) {
      add(report, Violation::Kind::UnnormalizedNoise, nz.id, "noise '" + nz.id + "' has the wrong number of masses", nz.span);
      continue;
    }
    Rational total = 0;
    bool negative = false;
    for (const auto& m : nz.masses) {
      negative = negative || sgn(m) < 0;
      total += m;
    }
    if (negative) {
      add(report, Violation::Kind::UnnormalizedNoise, nz.id, "noise '" + nz.id + "' has a negative mass", nz.span);
    } else if (total != 1) {
      add(report, Violation::Kind::UnnormalizedNoise, nz.id,
          "noise '" + nz.id + "' masses sum to " + to_string(total) + ", not 1", nz.span);
    }
  }

  // Match assignments to endogenous variables.
  const std::size_t n = d->endogenous.size();
  std::vector<std::optional<Assignment>> by_var(n);
  for (auto& a : assignments) {
    auto it = endo_index.find(a.target);
    if (it == endo_index.end()) {
      add(report, Violation::Kind::Structure, a.target, "assignment for unknown variable '" + a.target + "'", a.span);
    } else if (by_var[it->second]) {
      add(report, Violation::Kind::Structure, a.target, "duplicate assignment for '" + a.target + "'", a.span);
    } else {
      by_var[it->second] = std::move(a);
    }
  }
  d->parents.assign(n, {});
  d->noise_of.assign(n, 0);
  std::vector<bool> structure_ok(n, true);
  std::map<std::string, std::string> noise_owner;
  for (std::size_t v = 0; v < n; ++v) {
    const std::string& id = d->endogenous[v].id;
    if (!by_var[v]) {
      add(report, Violation::Kind::Structure, id, "variable '" + id + "' has no assignment");
      structure_ok[v] = false;
      continue;
    }
    const Assignment& a = *by_var[v];
    for (const auto& p : a.parents) {
      auto it = endo_index.find(p);
      if (it == endo_index.end()) {
        add(report, Violation::Kind::Structure, id, "parent '" + p + "' of '" + id + "' is not an endogenous variable", a.span);
        structure_ok[v] = false;
      } else if (std::find(d->parents[v].begin(), d->parents[v].end(), it->second) != d->parents[v].end()) {
        add(report, Violation::Kind::Structure, id, "parent '" + p + "' listed twice for '" + id + "'", a.span);
        structure_ok[v] = false;
      } else {
        d->parents[v].push_back(it->second);
      }
    }
    auto nit = noise_index.find(a.noise);
    if (nit == noise_index.end()) {
      add(report, Violation::Kind::Structure, id, "noise '" + a.noise + "' of '" + id + "' is not declared", a.span);
      structure_ok[v] = false;
    } else if (auto [owner, fresh] = noise_owner.emplace(a.noise, id); !fresh) {
      add(report, Violation::Kind::Structure, id,
          "noise '" + a.noise + "' is shared by '" + owner->second + "' and '" + id + "'", a.span);
      structure_ok[v] = false;
    } else {
      d->noise_of[v] = nit->second;
    }
    if (!a.body) {
      add(report, Violation::Kind::Structure, id, "variable '" + id + "' has no body", a.span);
      structure_ok[v] = false;
      continue;
    }
    for (const auto& ref : referenced_ids(*a.body)) {
      if (ref != a.noise && std::find(a.parents.begin(), a.parents.end(), ref) == a.parents.end()) {
        add(report, Violation::Kind::Structure, id,
            "body of '" + id + "' references '" + ref + "', which is neither a parent nor its noise", a.body->span);
        structure_ok[v] = false;
      }
    }
  }
  for (const auto& nz : d->noise) {
    if (!noise_owner.count(nz.id) && noise_index.count(nz.id)) {
      add(report, Violation::Kind::Structure, nz.id, "noise '" + nz.id + "' is not used by any variable", nz.span);
    }
  }

  const auto cycle = find_cycle(d->parents);
  if (!cycle.empty()) {
    Violation v;
    v.kind = Violation::Kind::Cycle;
    for (std::size_t i : cycle) v.path.push_back(d->endogenous[i].id);
    v.variable = v.path.front();
    std::string text;
    for (std::size_t i = 0; i < v.path.size(); ++i) text += (i ? "->" : "") + v.path[i];
    v.message = "causal graph has a cycle " + text;
    if (by_var[cycle.front()]) v.span = by_var[cycle.front()]->span;
    report.violations.push_back(std::move(v));
  } else {
    d->topo = least_topological_order(d->parents);
  }

  // Totality: evaluate every (parents..., noise) combination.
  d->mechanism.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    if (!structure_ok[v]) continue;
    const Assignment& a = *by_var[v];
    const auto& nz = d->noise[d->noise_of[v]];
    std::vector<const FiniteRange*> ranges;
    Env env;
    for (std::size_t p : d->parents[v]) {
      ranges.push_back(&d->endogenous[p].range);
      env.emplace_back(d->endogenous[p].id, "");
    }
    ranges.push_back(&nz.range);
    env.emplace_back(nz.id, "");
    std::vector<std::size_t> tuple(ranges.size(), 0);
    std::vector<std::size_t> table;
    bool total = true;
    while (true) {
      for (std::size_t k = 0; k < tuple.size(); ++k) env[k].second = ranges[k]->label(tuple[k]);
      try {
        table.push_back(eval_expr(*a.body, env, d->endogenous[v].range));
      } catch (const ExprError& e) {
        std::string input;
        for (std::size_t k = 0; k < env.size(); ++k) input += (k ? ", " : "") + env[k].first + "=" + env[k].second;
        const bool out_of_range = e.message().find("outside the target range") != std::string::npos;
        add(report, out_of_range ? Violation::Kind::RangeViolation : Violation::Kind::NonTotal, a.target,
            "assignment for '" + a.target + "' is not total at (" + input + "): " + e.message(), e.span());
        total = false;
        break;
      }
      std::size_t k = tuple.size();
      while (k-- > 0) {
        if (++tuple[k] < ranges[k]->size()) break;
        tuple[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
    if (total) d->mechanism[v] = std::move(table);
  }

  if (report.ok()) {
    for (std::size_t v = 0; v < n; ++v) d->assignments.push_back(std::move(*by_var[v]));
  } else {
    for (auto& a : by_var) {
      if (a) d->assignments.push_back(std::move(*a));
    }
  }
  data_ = std::move(d);
}

const std::string& Scm::name() const { return data_->name; }
const std::vector<Variable>& Scm::endogenous() const { return data_->endogenous; }
const std::vector<NoiseDecl>& Scm::noise() const { return data_->noise; }
const std::vector<Assignment>& Scm::assignments() const { return data_->assignments; }
const ValidationReport& Scm::report() const { return data_->report; }

std::optional<std::size_t> Scm::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < data_->endogenous.size(); ++i) {
    if (data_->endogenous[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Scm::noise_index_of(std::string_view id) const {
  for (std::size_t i = 0; i < data_->noise.size(); ++i) {
    if (data_->noise[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Scm::require_index(std::string_view id) const {
  auto i = index_of(id);
  if (!i) fail(ErrorKind::UnknownVariable, "'" + std::string(id) + "' is not an endogenous variable of " + data_->name);
  return *i;
}

const Variable& Scm::variable(std::string_view id) const { return data_->endogenous[require_index(id)]; }

namespace {
void require_valid(const Scm& m) {
  if (!m.valid()) {
    fail(ErrorKind::InvalidModel, "model '" + m.name() + "' is invalid: " + m.report().violations.front().message);
  }
}
}  // namespace

const std::vector<std::size_t>& Scm::topological_order() const {
  require_valid(*this);
  return data_->topo;
}

const std::vector<std::size_t>& Scm::parent_indices(std::size_t var) const { return data_->parents.at(var); }

std::size_t Scm::noise_of(std::size_t var) const { return data_->noise_of.at(var); }

const std::vector<std::size_t>& Scm::mechanism(std::size_t var) const {
  require_valid(*this);
  return data_->mechanism.at(var);
}

Pmf Scm::noise_pmf(std::size_t noise_index) const {
  require_valid(*this);
  const auto& nz = data_->noise.at(noise_index);
  return Pmf({ScopeVar{nz.id, nz.range}}, nz.masses);
}

std::size_t Scm::joint_cells() const {
  std::size_t cells = 1;
  for (const auto& v : data_->endogenous) cells = saturating_mul(cells, v.range.size());
  for (const auto& v : data_->noise) cells = saturating_mul(cells, v.range.size());
  return cells;
}

bool Scm::has_directed_path(std::string_view from, std::string_view to) const {
  const std::size_t src = require_index(from);
  const std::size_t dst = require_index(to);
  const std::size_t n = data_->endogenous.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> frontier{src};
  seen[src] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t c = 0; c < n; ++c) {
      const auto& ps = data_->parents[c];
      if (!seen[c] && std::find(ps.begin(), ps.end(), v) != ps.end()) {
        if (c == dst) return true;
        seen[c] = true;
        frontier.push_back(c);
      }
    }
  }
  return false;
}

bool Scm::structurally_equal(const Scm& other) const {
  const Data& a = *data_;
  const Data& b = *other.data_;
  if (a.name != b.name || a.endogenous != b.endogenous || a.noise.size() != b.noise.size()) return false;
  for (std::size_t i = 0; i < a.noise.size(); ++i) {
    if (a.noise[i].id != b.noise[i].id || a.noise[i].range != b.noise[i].range || a.noise[i].masses != b.noise[i].masses) {
      return false;
    }
  }
  if (a.report.ok() != b.report.ok() || a.assignments.size() != b.assignments.size()) return false;
  for (std::size_t i = 0; i < a.assignments.size(); ++i) {
    const auto& x = a.assignments[i];
    const auto& y = b.assignments[i];
    if (x.target != y.target || x.parents != y.parents || x.noise != y.noise) return false;
    if (!a.report.ok() && !causalinfo::structurally_equal(*x.body, *y.body)) return false;
  }
  return !a.report.ok() || a.mechanism == b.mechanism;
}

ValidationReport validate(const Scm& model) { return model.report(); }

std::vector<std::string> endogenous_ids(const Scm& model) {
  std::vector<std::string> ids;
  for (const auto& v : model.endogenous()) ids.push_back(v.id);
  return ids;
}

namespace {

// Query variables as declaration-ordered indices.
std::vector<std::size_t> query_indices(const Scm& model, std::span<const std::string> vars,
                                       const InferenceLimits& limits) {
  require_valid(model);
  if (vars.empty()) fail(ErrorKind::BadScope, "query needs at least one variable");
  if (model.joint_cells() > limits.max_joint_cells) {
    fail(ErrorKind::JointTooLarge, "model '" + model.name() + "' has " + std::to_string(model.joint_cells()) +
                                       " joint cells, above the cap of " + std::to_string(limits.max_joint_cells));
  }
  std::vector<std::size_t> idx;
  for (const auto& v : vars) idx.push_back(model.require_index(v));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

std::vector<ScopeVar> scope_of(const Scm& model, const std::vector<std::size_t>& idx) {
  std::vector<ScopeVar> scope;
  for (std::size_t i : idx) scope.push_back({model.endogenous()[i].id, model.endogenous()[i].range});
  return scope;
}

// Working joint of the forward pass: variables (model indices) + dense table,
// last variable fastest.
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> sizes;
  std::vector<Rational> mass{Rational(1)};

  std::size_t position(std::size_t var) const {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), var) - vars.begin());
  }
};

std::vector<std::size_t> decode(std::size_t flat, const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> t(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    t[i] = flat % sizes[i];
    flat /= sizes[i];
  }
  return t;
}

Factor extend(const Scm& model, const Factor& f, std::size_t var) {
  const auto& parents = model.parent_indices(var);
  const auto& mech = model.mechanism(var);
  const auto& nz = model.noise()[model.noise_of(var)];
  const std::size_t out_size = model.endogenous()[var].range.size();

  Factor g;
  g.vars = f.vars;
  g.vars.push_back(var);
  g.sizes = f.sizes;
  g.sizes.push_back(out_size);
  g.mass.assign(f.mass.size() * out_size, Rational(0));

  std::vector<std::size_t> parent_pos;
  for (std::size_t p : parents) parent_pos.push_back(f.position(p));

  // CPD row P(var | pa) = sum of noise masses mapping to each value.
  std::vector<Rational> cpd(out_size);
  for (std::size_t flat = 0; flat < f.mass.size(); ++flat) {
    if (sgn(f.mass[flat]) == 0) continue;
    const auto t = decode(flat, f.sizes);
    std::size_t row = 0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      row = row * model.endogenous()[parents[k]].range.size() + t[parent_pos[k]];
    }
    for (auto& c : cpd) c = 0;
    for (std::size_t n = 0; n < nz.range.size(); ++n) {
      if (sgn(nz.masses[n]) != 0) cpd[mech[row * nz.range.size() + n]] += nz.masses[n];
    }
    for (std::size_t x = 0; x < out_size; ++x) {
      if (sgn(cpd[x]) != 0) g.mass[flat * out_size + x] = f.mass[flat] * cpd[x];
    }
  }
  return g;
}

Factor project(const Factor& f, const std::vector<std::size_t>& keep_vars) {
  Factor g;
  std::vector<std::size_t> positions;
  for (std::size_t v : keep_vars) {
    positions.push_back(f.position(v));
    g.vars.push_back(v);
    g.sizes.push_back(f.sizes[positions.back()]);
  }
  std::size_t cells = 1;
  for (std::size_t s : g.sizes) cells *= s;
  g.mass.assign(cells, Rational(0));
  for (std::size_t flat = 0; flat < f.mass.size(); ++flat) {
    if (sgn(f.mass[flat]) == 0) continue;
    const auto t = decode(flat, f.sizes);
    std::size_t out = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) out = out * g.sizes[k] + t[positions[k]];
    g.mass[out] += f.mass[flat];
  }
  return g;
}

}  // namespace

Pmf entailed(const Scm& model, std::span<const std::string> vars, const InferenceLimits& limits) {
  const auto wanted = query_indices(model, vars, limits);
  const std::size_t n = model.endogenous().size();

  std::vector<bool> needed(n, false);
  std::vector<std::size_t> frontier(wanted.begin(), wanted.end());
  for (std::size_t v : wanted) needed[v] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t p : model.parent_indices(v)) {
      if (!needed[p]) {
        needed[p] = true;
        frontier.push_back(p);
      }
    }
  }

  std::vector<std::size_t> order;
  for (std::size_t v : model.topological_order()) {
    if (needed[v]) order.push_back(v);
  }

  Factor joint;
  for (std::size_t step = 0; step < order.size(); ++step) {
    joint = extend(model, joint, order[step]);
    // Drop variables that are neither queried nor a parent of a later one.
    std::vector<std::size_t> keep;
    for (std::size_t v : joint.vars) {
      bool keep_it = std::binary_search(wanted.begin(), wanted.end(), v);
      for (std::size_t later = step + 1; later < order.size() && !keep_it; ++later) {
        const auto& ps = model.parent_indices(order[later]);
        keep_it = std::find(ps.begin(), ps.end(), v) != ps.end();
      }
      if (keep_it) keep.push_back(v);
    }
    if (keep.size() != joint.vars.size()) joint = project(joint, keep);
  }
  joint = project(joint, wanted);
  return Pmf(scope_of(model, wanted), std::move(joint.mass));
}

Pmf entailed_oracle(const Scm& model, std::span<const std::string> vars, const InferenceLimits& limits) {
  const auto wanted = query_indices(model, vars, limits);
  const auto& noise = model.noise();
  const auto& endo = model.endogenous();
  const auto scope = scope_of(model, wanted);
  std::size_t cells = 1;
  for (const auto& s : scope) cells *= s.range.size();
  std::vector<Rational> mass(cells, Rational(0));

  std::vector<std::size_t> noise_value(noise.size(), 0);
  std::vector<std::size_t> value(endo.size(), 0);
  Env env;
  while (true) {
    Rational weight = 1;
    for (std::size_t k = 0; k < noise.size() && sgn(weight) != 0; ++k) weight *= noise[k].masses[noise_value[k]];
    if (sgn(weight) != 0) {
      for (std::size_t v : model.topological_order()) {
        const Assignment& a = model.assignments()[v];
        env.clear();
        for (std::size_t p : model.parent_indices(v)) env.emplace_back(endo[p].id, endo[p].range.label(value[p]));
        const std::size_t nz = model.noise_of(v);
        env.emplace_back(noise[nz].id, noise[nz].range.label(noise_value[nz]));
        value[v] = eval_expr(*a.body, env, endo[v].range);
      }
      std::size_t out = 0;
      for (std::size_t k = 0; k < wanted.size(); ++k) out = out * scope[k].range.size() + value[wanted[k]];
      mass[out] += weight;
    }
    std::size_t k = noise.size();
    while (k-- > 0) {
      if (++noise_value[k] < noise[k].range.size()) break;
      noise_value[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return Pmf(scope, std::move(mass));
}

}  // namespace causalinfo
