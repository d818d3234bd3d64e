#include "causalinfo/pmf.hpp"

#include <algorithm>
#include <set>

#include "causalinfo/error.hpp"

namespace causalinfo {
namespace {

std::size_t cell_count(const std::vector<ScopeVar>& scope) {
  std::size_t n = 1;
  for (const auto& v : scope) n *= v.range.size();
  return n;
}

std::vector<std::size_t> strides_of(const std::vector<ScopeVar>& scope) {
  std::vector<std::size_t> strides(scope.size());
  std::size_t s = 1;
  for (std::size_t i = scope.size(); i-- > 0;) {
    strides[i] = s;
    s *= scope[i].range.size();
  }
  return strides;
}

std::size_t require_position(const Pmf& p, std::string_view id) {
  auto pos = p.position(id);
  if (!pos) fail(ErrorKind::UnknownVariable, "variable '" + std::string(id) + "' is not in the scope");
  return *pos;
}

// Incrementing odometer over a scope, last variable fastest.
bool advance(std::vector<std::size_t>& tuple, const std::vector<ScopeVar>& scope) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < scope[i].range.size()) return true;
    tuple[i] = 0;
  }
  return false;
}

}  // namespace

Pmf::Pmf(std::vector<ScopeVar> scope, std::vector<Rational> mass)
    : scope_(std::move(scope)), mass_(std::move(mass)) {
  std::set<std::string_view> ids;
  for (const auto& v : scope_) {
    if (!ids.insert(v.id).second) fail(ErrorKind::BadScope, "duplicate variable '" + v.id + "' in scope");
  }
  if (mass_.size() != cell_count(scope_)) {
    fail(ErrorKind::InvalidPmf, "table has " + std::to_string(mass_.size()) + " entries, scope needs " +
                                    std::to_string(cell_count(scope_)));
  }
  Rational total = 0;
  for (auto& m : mass_) {
    m.canonicalize();
    if (sgn(m) < 0) fail(ErrorKind::InvalidPmf, "negative mass " + causalinfo::to_string(m));
    total += m;
  }
  if (total != 1) fail(ErrorKind::InvalidPmf, "masses sum to " + causalinfo::to_string(total) + ", not 1");
}

Pmf Pmf::point_mass(std::vector<ScopeVar> scope, std::span<const std::size_t> at) {
  if (at.size() != scope.size()) fail(ErrorKind::BadScope, "tuple arity does not match scope");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (at[i] >= scope[i].range.size()) fail(ErrorKind::RangeMismatch, "value index out of range for " + scope[i].id);
    flat = flat * scope[i].range.size() + at[i];
  }
  std::vector<Rational> mass(cell_count(scope), Rational(0));
  mass[flat] = 1;
  return Pmf(std::move(scope), std::move(mass));
}

Pmf Pmf::uniform(std::vector<ScopeVar> scope) {
  const std::size_t n = cell_count(scope);
  return Pmf(std::move(scope), std::vector<Rational>(n, Rational(1, n)));
}

std::optional<std::size_t> Pmf::position(std::string_view id) const {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (scope_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Pmf::ids() const {
  std::vector<std::string> out;
  out.reserve(scope_.size());
  for (const auto& v : scope_) out.push_back(v.id);
  return out;
}

std::size_t Pmf::flat_index(std::span<const std::size_t> tuple) const {
  if (tuple.size() != scope_.size()) fail(ErrorKind::BadScope, "tuple arity does not match scope");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= scope_[i].range.size()) fail(ErrorKind::RangeMismatch, "value index out of range for " + scope_[i].id);
    flat = flat * scope_[i].range.size() + tuple[i];
  }
  return flat;
}

std::vector<std::size_t> Pmf::tuple_of(std::size_t flat) const {
  std::vector<std::size_t> tuple(scope_.size());
  for (std::size_t i = scope_.size(); i-- > 0;) {
    const std::size_t n = scope_[i].range.size();
    tuple[i] = flat % n;
    flat /= n;
  }
  return tuple;
}

Pmf marginalize(const Pmf& p, std::span<const std::string> keep) {
  if (keep.empty()) fail(ErrorKind::BadScope, "marginalize needs at least one variable to keep");
  std::vector<bool> kept(p.scope().size(), false);
  for (const auto& id : keep) kept[require_position(p, id)] = true;

  std::vector<ScopeVar> scope;
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < p.scope().size(); ++i) {
    if (kept[i]) {
      scope.push_back(p.scope()[i]);
      positions.push_back(i);
    }
  }
  const auto out_strides = strides_of(scope);
  std::vector<Rational> mass(cell_count(scope), Rational(0));
  std::vector<std::size_t> tuple(p.scope().size(), 0);
  std::size_t flat = 0;
  do {
    const Rational& m = p.masses()[flat++];
    if (sgn(m) == 0) continue;
    std::size_t out = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) out += tuple[positions[k]] * out_strides[k];
    mass[out] += m;
  } while (advance(tuple, p.scope()));
  return Pmf(std::move(scope), std::move(mass));
}

Rational probability(const Pmf& p, const Event& event) {
  std::vector<std::pair<std::size_t, std::size_t>> fixed;
  for (const auto& e : event) {
    const std::size_t pos = require_position(p, e.id);
    if (e.value >= p.scope()[pos].range.size()) fail(ErrorKind::RangeMismatch, "value index out of range for " + e.id);
    fixed.emplace_back(pos, e.value);
  }
  Rational total = 0;
  std::vector<std::size_t> tuple(p.scope().size(), 0);
  std::size_t flat = 0;
  do {
    const Rational& m = p.masses()[flat++];
    if (sgn(m) == 0) continue;
    bool match = true;
    for (auto [pos, v] : fixed) match = match && tuple[pos] == v;
    if (match) total += m;
  } while (advance(tuple, p.scope()));
  return total;
}

Pmf condition(const Pmf& p, const Event& event) {
  std::vector<std::optional<std::size_t>> fixed(p.scope().size());
  for (const auto& e : event) {
    const std::size_t pos = require_position(p, e.id);
    if (e.value >= p.scope()[pos].range.size()) fail(ErrorKind::RangeMismatch, "value index out of range for " + e.id);
    if (fixed[pos] && *fixed[pos] != e.value) fail(ErrorKind::ZeroProbabilityEvent, "contradictory event on " + e.id);
    fixed[pos] = e.value;
  }
  const Rational denom = probability(p, event);
  if (sgn(denom) == 0) fail(ErrorKind::ZeroProbabilityEvent, "conditioning event has probability zero");

  std::vector<ScopeVar> scope;
  for (std::size_t i = 0; i < p.scope().size(); ++i) {
    if (!fixed[i]) scope.push_back(p.scope()[i]);
  }
  std::vector<Rational> mass;
  mass.reserve(cell_count(scope));
  std::vector<std::size_t> tuple(p.scope().size(), 0);
  std::size_t flat = 0;
  do {
    const Rational& m = p.masses()[flat++];
    bool match = true;
    for (std::size_t i = 0; i < tuple.size(); ++i) match = match && (!fixed[i] || tuple[i] == *fixed[i]);
    if (match) mass.push_back(m / denom);
  } while (advance(tuple, p.scope()));
  return Pmf(std::move(scope), std::move(mass));
}

double expectation(const Pmf& p, const std::function<double(std::span<const std::size_t>)>& f) {
  double sum = 0.0;
  std::vector<std::size_t> tuple(p.scope().size(), 0);
  std::size_t flat = 0;
  do {
    const Rational& m = p.masses()[flat++];
    if (sgn(m) != 0) sum += to_double(m) * f(tuple);
  } while (advance(tuple, p.scope()));
  return sum;
}

Pmf product(const Pmf& p, const Pmf& q) {
  for (const auto& v : q.scope()) {
    if (p.position(v.id)) fail(ErrorKind::ScopeOverlap, "variable '" + v.id + "' appears in both factors");
  }
  std::vector<ScopeVar> scope = p.scope();
  scope.insert(scope.end(), q.scope().begin(), q.scope().end());
  std::vector<Rational> mass;
  mass.reserve(p.size() * q.size());
  for (const auto& a : p.masses()) {
    for (const auto& b : q.masses()) mass.push_back(a * b);
  }
  return Pmf(std::move(scope), std::move(mass));
}

Pmf reorder(const Pmf& p, std::span<const std::string> order) {
  if (order.size() != p.scope().size()) fail(ErrorKind::BadScope, "reorder must name every scope variable");
  std::vector<std::size_t> positions;
  std::vector<ScopeVar> scope;
  for (const auto& id : order) {
    positions.push_back(require_position(p, id));
    scope.push_back(p.scope()[positions.back()]);
  }
  const auto out_strides = strides_of(scope);
  std::vector<Rational> mass(p.size(), Rational(0));
  std::vector<std::size_t> tuple(p.scope().size(), 0);
  std::size_t flat = 0;
  do {
    std::size_t out = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) out += tuple[positions[k]] * out_strides[k];
    mass[out] = p.masses()[flat++];
  } while (advance(tuple, p.scope()));
  return Pmf(std::move(scope), std::move(mass));
}

bool independent(const Pmf& p, const std::vector<std::vector<std::string>>& groups) {
  std::vector<Pmf> marginals;
  std::vector<std::string> order;
  for (const auto& g : groups) {
    marginals.push_back(marginalize(p, g));
    for (const auto& id : marginals.back().ids()) order.push_back(id);
  }
  if (order.size() != p.scope().size()) fail(ErrorKind::BadScope, "groups must partition the scope");
  Pmf joint = marginals.front();
  for (std::size_t i = 1; i < marginals.size(); ++i) joint = product(joint, marginals[i]);
  return reorder(joint, p.ids()) == p;
}

std::string to_string(const Pmf& p) {
  std::string out;
  for (std::size_t i = 0; i < p.scope().size(); ++i) {
    if (i) out += ',';
    out += p.scope()[i].id;
  }
  out += '[';
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    if (flat) out += ' ';
    const auto tuple = p.tuple_of(flat);
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) out += ',';
      out += p.scope()[i].range.label(tuple[i]);
    }
    out += '=' + causalinfo::to_string(p.masses()[flat]);
  }
  out += ']';
  return out;
}

}  // namespace causalinfo
