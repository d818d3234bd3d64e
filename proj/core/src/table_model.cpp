#include "causalinfo/table_model.hpp"

#include <algorithm>
#include <functional>

#include "causalinfo/error.hpp"
#include "causalinfo/expr.hpp"

namespace causalinfo {
namespace {

std::size_t row_count(const TableModel& m, const TableVar& v) {
  std::size_t rows = 1;
  for (std::size_t p : v.parents) rows *= m.vars[p].labels.size();
  return rows;
}

// Decodes a parent row into per-parent value indices (first parent slowest).
std::vector<std::size_t> decode_row(const TableModel& m, const TableVar& v, std::size_t row) {
  std::vector<std::size_t> t(v.parents.size());
  for (std::size_t k = v.parents.size(); k-- > 0;) {
    const std::size_t n = m.vars[v.parents[k]].labels.size();
    t[k] = row % n;
    row /= n;
  }
  return t;
}

// Keeps only table entries whose parent `var` takes a value accepted by
// `keep_value`, remapping that parent's index through `remap`.
void filter_parent(const TableModel& before, TableVar& child, std::size_t var,
                   const std::function<bool(std::size_t)>& keep_value) {
  const std::size_t noise = child.noise_labels.size();
  std::vector<std::size_t> outputs;
  for (std::size_t row = 0; row < row_count(before, child); ++row) {
    const auto t = decode_row(before, child, row);
    bool keep = true;
    for (std::size_t k = 0; k < child.parents.size(); ++k) {
      if (child.parents[k] == var && !keep_value(t[k])) keep = false;
    }
    if (!keep) continue;
    for (std::size_t n = 0; n < noise; ++n) outputs.push_back(child.outputs[row * noise + n]);
  }
  child.outputs = std::move(outputs);
}

std::optional<std::vector<Rational>> renormalize(std::vector<Rational> masses) {
  Rational total = 0;
  for (const auto& m : masses) total += m;
  if (sgn(total) == 0) return std::nullopt;
  for (auto& m : masses) m /= total;
  return masses;
}

}  // namespace

std::size_t TableModel::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].id == id) return i;
  }
  fail(ErrorKind::UnknownVariable, "'" + id + "' is not a variable of " + name);
}

TableModel to_table_model(const Scm& model) {
  if (!model.valid()) fail(ErrorKind::InvalidModel, "cannot tabulate invalid model '" + model.name() + "'");
  TableModel out;
  out.name = model.name();
  for (std::size_t i = 0; i < model.endogenous().size(); ++i) {
    const auto& nz = model.noise()[model.noise_of(i)];
    TableVar v;
    v.id = model.endogenous()[i].id;
    v.labels = model.endogenous()[i].range.labels();
    v.parents = model.parent_indices(i);
    v.noise_id = nz.id;
    v.noise_labels = nz.range.labels();
    v.noise_masses = nz.masses;
    v.outputs = model.mechanism(i);
    out.vars.push_back(std::move(v));
  }
  return out;
}

Scm to_scm(const TableModel& m) {
  std::vector<Variable> endogenous;
  std::vector<NoiseDecl> noise;
  std::vector<Assignment> assignments;
  for (const auto& v : m.vars) {
    endogenous.push_back({v.id, FiniteRange(v.labels)});
    noise.push_back({v.noise_id, FiniteRange(v.noise_labels), v.noise_masses, {}});
    std::vector<std::string> columns;
    Assignment a;
    a.target = v.id;
    a.noise = v.noise_id;
    for (std::size_t p : v.parents) {
      columns.push_back(m.vars[p].id);
      a.parents.push_back(m.vars[p].id);
    }
    columns.push_back(v.noise_id);
    std::vector<TableRow> rows;
    const std::size_t noise_n = v.noise_labels.size();
    for (std::size_t row = 0; row < row_count(m, v); ++row) {
      const auto t = decode_row(m, v, row);
      for (std::size_t n = 0; n < noise_n; ++n) {
        TableRow r;
        for (std::size_t k = 0; k < t.size(); ++k) r.key.push_back(m.vars[v.parents[k]].labels[t[k]]);
        r.key.push_back(v.noise_labels[n]);
        r.value = v.labels.at(v.outputs.at(row * noise_n + n));
        rows.push_back(std::move(r));
      }
    }
    a.body = make_table(std::move(columns), std::move(rows));
    assignments.push_back(std::move(a));
  }
  return Scm(m.name, std::move(endogenous), std::move(noise), std::move(assignments));
}

TableModel drop_variable(const TableModel& model, std::size_t var) {
  TableModel out = model;
  for (auto& child : out.vars) {
    if (std::find(child.parents.begin(), child.parents.end(), var) == child.parents.end()) continue;
    filter_parent(model, child, var, [](std::size_t value) { return value == 0; });
    child.parents.erase(std::find(child.parents.begin(), child.parents.end(), var));
  }
  out.vars.erase(out.vars.begin() + static_cast<std::ptrdiff_t>(var));
  for (auto& v : out.vars) {
    for (auto& p : v.parents) {
      if (p > var) --p;
    }
  }
  return out;
}

std::optional<TableModel> shrink_range(const TableModel& model, std::size_t var) {
  const std::size_t last = model.vars[var].labels.size() - 1;
  if (last == 0) return std::nullopt;
  TableModel out = model;
  for (auto& child : out.vars) {
    if (std::find(child.parents.begin(), child.parents.end(), var) == child.parents.end()) continue;
    filter_parent(model, child, var, [last](std::size_t value) { return value != last; });
  }
  auto& v = out.vars[var];
  v.labels.pop_back();
  for (auto& o : v.outputs) {
    if (o == last) o = 0;
  }
  return out;
}

std::optional<TableModel> drop_noise_label(const TableModel& model, std::size_t var, std::size_t k) {
  const auto& v = model.vars[var];
  if (v.noise_labels.size() < 2) return std::nullopt;
  std::vector<Rational> masses = v.noise_masses;
  masses.erase(masses.begin() + static_cast<std::ptrdiff_t>(k));
  auto normalized = renormalize(std::move(masses));
  if (!normalized) return std::nullopt;
  TableModel out = model;
  auto& w = out.vars[var];
  w.noise_masses = std::move(*normalized);
  w.noise_labels.erase(w.noise_labels.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> outputs;
  const std::size_t n = v.noise_labels.size();
  for (std::size_t i = 0; i < v.outputs.size(); ++i) {
    if (i % n != k) outputs.push_back(v.outputs[i]);
  }
  w.outputs = std::move(outputs);
  return out;
}

std::optional<std::vector<Rational>> zero_weight(const std::vector<Rational>& masses, std::size_t k) {
  if (sgn(masses.at(k)) == 0) return std::nullopt;
  std::vector<Rational> out = masses;
  out[k] = 0;
  return renormalize(std::move(out));
}

}  // namespace causalinfo
