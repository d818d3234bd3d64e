#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "causalinfo/rational.hpp"
#include "causalinfo/scm.hpp"

namespace causalinfo {

/// Flat, editable view of a valid SCM with every assignment as a lookup
/// table over (parents..., noise), noise varying fastest. Used by the
/// generator and the witness shrinker.
struct TableVar {
  std::string id;
  std::vector<std::string> labels;
  std::vector<std::size_t> parents;  // indices into TableModel::vars
  std::string noise_id;
  std::vector<std::string> noise_labels;
  std::vector<Rational> noise_masses;
  std::vector<std::size_t> outputs;
};

struct TableModel {
  std::string name;
  std::vector<TableVar> vars;

  std::size_t index_of(const std::string& id) const;
};

TableModel to_table_model(const Scm& model);
Scm to_scm(const TableModel& model);

/// Drops `var`, fixing it to its first value wherever it was a parent.
TableModel drop_variable(const TableModel& model, std::size_t var);

/// Removes the last label of `var`; outputs equal to it become the first
/// label and children lose the matching rows. nullopt when only one label.
std::optional<TableModel> shrink_range(const TableModel& model, std::size_t var);

/// Removes noise label `k` of `var` and renormalizes; nullopt when that
/// would leave no mass or no labels.
std::optional<TableModel> drop_noise_label(const TableModel& model, std::size_t var, std::size_t k);

/// Sets the mass at `k` to zero and renormalizes; nullopt when already zero
/// or when nothing would remain.
std::optional<std::vector<Rational>> zero_weight(const std::vector<Rational>& masses, std::size_t k);

}  // namespace causalinfo
