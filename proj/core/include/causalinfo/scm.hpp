#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causalinfo/expr.hpp"
#include "causalinfo/finite_range.hpp"
#include "causalinfo/pmf.hpp"
#include "causalinfo/rational.hpp"

namespace causalinfo {

struct Variable {
  std::string id;
  FiniteRange range;

  bool operator==(const Variable&) const = default;
};

/// Exogenous noise variable together with its (not yet validated) masses.
struct NoiseDecl {
  std::string id;
  FiniteRange range;
  std::vector<Rational> masses;
  SourceSpan span;
};

/// Structural assignment target := body(parents..., noise).
struct Assignment {
  std::string target;
  std::vector<std::string> parents;
  std::string noise;
  ExprPtr body;
  SourceSpan span;
};

struct Violation {
  enum class Kind { Structure, Cycle, NonTotal, RangeViolation, UnnormalizedNoise };
  Kind kind = Kind::Structure;
  std::string variable;
  std::string message;
  std::vector<std::string> path;  // cycle witness, first == last
  SourceSpan span;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

std::string_view to_string(Violation::Kind kind);

/// Finite discrete structural causal model.
///
/// Construction never throws for semantic problems: it records every
/// violation in report() and the inference entry points refuse invalid
/// models with Error(InvalidModel). A valid model carries its
/// lexicographically-least topological order (by declaration index) and
/// each assignment compiled to a lookup table over (parents..., noise),
/// noise varying fastest.
///
/// Copies share the immutable internals.
class Scm {
 public:
  Scm(std::string name, std::vector<Variable> endogenous, std::vector<NoiseDecl> noise,
      std::vector<Assignment> assignments);

  const std::string& name() const;
  const std::vector<Variable>& endogenous() const;
  const std::vector<NoiseDecl>& noise() const;
  /// Assignment i belongs to endogenous(i) (valid models only; invalid models
  /// keep the declaration order they were given).
  const std::vector<Assignment>& assignments() const;

  const ValidationReport& report() const;
  bool valid() const { return report().ok(); }

  std::optional<std::size_t> index_of(std::string_view endogenous_id) const;
  std::optional<std::size_t> noise_index_of(std::string_view noise_id) const;
  std::size_t require_index(std::string_view endogenous_id) const;
  const Variable& variable(std::string_view endogenous_id) const;

  // Valid models only.
  const std::vector<std::size_t>& topological_order() const;
  const std::vector<std::size_t>& parent_indices(std::size_t var) const;
  std::size_t noise_of(std::size_t var) const;
  const std::vector<std::size_t>& mechanism(std::size_t var) const;
  Pmf noise_pmf(std::size_t noise_index) const;

  /// Product of all endogenous and noise range sizes, saturating.
  std::size_t joint_cells() const;

  /// Directed path from -> to in the causal graph (endogenous ids).
  bool has_directed_path(std::string_view from, std::string_view to) const;

  /// Same name, variables, noise distributions, and assignment functions.
  bool structurally_equal(const Scm& other) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

ValidationReport validate(const Scm& model);

struct InferenceLimits {
  std::size_t max_joint_cells = 1'000'000;
};

/// Exact joint of `vars` by a topological forward pass over ancestors of
/// `vars`, extending the running joint with one assignment-induced CPD at a
/// time. Scope order follows declaration order.
Pmf entailed(const Scm& model, std::span<const std::string> vars, const InferenceLimits& limits = {});

/// Same contract as entailed(), computed by enumerating the full joint noise
/// space and evaluating every assignment body directly.
Pmf entailed_oracle(const Scm& model, std::span<const std::string> vars, const InferenceLimits& limits = {});

std::vector<std::string> endogenous_ids(const Scm& model);

}  // namespace causalinfo
