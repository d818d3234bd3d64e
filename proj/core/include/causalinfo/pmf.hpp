#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causalinfo/finite_range.hpp"
#include "causalinfo/rational.hpp"

namespace causalinfo {

struct ScopeVar {
  std::string id;
  FiniteRange range;

  bool operator==(const ScopeVar&) const = default;
};

/// One `variable = value-index` term of a partial assignment.
struct EventItem {
  std::string id;
  std::size_t value = 0;
};
using Event = std::vector<EventItem>;

/// Exact probability mass function over an ordered tuple of finite-range
/// variables. The table is dense and row-major: the first scope variable
/// varies slowest.
///
/// Construction enforces the invariants (non-negative entries summing to
/// exactly one), so every Pmf in existence is normalized.
class Pmf {
 public:
  /// Throws Error(InvalidPmf) on a size mismatch, a negative entry, or a
  /// total different from 1; Error(BadScope) on duplicate variable ids.
  Pmf(std::vector<ScopeVar> scope, std::vector<Rational> mass);

  static Pmf point_mass(std::vector<ScopeVar> scope, std::span<const std::size_t> at);
  static Pmf uniform(std::vector<ScopeVar> scope);

  const std::vector<ScopeVar>& scope() const noexcept { return scope_; }
  const std::vector<Rational>& masses() const noexcept { return mass_; }
  std::size_t size() const noexcept { return mass_.size(); }

  std::optional<std::size_t> position(std::string_view id) const;
  std::vector<std::string> ids() const;

  std::size_t flat_index(std::span<const std::size_t> tuple) const;
  std::vector<std::size_t> tuple_of(std::size_t flat) const;
  const Rational& at(std::span<const std::size_t> tuple) const { return mass_[flat_index(tuple)]; }

  bool operator==(const Pmf&) const = default;

 private:
  std::vector<ScopeVar> scope_;
  std::vector<Rational> mass_;
};

/// Sum out every variable not in `keep`. The result keeps p's variable order.
/// Throws UnknownVariable for ids outside the scope, BadScope for empty keep.
Pmf marginalize(const Pmf& p, std::span<const std::string> keep);

/// p restricted to the event and renormalized; event variables leave the
/// scope. Throws UnknownVariable or ZeroProbabilityEvent.
Pmf condition(const Pmf& p, const Event& event);

/// Rational probability of a partial assignment.
Rational probability(const Pmf& p, const Event& event);

/// Sum of to_double(p(t)) * f(t); zero-mass cells contribute exactly 0 and
/// f is not evaluated there.
double expectation(const Pmf& p, const std::function<double(std::span<const std::size_t>)>& f);

/// Independent product; scope is p's followed by q's. Throws ScopeOverlap.
Pmf product(const Pmf& p, const Pmf& q);

/// Same distribution with the scope permuted into `order` (which must name
/// every scope variable exactly once).
Pmf reorder(const Pmf& p, std::span<const std::string> order);

/// Exact test: the joint equals the product of the marginals of `groups`
/// (which must partition the scope).
bool independent(const Pmf& p, const std::vector<std::vector<std::string>>& groups);

/// Human-readable exact rendering, e.g. "Y[0=1/2 1=1/2 2=0]".
std::string to_string(const Pmf& p);

}  // namespace causalinfo
