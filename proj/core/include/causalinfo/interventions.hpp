#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "causalinfo/pmf.hpp"
#include "causalinfo/scm.hpp"

namespace causalinfo {

/// Distribution of the auxiliary variable X' that picks which atomic
/// intervention on `target` is performed. Its range is the target's range,
/// same labels in the same order.
class Protocol {
 public:
  /// Throws InvalidPmf unless masses form a distribution over `range`.
  Protocol(std::string target, FiniteRange range, std::vector<Rational> masses);

  /// Protocol for `target` of `model`; throws UnknownVariable.
  static Protocol over(const Scm& model, const std::string& target, std::vector<Rational> masses);
  static Protocol point_mass(const Scm& model, const std::string& target, std::size_t value);

  const std::string& target() const noexcept { return target_; }
  /// Scope is the single auxiliary variable "<target>'".
  const Pmf& dist() const noexcept { return dist_; }
  const FiniteRange& range() const { return dist_.scope().front().range; }
  const Rational& mass(std::size_t value) const { return dist_.masses().at(value); }
  std::vector<std::size_t> support() const;

  /// Throws UnknownVariable / RangeMismatch when the protocol does not fit.
  void check_against(const Scm& model) const;

 private:
  std::string target_;
  Pmf dist_;
};

struct AtomicIntervention {
  std::string target;
  std::size_t value = 0;
};

struct StochasticIntervention {
  Protocol protocol;
};

/// Replaces the target's assignment and its noise.
struct GeneralIntervention {
  Assignment assignment;
  NoiseDecl noise;
};

using Intervention = std::variant<AtomicIntervention, StochasticIntervention, GeneralIntervention>;

/// Post-intervention model. The input is left untouched.
///   Atomic:     target := constant, its noise replaced by a point mass.
///   Stochastic: target := X', with X' a fresh noise variable ~ protocol.
///   General:    the supplied assignment and noise.
/// Throws CycleCreated, RangeMismatch, UnknownVariable, InvalidModel.
Scm apply(const Scm& model, const Intervention& iv);

/// entailed(apply(model, iv), vars).
Pmf post_dist(const Scm& model, const Intervention& iv, std::span<const std::string> vars);

/// p^{do(X=X')}_{vars | X=x}: stochastic intervention, then condition on the
/// intervened variable. Throws ZeroProbabilityEvent for x outside the
/// protocol's support and BadQuery when vars contains the target.
Pmf covariate_specific(const Scm& model, const Protocol& protocol, std::size_t x, std::span<const std::string> vars);

/// True iff some atomic intervention on `cause` changes the marginal of
/// `effect` (exact comparison over every value of cause).
bool has_total_causal_effect(const Scm& model, const std::string& cause, const std::string& effect);

}  // namespace causalinfo
