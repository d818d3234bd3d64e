#pragma once

#include <string>
#include <vector>

#include "causalinfo/interventions.hpp"
#include "causalinfo/report.hpp"
#include "causalinfo/scm.hpp"

namespace causalinfo {

/// Arguments of H_c(Y | Z, do(X ~ X')): target Y, intervened X, protocol X',
/// optional conditioning set Z. Target, {intervened} and given are pairwise
/// disjoint; the protocol is for the intervened variable.
struct CausalQuery {
  Scm model;
  std::vector<std::string> target;
  std::string intervened;
  Protocol protocol;
  std::vector<std::string> given;
};

/// Throws BadQuery naming the violated rule.
void check_query(const CausalQuery& q);

enum class HcMethod {
  Definition,         // E_{x~X'}[H(Y | do(X=x))]
  PlugIn,             // -E_{(x,y) ~ p^{do(X=X')}}[log p(y | do(X=x))]
  CovariateSpecific,  // H(Y | X, do(X=X'))
};

enum class CondHcMethod {
  Definition,              // E_{x~X'} E_{z~p_Z^{do(X=x)}}[H(Y | Z=z, do(X=x))]
  ConditionalEntropyForm,  // H(Y | Z, X, do(X=X'))
};

/// Causal entropy in bits. `q.given` must be empty.
double causal_entropy(const CausalQuery& q, HcMethod method = HcMethod::Definition);

struct CausalEntropyCheck {
  double definition = 0.0;
  double plug_in = 0.0;
  double covariate_specific = 0.0;
  double max_slack = 0.0;
};

/// All three formulations and their largest pairwise difference.
CausalEntropyCheck causal_entropy_all(const CausalQuery& q);

/// H(Y) - H_c(Y | do(X ~ X')). Not clamped; may be negative.
double causal_information_gain(const CausalQuery& q);

/// Entropy of Y after the stochastic intervention, H(Y | do(X=X')).
double post_stochastic_entropy(const CausalQuery& q);

/// Conditional causal entropy; intervention always precedes conditioning.
/// `q.given` must be non-empty.
double conditional_causal_entropy(const CausalQuery& q, CondHcMethod method = CondHcMethod::Definition);

/// H(Y | Z) on the observational joint minus the conditional causal entropy.
double conditional_causal_information_gain(const CausalQuery& q);

/// H_c(Y | do) - H_c(Y | Z, do).
double post_intervention_mutual_information(const CausalQuery& q);

/// E_{x~X'}[I(Y; Z | do(X=x))], the protocol average of post-atomic mutual
/// information.
double average_post_atomic_mutual_information(const CausalQuery& q);

/// H_c(Y | do) = sum_i H_c(Y_i | Y_<i, do) for the given ordering.
PropReport check_chain_rule_hc(const Scm& model, const std::vector<std::string>& targets, const std::string& intervened,
                               const Protocol& protocol);

/// I_c(Y | do) = sum_i I_c(Y_i | Y_<i, do) for the given ordering.
PropReport check_chain_rule_ic(const Scm& model, const std::vector<std::string>& targets, const std::string& intervened,
                               const Protocol& protocol);

/// Witness for a query on `model` (canonical text, protocol literal).
Witness make_witness(const std::string& kind, const Scm& model, const Protocol& protocol,
                     const std::vector<std::string>& target, const std::vector<std::string>& given,
                     const std::string& relation, double lhs, double rhs);

}  // namespace causalinfo
