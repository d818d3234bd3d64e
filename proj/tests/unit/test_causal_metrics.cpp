#include <gtest/gtest.h>

#include <algorithm>

#include "causalinfo/causal_metrics.hpp"
#include "causalinfo/error.hpp"
#include "causalinfo/info_metrics.hpp"
#include "causalinfo/prop_suite.hpp"
#include "test_support.hpp"

using namespace causalinfo;
using namespace testing_support;

namespace {

using Ids = std::vector<std::string>;

double hc_oracle(const Scm& m, const Protocol& p, const Ids& target, const Ids& given = {}) {
  Ids vars = target;
  vars.insert(vars.end(), given.begin(), given.end());
  double h = 0.0;
  for (std::size_t x = 0; x < p.range().size(); ++x) {
    if (sgn(p.mass(x)) == 0) continue;
    h += p.mass(x).get_d() * naive_cond_entropy(brute_force(m, vars, std::make_pair(p.target(), x)), target.size());
  }
  return h;
}

double observational_cond_entropy(const Scm& m, const Ids& target, const Ids& given) {
  Ids vars = target;
  vars.insert(vars.end(), given.begin(), given.end());
  return naive_cond_entropy(brute_force(m, vars), target.size());
}

// E_x[I(Y;Z | do(X=x))] from brute-force post-atomic joints.
double average_mi_oracle(const Scm& m, const Protocol& p, const Ids& target, const Ids& given) {
  Ids vars = target;
  vars.insert(vars.end(), given.begin(), given.end());
  double total = 0.0;
  for (std::size_t x = 0; x < p.range().size(); ++x) {
    if (sgn(p.mass(x)) == 0) continue;
    const Pmf joint = brute_force(m, vars, std::make_pair(p.target(), x));
    const double h_y = naive_entropy(marginalize(joint, target).masses());
    total += p.mass(x).get_d() * (h_y - naive_cond_entropy(joint, target.size()));
  }
  return total;
}

ErrorKind query_error(const CausalQuery& q) {
  try {
    check_query(q);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

Protocol bern(const Scm& m, const std::string& x, long n0, long n1, long d) {
  return Protocol::over(m, x, qs({{n0, d}, {n1, d}}));
}

}  // namespace

TEST(CausalEntropy, ExampleModelAllMethods) {
  const Scm m = fixture("paper_ex1.scm");
  const CausalQuery q{m, {"Y"}, "X", bern(m, "X", 2, 1, 3), {}};
  EXPECT_NEAR(causal_entropy(q, HcMethod::Definition), 1.0, 1e-12);
  EXPECT_NEAR(causal_entropy(q, HcMethod::PlugIn), 1.0, 1e-12);
  EXPECT_NEAR(causal_entropy(q, HcMethod::CovariateSpecific), 1.0, 1e-12);
  const double h_stochastic = std::log2(3.0) / 3 + 0.5 + std::log2(6.0) / 6;
  EXPECT_NEAR(post_stochastic_entropy(q), h_stochastic, 1e-12);
  EXPECT_NEAR(h_stochastic, 1.459147917, 1e-9);
}

TEST(CausalEntropy, GateModel) {
  const Scm m = fixture("gate.scm");
  const CausalQuery q{m, {"Y"}, "X", bern(m, "X", 1, 1, 2), {}};
  const auto all = causal_entropy_all(q);
  EXPECT_NEAR(all.definition, 0.5, 1e-12);
  EXPECT_LE(all.max_slack, 1e-12);
  const double h_y = naive_entropy(qs({{19, 20}, {1, 20}}));
  EXPECT_NEAR(h_y, 0.286397, 1e-6);
  EXPECT_NEAR(causal_information_gain(q), h_y - 0.5, 1e-12);
  EXPECT_LT(causal_information_gain(q), 0.0);
}

TEST(CausalEntropy, DpiChainPointMass) {
  const Scm m = fixture("dpi_chain.scm");
  const Protocol p = Protocol::point_mass(m, "X", 0);
  EXPECT_NEAR(causal_entropy({m, {"Y"}, "X", p, {}}), 1.0, 1e-12);
  EXPECT_NEAR(causal_entropy({m, {"Z"}, "X", p, {}}), 0.0, 1e-12);
  EXPECT_NEAR(causal_information_gain({m, {"Y"}, "X", p, {}}), 0.5, 1e-12);
  EXPECT_NEAR(causal_information_gain({m, {"Z"}, "X", p, {}}), 1.0, 1e-12);
}

TEST(CausalEntropy, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    if (m.endogenous().size() < 2) continue;
    const Protocol p = gen_protocol(m, derive_seed(seed, 3));
    for (const auto& v : m.endogenous()) {
      if (v.id == p.target()) continue;
      const CausalQuery q{m, {v.id}, p.target(), p, {}};
      EXPECT_NEAR(causal_entropy(q), hc_oracle(m, p, {v.id}), 1e-9) << seed;
    }
  }
}

TEST(CausalInformationGain, NoTotalEffectMeansZero) {
  const Scm m = parse_scm(
      "scm iso { noise N_X ~ {0: 1/3, 1: 2/3} noise N_Y ~ {a: 1/4, b: 3/4}\n"
      "var X : {0, 1} = N_X\n var Y : {a, b} = N_Y }");
  ASSERT_FALSE(has_total_causal_effect(m, "X", "Y"));
  for (auto [n0, n1] : {std::pair{1L, 0L}, std::pair{1L, 1L}, std::pair{0L, 1L}}) {
    const Protocol p = Protocol::over(m, "X", {q(n0, n0 + n1), q(n1, n0 + n1)});
    EXPECT_NEAR(causal_information_gain({m, {"Y"}, "X", p, {}}), 0.0, 1e-12);
  }
}

TEST(CausalQuery, DisjointnessRules) {
  const Scm m = fixture("contrast_agent.scm");
  const Protocol p = bern(m, "X", 1, 1, 2);
  EXPECT_EQ(query_error({m, {"Y"}, "X", p, {"X"}}), ErrorKind::BadQuery);
  EXPECT_EQ(query_error({m, {"X"}, "X", p, {}}), ErrorKind::BadQuery);
  EXPECT_EQ(query_error({m, {"Y"}, "X", p, {"Y"}}), ErrorKind::BadQuery);
  EXPECT_EQ(query_error({m, {}, "X", p, {}}), ErrorKind::BadQuery);
  EXPECT_EQ(query_error({m, {"Z"}, "Y", p, {}}), ErrorKind::BadQuery);
  EXPECT_EQ(query_error({m, {"Z"}, "X", p, {"Y"}}), ErrorKind::Internal);
}

TEST(ConditionalCausalEntropy, VacuousAndCopy) {
  const Scm m = parse_scm(
      "scm cc { noise N_X ~ {0: 1/2, 1: 1/2} noise N_Y ~ {0: 1/3, 1: 2/3} noise N_Z ~ {0: 1/5, 1: 4/5}\n"
      "noise N_C ~ {0: 1}\n"
      "var X : {0, 1} = N_X\n var Y : {0, 1, 2} = X + N_Y\n var Z : {0, 1} = N_Z\n var C : {0, 1, 2} = Y }");
  const Protocol p = bern(m, "X", 1, 3, 4);
  const double hc = causal_entropy({m, {"Y"}, "X", p, {}});
  EXPECT_NEAR(conditional_causal_entropy({m, {"Y"}, "X", p, {"Z"}}), hc, 1e-12);
  EXPECT_NEAR(conditional_causal_entropy({m, {"Y"}, "X", p, {"C"}}), 0.0, 1e-12);
  EXPECT_NEAR(post_intervention_mutual_information({m, {"Y"}, "X", p, {"C"}}), hc, 1e-12);
  EXPECT_NEAR(post_intervention_mutual_information({m, {"Y"}, "X", p, {"Z"}}), 0.0, 1e-12);
}

TEST(ConditionalCausalEntropy, ContrastAgentAgainstOracle) {
  const Scm m = fixture("contrast_agent.scm");
  for (const Protocol& p : {bern(m, "X", 1, 1, 2), bern(m, "X", 0, 1, 1), bern(m, "X", 2, 3, 5)}) {
    const CausalQuery q{m, {"Y"}, "X", p, {"Z"}};
    const double oracle = hc_oracle(m, p, {"Y"}, {"Z"});
    EXPECT_NEAR(conditional_causal_entropy(q, CondHcMethod::Definition), oracle, 1e-9);
    EXPECT_NEAR(conditional_causal_entropy(q, CondHcMethod::ConditionalEntropyForm), oracle, 1e-9);
    EXPECT_NEAR(conditional_causal_information_gain(q), observational_cond_entropy(m, {"Y"}, {"Z"}) - oracle, 1e-9);
    EXPECT_NEAR(post_intervention_mutual_information(q), average_mi_oracle(m, p, {"Y"}, {"Z"}), 1e-9);
    EXPECT_NEAR(average_post_atomic_mutual_information(q), average_mi_oracle(m, p, {"Y"}, {"Z"}), 1e-9);
  }
}

TEST(ConditionalCausalInformationGain, ContrastAgentPointMass) {
  const Scm m = fixture("contrast_agent.scm");
  const Protocol p = Protocol::point_mass(m, "X", 1);
  const CausalQuery q{m, {"Y"}, "X", p, {"Z"}};
  const Ids yz{"Y", "Z"};
  const double h_obs = cond_entropy(entailed(m, yz), Ids{"Z"});
  const double h_do = cond_entropy(post_dist(m, AtomicIntervention{"X", 1}, yz), Ids{"Z"});
  EXPECT_NEAR(conditional_causal_information_gain(q), h_obs - h_do, 1e-12);
  const double mi_do = mutual_information(post_dist(m, AtomicIntervention{"X", 1}, yz), Ids{"Y"}, Ids{"Z"});
  EXPECT_NEAR(post_intervention_mutual_information(q), mi_do, 1e-12);
  EXPECT_GT(mi_do, 0.1);
}

TEST(ConditionalCausalInformationGain, UnrelatedInterventionGivesZero) {
  const Scm m = parse_scm(
      "scm un { noise N_X ~ {0: 1/2, 1: 1/2} noise N_Y ~ {0: 1/3, 1: 2/3} noise N_Z ~ {0: 3/5, 1: 2/5}\n"
      "var X : {0, 1} = N_X\n var Y : {0, 1} = N_Y\n var Z : {0, 1} = N_Z }");
  const CausalQuery q{m, {"Y"}, "X", bern(m, "X", 1, 2, 3), {"Z"}};
  EXPECT_NEAR(conditional_causal_information_gain(q), 0.0, 1e-12);
}

TEST(ConditionalCausalInformationGain, RandomModelsTermByTerm) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    if (m.endogenous().size() < 3) continue;
    SplitMix64 rng(seed);
    const Protocol p = gen_protocol(m, m.endogenous()[0].id, rng);
    const Ids y{m.endogenous()[2].id};
    const Ids z{m.endogenous()[1].id};
    const CausalQuery q{m, y, p.target(), p, z};
    EXPECT_NEAR(conditional_causal_information_gain(q),
                observational_cond_entropy(m, y, z) - hc_oracle(m, p, y, z), 1e-9)
        << seed;
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(ChainRule, SingletonIsTrivial) {
  const Scm m = fixture("paper_ex1.scm");
  const Protocol p = bern(m, "X", 2, 1, 3);
  const PropReport hc = check_chain_rule_hc(m, {"Y"}, "X", p);
  const PropReport ic = check_chain_rule_ic(m, {"Y"}, "X", p);
  EXPECT_EQ(hc.status, Status::Pass);
  EXPECT_EQ(ic.status, Status::Pass);
  EXPECT_EQ(std::get<double>(hc.lhs), std::get<double>(hc.rhs));
}

TEST(ChainRule, TwoVariableOnExampleWithChild) {
  const Scm m = fixture("paper_ex1_w.scm");
  const Protocol p = bern(m, "X", 2, 1, 3);
  const double lhs = causal_entropy({m, {"Y", "W"}, "X", p, {}});
  const double rhs = causal_entropy({m, {"Y"}, "X", p, {}}) + conditional_causal_entropy({m, {"W"}, "X", p, {"Y"}});
  EXPECT_NEAR(lhs, rhs, 1e-9);
  EXPECT_NEAR(lhs, hc_oracle(m, p, {"Y", "W"}), 1e-9);
  EXPECT_EQ(check_chain_rule_hc(m, {"Y", "W"}, "X", p).status, Status::Pass);
}

TEST(ChainRule, PermutationKeepsTotal) {
  const Scm m = fixture("paper_ex1_w.scm");
  const Protocol p = bern(m, "X", 1, 1, 2);
  const PropReport a = check_chain_rule_ic(m, {"Y", "W"}, "X", p);
  const PropReport b = check_chain_rule_ic(m, {"W", "Y"}, "X", p);
  EXPECT_NEAR(std::get<double>(a.lhs), std::get<double>(b.lhs), 1e-12);
  EXPECT_NEAR(std::get<double>(a.rhs), std::get<double>(b.rhs), 1e-9);
  const double first_y = causal_information_gain({m, {"Y"}, "X", p, {}});
  const double first_w = causal_information_gain({m, {"W"}, "X", p, {}});
  EXPECT_GT(std::abs(first_y - first_w), 1e-3);
}

TEST(ChainRuleProperty, RandomModelsAndOrderings) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    if (m.endogenous().size() < 2) continue;
    const Protocol p = gen_protocol(m, derive_seed(seed, 5));
    Ids targets;
    for (const auto& v : m.endogenous()) {
      if (v.id != p.target()) targets.push_back(v.id);
    }
    SplitMix64 rng(seed);
    for (std::size_t i = targets.size(); i > 1; --i) std::swap(targets[i - 1], targets[rng.below(i)]);
    const PropReport hc = check_chain_rule_hc(m, targets, p.target(), p);
    const PropReport ic = check_chain_rule_ic(m, targets, p.target(), p);
    EXPECT_EQ(hc.status, Status::Pass) << seed << ' ' << hc.slack;
    EXPECT_EQ(ic.status, Status::Pass) << seed << ' ' << ic.slack;
    EXPECT_FALSE(hc.witness.has_value());
  }
}
