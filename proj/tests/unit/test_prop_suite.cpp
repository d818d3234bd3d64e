#include <gtest/gtest.h>

#include <algorithm>

#include "causalinfo/causal_metrics.hpp"
#include "causalinfo/error.hpp"
#include "causalinfo/prop_suite.hpp"
#include "causalinfo/table_model.hpp"
#include "test_support.hpp"

using namespace causalinfo;
using namespace testing_support;

namespace {

const PropReport* find(const std::vector<PropReport>& rs, const std::string& prop) {
  for (const auto& r : rs) {
    if (r.prop == prop) return &r;
  }
  return nullptr;
}

std::string dump(const std::vector<PropReport>& rs) {
  std::string out;
  for (const auto& r : rs) {
    out += r.prop + ":" + std::string(to_string(r.status)) + " " + r.detail + "\n";
  }
  return out;
}

bool same_reports(const std::vector<PropReport>& a, const std::vector<PropReport>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].prop != b[i].prop || a[i].status != b[i].status || a[i].lhs != b[i].lhs || a[i].rhs != b[i].rhs ||
        a[i].detail != b[i].detail) {
      return false;
    }
  }
  return true;
}

bool same_witness(const Witness& a, const Witness& b) {
  return a.kind == b.kind && a.scm_text == b.scm_text && a.protocol == b.protocol && a.target == b.target &&
         a.lhs == b.lhs && a.rhs == b.rhs && a.trial == b.trial;
}

}  // namespace

TEST(Generator, DeterministicPerSeed) {
  EXPECT_TRUE(gen_scm({.seed = 42}).structurally_equal(gen_scm({.seed = 42})));
  EXPECT_EQ(serialize_scm(gen_scm({.seed = 42})), serialize_scm(gen_scm({.seed = 42})));
  EXPECT_NE(serialize_scm(gen_scm({.seed = 42})), serialize_scm(gen_scm({.seed = 43})));
}

TEST(Generator, SeedStreamIsValidAndBounded) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    ASSERT_TRUE(validate(m).ok()) << seed;
    EXPECT_LE(m.endogenous().size(), 4u);
    for (std::size_t i = 0; i < m.endogenous().size(); ++i) {
      EXPECT_LE(m.endogenous()[i].range.size(), 3u);
      EXPECT_GE(m.endogenous()[i].range.size(), 2u);
      for (std::size_t p : m.parent_indices(i)) EXPECT_LT(p, i);
    }
  }
}

TEST(Generator, SingleVariableAndChainShapes) {
  const Scm one = gen_scm({.seed = 5, .max_endogenous = 1});
  ASSERT_EQ(one.endogenous().size(), 1u);
  EXPECT_EQ(one.assignments()[0].noise, "N_V0");
  EXPECT_EQ(one.assignments()[0].body->kind, ExprKind::Table);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scm chain = gen_scm({.seed = seed, .shape = GenShape::Chain});
    ASSERT_EQ(chain.endogenous().size(), 3u);
    EXPECT_EQ(chain.parent_indices(1), std::vector<std::size_t>{0});
    EXPECT_EQ(chain.parent_indices(2), std::vector<std::size_t>{1});
  }
  EXPECT_THROW(gen_scm({.seed = 1, .max_range = 0}), Error);
  EXPECT_THROW(gen_scm({.seed = 1, .edge_probability = q(3, 2)}), Error);
}

TEST(Generator, WeightsAreExactAndNeverAllZero) {
  SplitMix64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto w = gen_weights(rng, 3, 2);
    Rational total = 0;
    for (const auto& x : w) total += x;
    EXPECT_EQ(total, 1);
  }
}

TEST(TableModel, RoundTripPreservesDistribution) {
  for (const auto* name : {"paper_ex1.scm", "gate.scm", "dpi_chain.scm", "contrast_agent.scm"}) {
    const Scm m = fixture(name);
    const Scm back = to_scm(to_table_model(m));
    ASSERT_TRUE(back.valid()) << name;
    const auto all = endogenous_ids(m);
    EXPECT_EQ(entailed(back, all), entailed(m, all)) << name;
  }
}

TEST(TableModel, ShrinkMovesKeepModelsValid) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const TableModel tm = to_table_model(gen_scm({.seed = seed}));
    for (std::size_t v = 0; v < tm.vars.size(); ++v) {
      if (tm.vars.size() > 1) {
        EXPECT_TRUE(to_scm(drop_variable(tm, v)).valid()) << seed;
      }
      if (auto s = shrink_range(tm, v)) {
        EXPECT_TRUE(to_scm(*s).valid()) << seed;
      }
      for (std::size_t k = 0; k < tm.vars[v].noise_labels.size(); ++k) {
        if (auto s = drop_noise_label(tm, v, k)) {
          EXPECT_TRUE(to_scm(*s).valid()) << seed;
        }
      }
    }
  }
}

TEST(CheckAll, ExampleModelAllPass) {
  const Scm m = fixture("paper_ex1.scm");
  const auto rs = check_all(m, Protocol::over(m, "X", qs({{2, 3}, {1, 3}})));
  EXPECT_TRUE(all_passed(rs)) << dump(rs);
  EXPECT_GE(rs.size(), 11u);
  const PropReport* plug = find(rs, "Hc-PlugIn");
  ASSERT_NE(plug, nullptr);
  EXPECT_NEAR(std::get<double>(plug->lhs), 1.0, 1e-12);
  EXPECT_NEAR(std::get<double>(plug->rhs), 1.0, 1e-12);
  EXPECT_NE(find(rs, "AtomicEqualsConditioning"), nullptr);
}

TEST(CheckAll, GateShowsCausalEntropyAboveEntropy) {
  const Scm m = fixture("gate.scm");
  const auto rs = check_all(m, Protocol::over(m, "X", qs({{1, 2}, {1, 2}})));
  EXPECT_TRUE(all_passed(rs)) << dump(rs);
  const PropReport* info = find(rs, "Hc-ExceedsH");
  ASSERT_NE(info, nullptr);
  EXPECT_EQ(info->status, Status::Info);
  EXPECT_NEAR(std::get<double>(info->lhs), 0.5, 1e-12);
  EXPECT_NEAR(std::get<double>(info->rhs), 0.286397, 1e-6);
}

TEST(CheckAll, DpiChainReportsViolation) {
  const Scm m = fixture("dpi_chain.scm");
  const auto rs = check_all(m, Protocol::point_mass(m, "X", 0));
  EXPECT_TRUE(all_passed(rs)) << dump(rs);
  const PropReport* info = find(rs, "CausalDPI-Violated");
  ASSERT_NE(info, nullptr);
  EXPECT_NEAR(std::get<double>(info->lhs), 1.0, 1e-12);
  EXPECT_NEAR(std::get<double>(info->rhs), 0.5, 1e-12);
}

TEST(CheckAll, IndependenceBoundEqualityCase) {
  // Y1 and Y2 both copy X: dependent after do(X=X') yet conditionally
  // independent given X, and the bound is tight.
  const Scm m = parse_scm(
      "scm cp { noise N_X ~ {0: 1/2, 1: 1/2} noise N_A ~ {0: 1} noise N_B ~ {0: 1}\n"
      "var X : {0, 1} = N_X\n var A : {0, 1} = X\n var B : {0, 1} = X }");
  const Protocol p = Protocol::over(m, "X", qs({{1, 3}, {2, 3}}));
  const auto rs = check_query_props(m, p, {"A", "B"}, {});
  const PropReport* r = find(rs, "IndependenceBound");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->status, Status::Pass) << r->detail;
  EXPECT_NE(r->detail.find("equality"), std::string::npos);
  const auto all = endogenous_ids(m);
  EXPECT_FALSE(independent(post_dist(m, StochasticIntervention{p}, std::vector<std::string>{"A", "B"}), {{"A"}, {"B"}}));
}

TEST(CheckAll, DeterministicAcrossJobs) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    const Protocol p = gen_protocol(m, seed);
    const auto a = check_all(m, p, {.seed = seed, .queries = 6, .jobs = 1});
    const auto b = check_all(m, p, {.seed = seed, .queries = 6, .jobs = 3});
    EXPECT_TRUE(same_reports(a, b)) << seed;
  }
}

TEST(CheckAllProperty, GeneratedModelsNeverFail) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    const auto rs = check_all(m, gen_protocol(m, derive_seed(seed, 1)), {.seed = seed});
    ASSERT_TRUE(all_passed(rs)) << seed << "\n" << dump(rs);
  }
}

TEST(Hunt, SeededCandidatesReproduceKnownValues) {
  const Scm chain = fixture("dpi_chain.scm");
  HuntOptions dpi{.budget = 0, .shrink = false};
  dpi.candidates.push_back({chain, Protocol::point_mass(chain, "X", 0), {"Y", "Z"}});
  const auto w = hunt(HuntKind::Dpi, {}, dpi);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w[0].lhs, 1.0, 1e-12);
  EXPECT_NEAR(w[0].rhs, 0.5, 1e-12);

  const Scm gate = fixture("gate.scm");
  HuntOptions neg{.budget = 0, .shrink = false};
  neg.candidates.push_back({gate, Protocol::over(gate, "X", qs({{1, 2}, {1, 2}})), {"Y"}});
  const auto v = hunt(HuntKind::NegativeGain, {}, neg);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0].lhs, -0.213603, 1e-6);
}

TEST(Hunt, ShrunkWitnessesStillViolate) {
  const Scm gate = fixture("gate.scm");
  HuntOptions neg{.budget = 0};
  neg.candidates.push_back({gate, Protocol::over(gate, "X", qs({{1, 2}, {1, 2}})), {"Y"}});
  const auto v = hunt(HuntKind::NegativeGain, {}, neg);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_LT(v[0].lhs, -1e-9);
  const ReplayResult r = replay(v[0]);
  EXPECT_TRUE(r.reproduced);
  EXPECT_NEAR(r.lhs, v[0].lhs, 1e-12);
}

TEST(Hunt, BudgetZeroIsEmpty) {
  EXPECT_TRUE(hunt(HuntKind::Dpi, {.seed = 7}, {.budget = 0}).empty());
  EXPECT_TRUE(hunt(HuntKind::NegativeGain, {.seed = 7}, {.budget = 0}).empty());
}

TEST(Hunt, DeterministicAcrossJobsAndReplayable) {
  for (HuntKind kind : {HuntKind::NegativeGain, HuntKind::Dpi}) {
    const auto a = hunt(kind, {.seed = 7}, {.budget = 2000, .max_witnesses = 3, .jobs = 1});
    const auto b = hunt(kind, {.seed = 7}, {.budget = 2000, .max_witnesses = 3, .jobs = 4});
    ASSERT_EQ(a.size(), 3u);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_TRUE(same_witness(a[i], b[i]));
      if (i > 0) {
        EXPECT_LT(a[i - 1].trial, a[i].trial);
      }
      const ReplayResult r = replay(a[i]);
      EXPECT_TRUE(r.reproduced);
      EXPECT_NEAR(r.lhs, a[i].lhs, 1e-12);
      EXPECT_NEAR(r.rhs, a[i].rhs, 1e-12);
      // check_all on the witness reports the same phenomenon.
      const Scm m = parse_scm(a[i].scm_text);
      const auto rs = check_model(m, parse_protocol(m, a[i].intervene, a[i].protocol));
      EXPECT_TRUE(all_passed(rs));
      EXPECT_NE(find(rs, kind == HuntKind::Dpi ? "CausalDPI-Violated" : "Hc-ExceedsH"), nullptr);
    }
  }
}

TEST(Hunt, ChainWitnessKeepsChainShape) {
  const auto w = hunt(HuntKind::Dpi, {.seed = 11}, {.budget = 5000});
  ASSERT_EQ(w.size(), 1u);
  const Scm m = parse_scm(w[0].scm_text);
  EXPECT_TRUE(m.parent_indices(*m.index_of(w[0].intervene)).empty());
  EXPECT_EQ(m.parent_indices(*m.index_of(w[0].target[1])), std::vector<std::size_t>{*m.index_of(w[0].target[0])});
}
