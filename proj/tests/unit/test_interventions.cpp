#include <gtest/gtest.h>

#include "causalinfo/error.hpp"
#include "causalinfo/interventions.hpp"
#include "causalinfo/prop_suite.hpp"
#include "test_support.hpp"

using namespace causalinfo;
using namespace testing_support;

namespace {

const std::vector<std::string> kY{"Y"};

Protocol bern_third(const Scm& m) { return Protocol::over(m, "X", qs({{2, 3}, {1, 3}})); }

}  // namespace

TEST(Apply, ExampleColumns) {
  const Scm m = fixture("paper_ex1.scm");
  EXPECT_EQ(post_dist(m, AtomicIntervention{"X", 0}, kY).masses(), qs({{1, 2}, {1, 2}, {0, 1}}));
  EXPECT_EQ(post_dist(m, AtomicIntervention{"X", 1}, kY).masses(), qs({{0, 1}, {1, 2}, {1, 2}}));
  EXPECT_EQ(post_dist(m, StochasticIntervention{bern_third(m)}, kY).masses(), qs({{1, 3}, {1, 2}, {1, 6}}));
}

TEST(Apply, AtomicOnMatchingPointMassIsIdempotent) {
  const Scm m = parse_scm(
      "scm p { noise N_X ~ {0: 0, 1: 1} noise N_Y ~ {0: 1/2, 1: 1/2} var X : {0, 1} = N_X var Y : {0, 1, 2} = X + N_Y }");
  const auto all = endogenous_ids(m);
  EXPECT_EQ(post_dist(m, AtomicIntervention{"X", 1}, all), entailed(m, all));
}

TEST(PostDist, PointMassExamples) {
  const Pmf gate = post_dist(fixture("gate.scm"), AtomicIntervention{"X", 0}, kY);
  EXPECT_EQ(gate.masses(), qs({{1, 1}, {0, 1}}));
  const Pmf z = post_dist(fixture("dpi_chain.scm"), AtomicIntervention{"X", 0}, std::vector<std::string>{"Z"});
  EXPECT_EQ(z.masses(), qs({{1, 1}, {0, 1}}));
}

TEST(Apply, DoesNotMutateInput) {
  const Scm m = fixture("paper_ex1.scm");
  const std::string before = serialize_scm(m);
  const Scm post = causalinfo::apply(m, StochasticIntervention{bern_third(m)});
  EXPECT_EQ(serialize_scm(m), before);
  EXPECT_NE(serialize_scm(post), before);
  EXPECT_TRUE(post.noise_index_of("X'").has_value());
}

TEST(Apply, SequentialInterventionDiscardsProtocol) {
  const Scm m = fixture("paper_ex1.scm");
  const Scm twice = causalinfo::apply(causalinfo::apply(m, StochasticIntervention{bern_third(m)}), AtomicIntervention{"X", 1});
  const auto all = endogenous_ids(m);
  EXPECT_EQ(entailed(twice, all), post_dist(m, AtomicIntervention{"X", 1}, all));
}

TEST(Apply, GeneralIntervention) {
  const Scm m = fixture("dpi_chain.scm");
  const GeneralIntervention cyc{
      {"X", {"Z"}, "N_X2", make_if(make_binary(BinaryOp::Eq, make_ref("Z"), make_label("z1")), make_label("x1"), make_label("x2")), {}},
      {"N_X2", FiniteRange::integers(1), {q(1)}, {}}};
  try {
    causalinfo::apply(m, cyc);
    FAIL() << "expected CycleCreated";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CycleCreated);
  }
  const GeneralIntervention flip{
      {"X", {}, "N_X2", make_if(make_binary(BinaryOp::Eq, make_ref("N_X2"), make_int(0)), make_label("x2"), make_label("x1")), {}},
      {"N_X2", FiniteRange::integers(2), qs({{1, 4}, {3, 4}}), {}}};
  const Pmf x = post_dist(m, flip, std::vector<std::string>{"X"});
  EXPECT_EQ(x.masses(), qs({{3, 4}, {1, 4}}));
}

TEST(Protocol, RangeMustMatchExactly) {
  const Scm m = fixture("dpi_chain.scm");
  const Protocol swapped("X", FiniteRange({"x2", "x1"}), qs({{1, 2}, {1, 2}}));
  try {
    swapped.check_against(m);
    FAIL() << "expected RangeMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RangeMismatch);
  }
  EXPECT_EQ(bern_third(fixture("paper_ex1.scm")).support(), (std::vector<std::size_t>{0, 1}));
}

TEST(CovariateSpecific, ExampleViaConditioning) {
  const Scm m = fixture("paper_ex1.scm");
  const Protocol p = bern_third(m);
  EXPECT_EQ(covariate_specific(m, p, 0, kY).masses(), qs({{1, 2}, {1, 2}, {0, 1}}));
  EXPECT_EQ(covariate_specific(m, p, 1, kY).masses(), qs({{0, 1}, {1, 2}, {1, 2}}));
}

TEST(CovariateSpecific, Errors) {
  const Scm m = fixture("dpi_chain.scm");
  const Protocol point = Protocol::point_mass(m, "X", 0);
  try {
    covariate_specific(m, point, 1, kY);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroProbabilityEvent);
  }
  try {
    covariate_specific(m, point, 0, std::vector<std::string>{"X", "Y"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadQuery);
  }
}

// Exact equalities on generated models, each side computed by a different path.
TEST(InterventionProperty, AtomicEqualsConditioningAfterStochastic) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Scm m = gen_scm({.seed = seed});
    const Protocol p = gen_protocol(m, derive_seed(seed, 7));
    const std::string& x = p.target();
    std::vector<std::string> rest;
    for (const auto& v : m.endogenous()) {
      if (v.id != x) rest.push_back(v.id);
    }
    const auto all = endogenous_ids(m);
    const Pmf stochastic = post_dist(m, StochasticIntervention{p}, all);
    EXPECT_EQ(marginalize(stochastic, std::vector<std::string>{x}).masses(), p.dist().masses()) << seed;
    for (std::size_t xv = 0; xv < p.range().size(); ++xv) {
      const Pmf atomic = post_dist(m, AtomicIntervention{x, xv}, all);
      EXPECT_EQ(atomic, brute_force(m, all, std::make_pair(x, xv))) << seed;
      EXPECT_EQ(post_dist(m, StochasticIntervention{Protocol::point_mass(m, x, xv)}, all), atomic) << seed;
      if (sgn(p.mass(xv)) == 0 || rest.empty()) continue;
      EXPECT_EQ(covariate_specific(m, p, xv, rest), marginalize(atomic, rest)) << seed;
    }
  }
}
