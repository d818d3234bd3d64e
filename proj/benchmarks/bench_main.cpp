#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "causalinfo/causal_metrics.hpp"
#include "causalinfo/dsl.hpp"
#include "causalinfo/prop_suite.hpp"
#include "causalinfo/scm.hpp"

using namespace causalinfo;

namespace {

std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(CAUSALINFO_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Generated model with the given number of endogenous variables (all
// connected when edge_probability is 1).
Scm dense_model(unsigned n, unsigned range) {
  GenConfig cfg{.seed = 3, .max_endogenous = n, .max_range = range, .max_noise_range = range,
                .edge_probability = Rational(1)};
  for (std::uint64_t s = 1;; ++s) {
    cfg.seed = s;
    Scm m = gen_scm(cfg);
    if (m.endogenous().size() == n) return m;
  }
}

void BM_Entailed(benchmark::State& state) {
  const Scm m = dense_model(static_cast<unsigned>(state.range(0)), 3);
  const auto vars = endogenous_ids(m);
  for (auto _ : state) benchmark::DoNotOptimize(entailed(m, vars));
  state.counters["joint_cells"] = static_cast<double>(m.joint_cells());
}
BENCHMARK(BM_Entailed)->DenseRange(2, 6, 2);

void BM_EntailedOracle(benchmark::State& state) {
  const Scm m = dense_model(static_cast<unsigned>(state.range(0)), 3);
  const auto vars = endogenous_ids(m);
  for (auto _ : state) benchmark::DoNotOptimize(entailed_oracle(m, vars));
}
BENCHMARK(BM_EntailedOracle)->DenseRange(2, 6, 2);

void BM_CausalEntropy(benchmark::State& state) {
  const Scm m = dense_model(static_cast<unsigned>(state.range(0)), 3);
  const auto ids = endogenous_ids(m);
  SplitMix64 rng(1);
  const CausalQuery q{m, {ids.back()}, ids.front(), gen_protocol(m, ids.front(), rng), {}};
  const auto method = static_cast<HcMethod>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(causal_entropy(q, method));
}
BENCHMARK(BM_CausalEntropy)->ArgsProduct({{2, 4, 6}, {0, 1, 2}});

void BM_ParseFixture(benchmark::State& state) {
  const std::string text = fixture_text("contrast_agent.scm");
  for (auto _ : state) benchmark::DoNotOptimize(parse_scm(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseFixture);

void BM_ParseGenerated(benchmark::State& state) {
  const std::string text = serialize_scm(dense_model(static_cast<unsigned>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(parse_scm(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseGenerated)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
