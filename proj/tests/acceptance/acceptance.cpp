// One line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "causalinfo/causal_metrics.hpp"
#include "causalinfo/dsl.hpp"
#include "causalinfo/info_metrics.hpp"
#include "causalinfo/interventions.hpp"
#include "causalinfo/prop_suite.hpp"
#include "causalinfo/random.hpp"
#include "causalinfo/scm.hpp"
#include "test_support.hpp"

using namespace causalinfo;
using testing_support::fixture;
using testing_support::fixture_path;
using testing_support::q;
using testing_support::qs;
using testing_support::read_text;

namespace {

constexpr std::uint64_t kModels = 500;
constexpr std::uint64_t kHuntSeed = 7;

struct Outcome {
  bool ok = true;
  std::string note;
};

// Collects the first few mismatches of a criterion.
struct Tally {
  Outcome out;
  int shown = 0;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    out.ok = false;
    if (shown++ < 3) out.note += (out.note.empty() ? "" : "; ") + what;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(15);
    s << what << " = " << got << " (want " << want << ")";
    expect(std::fabs(got - want) <= tol, s.str());
  }
};

CausalQuery query(const Scm& m, std::vector<std::string> target, const std::string& x, const std::string& protocol,
                  std::vector<std::string> given = {}) {
  return CausalQuery{m, std::move(target), x, parse_protocol(m, x, protocol), std::move(given)};
}

double h_of(const Scm& m, const std::string& v) { return entropy(entailed(m, std::vector<std::string>{v})); }

Scm model_for(std::uint64_t seed) { return gen_scm(GenConfig{.seed = seed}); }

Protocol protocol_for(const Scm& m, std::uint64_t seed) { return gen_protocol(m, derive_seed(seed, 99)); }

Outcome running_example_dists() {
  Tally t;
  const Scm m = fixture("paper_ex1.scm");
  const std::vector<std::string> y{"Y"};
  t.expect(post_dist(m, AtomicIntervention{"X", 0}, y).masses() == qs({{1, 2}, {1, 2}, {0, 1}}), "do(X=0)");
  t.expect(post_dist(m, AtomicIntervention{"X", 1}, y).masses() == qs({{0, 1}, {1, 2}, {1, 2}}), "do(X=1)");
  const Protocol p = Protocol::over(m, "X", {q(2, 3), q(1, 3)});
  t.expect(post_dist(m, StochasticIntervention{p}, y).masses() == qs({{1, 3}, {1, 2}, {1, 6}}), "do(X=X')");
  return t.out;
}

Outcome example_entropies() {
  Tally t;
  const Scm m = fixture("paper_ex1.scm");
  const CausalQuery cq = query(m, {"Y"}, "X", "{0: 2/3, 1: 1/3}");
  t.near(causal_entropy(cq), 1.0, 1e-12, "H_c");
  const double want = std::log2(3.0) / 3 + 0.5 + std::log2(6.0) / 6;
  t.near(post_stochastic_entropy(cq), want, 1e-9, "H(Y|do(X=X'))");
  t.near(want, 1.459147917, 1e-9, "closed form");
  return t.out;
}

Outcome dpi_values() {
  Tally t;
  const Scm m = fixture("dpi_chain.scm");
  t.near(h_of(m, "X"), 1.0, 1e-9, "H(X)");
  t.near(h_of(m, "Y"), 1.5, 1e-9, "H(Y)");
  t.near(h_of(m, "Z"), 1.0, 1e-9, "H(Z)");
  const CausalQuery y = query(m, {"Y"}, "X", "{x1: 1}");
  const CausalQuery z = query(m, {"Z"}, "X", "{x1: 1}");
  t.near(causal_entropy(y), 1.0, 1e-9, "H_c(Y)");
  t.near(causal_entropy(z), 0.0, 1e-9, "H_c(Z)");
  t.near(causal_information_gain(y), 0.5, 1e-9, "I_c(Y)");
  t.near(causal_information_gain(z), 1.0, 1e-9, "I_c(Z)");
  return t.out;
}

Outcome gate_values() {
  Tally t;
  const Scm m = fixture("gate.scm");
  const CausalQuery cq = query(m, {"Y"}, "X", "{x0: 1/2, x1: 1/2}");
  const double hc = causal_entropy(cq);
  // Binary entropy of p_Y = (19/20, 1/20).
  const double hy = -(0.95 * std::log2(0.95) + 0.05 * std::log2(0.05));
  t.near(hc, 0.5, 1e-12, "H_c");
  t.near(h_of(m, "Y"), hy, 1e-12, "H(Y)");
  t.near(h_of(m, "Y"), 0.286397, 1e-6, "H(Y)");
  t.expect(hc > h_of(m, "Y"), "H_c > H(Y)");
  const double ic = causal_information_gain(cq);
  t.near(ic, hy - 0.5, 1e-12, "I_c");
  t.expect(ic < 0, "I_c < 0");
  return t.out;
}

Outcome covariate_exactness() {
  Tally t;
  std::size_t checks = 0;
  for (std::uint64_t seed = 1; seed <= kModels; ++seed) {
    const Scm m = model_for(seed);
    const Protocol p = protocol_for(m, seed);
    std::vector<std::string> rest;
    for (const auto& id : endogenous_ids(m)) {
      if (id != p.target()) rest.push_back(id);
    }
    if (rest.empty()) continue;
    for (const std::size_t x : p.support()) {
      ++checks;
      const bool same =
          covariate_specific(m, p, x, rest) == post_dist(m, AtomicIntervention{p.target(), x}, rest);
      t.expect(same, "seed " + std::to_string(seed) + " x=" + std::to_string(x));
    }
  }
  t.expect(checks >= kModels, "only " + std::to_string(checks) + " comparisons");
  if (t.out.ok) t.out.note = std::to_string(checks) + " exact comparisons";
  return t.out;
}

Outcome proposition_suite() {
  Tally t;
  std::size_t reports = 0;
  for (std::uint64_t seed = 1; seed <= kModels; ++seed) {
    const Scm m = model_for(seed);
    const Protocol p = protocol_for(m, seed);
    for (const auto& r : check_all(m, p, CheckOptions{.seed = seed})) {
      ++reports;
      t.expect(r.status != Status::Fail, "seed " + std::to_string(seed) + " " + r.prop + " " + r.detail);
    }
  }
  if (t.out.ok) t.out.note = std::to_string(reports) + " reports, 0 failures";
  return t.out;
}

std::size_t model_size(const Witness& w) {
  return parse_scm(w.scm_text).joint_cells();
}

Outcome hunters() {
  Tally t;
  for (const HuntKind kind : {HuntKind::NegativeGain, HuntKind::Dpi}) {
    const std::string name(to_string(kind));
    const GenConfig cfg{.seed = kHuntSeed};
    const auto found = hunt(kind, cfg, HuntOptions{.budget = 10'000});
    t.expect(!found.empty(), name + ": no witness");
    if (found.empty()) continue;
    const Witness& w = found.front();
    const ReplayResult r = replay(w);
    t.expect(r.reproduced && std::fabs(r.lhs - w.lhs) <= 1e-12 && std::fabs(r.rhs - w.rhs) <= 1e-12,
             name + ": replay differs");
    const auto raw = hunt(kind, cfg, HuntOptions{.budget = 10'000, .shrink = false});
    t.expect(!raw.empty() && model_size(w) <= model_size(raw.front()), name + ": shrinking grew the witness");
    t.out.note += (t.out.note.empty() ? "" : ", ") + name + " trial " + std::to_string(w.trial);
  }
  t.out.note = "seed " + std::to_string(kHuntSeed) + ": " + t.out.note;
  return t.out;
}

Outcome parser() {
  Tally t;
  for (const char* f : {"paper_ex1.scm", "dpi_chain.scm", "gate.scm", "contrast_agent.scm"}) {
    const Scm once = parse_scm(read_text(fixture_path(f)));
    const std::string text = serialize_scm(once);
    const Scm twice = parse_scm(text);
    t.expect(twice.structurally_equal(once) && serialize_scm(twice) == text, std::string(f) + " does not round-trip");
  }
  const std::filesystem::path dir = std::filesystem::path(CAUSALINFO_GOLDEN_DIR) / "malformed";
  std::size_t cases = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".scm") continue;
    ++cases;
    std::string rendered;
    try {
      parse_scm(read_text(entry.path().string()));
    } catch (const ParseError& e) {
      for (const auto& d : e.diagnostics()) rendered += format_diagnostic(d) + "\n";
    }
    std::filesystem::path err = entry.path();
    err.replace_extension(".err");
    t.expect(rendered == read_text(err.string()), entry.path().filename().string());
  }
  t.expect(cases >= 10, "only " + std::to_string(cases) + " golden files");
  if (t.out.ok) t.out.note = std::to_string(cases) + " golden files";
  return t.out;
}

Outcome inference() {
  Tally t;
  auto same = [&](const Scm& m, const std::string& label) {
    const auto vars = endogenous_ids(m);
    t.expect(entailed(m, vars) == entailed_oracle(m, vars), label);
  };
  for (const char* f : {"paper_ex1.scm", "dpi_chain.scm", "gate.scm", "contrast_agent.scm", "paper_ex1_w.scm"}) {
    same(fixture(f), f);
  }
  for (std::uint64_t seed = 1; seed <= kModels; ++seed) same(model_for(seed), "seed " + std::to_string(seed));
  return t.out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "interventional distributions of the running example", 1.0, running_example_dists},
      {2, "causal vs post-stochastic entropy on the running example", 0, example_entropies},
      {3, "causal data-processing counterexample", 0, dpi_values},
      {4, "causal entropy above observational entropy", 0, gate_values},
      {5, "covariate-specific equals atomic (500 models)", 60.0, covariate_exactness},
      {6, "proposition suite (500 models)", 0, proposition_suite},
      {7, "negative-gain and dpi hunters", 120.0, hunters},
      {8, "parser round-trip and malformed goldens", 0, parser},
      {9, "entailed matches the enumeration oracle", 0, inference},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.ok = false;
      o.note += (o.note.empty() ? "" : "; ") + std::string("over time budget");
    }
    failed += !o.ok;
    std::printf("[%s] %d %s (%.3fs)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.note.empty() ? "" : ": ",
                o.note.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
