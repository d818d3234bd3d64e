#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalinfo/interventions.hpp"
#include "causalinfo/random.hpp"
#include "causalinfo/rational.hpp"
#include "causalinfo/report.hpp"
#include "causalinfo/scm.hpp"

namespace causalinfo {

enum class GenShape {
  Free,   // random DAG over 1..max_endogenous variables
  Chain,  // exactly V0 -> V1 -> V2
};

struct GenConfig {
  std::uint64_t seed = 0;
  unsigned max_endogenous = 4;
  unsigned max_range = 3;
  unsigned max_noise_range = 3;
  Rational edge_probability{1, 2};
  unsigned pmf_grain = 6;
  GenShape shape = GenShape::Free;

  void check() const;
};

/// Random valid model; a pure function of `cfg`. Edges only go from lower
/// to higher index, so V0, V1, ... is a topological order.
Scm gen_scm(const GenConfig& cfg);

/// Integer weights in [0, grain] per label, normalized exactly; an all-zero
/// draw is redrawn.
std::vector<Rational> gen_weights(SplitMix64& rng, std::size_t n, unsigned grain);

Protocol gen_protocol(const Scm& model, const std::string& target, SplitMix64& rng, unsigned grain = 6);

/// Protocol on a uniformly chosen endogenous variable.
Protocol gen_protocol(const Scm& model, std::uint64_t seed, unsigned grain = 6);

struct CheckOptions {
  std::uint64_t seed = 0;
  unsigned queries = 3;
  unsigned jobs = 1;
};

/// Model-level reports followed by the per-query reports of `queries`
/// randomly drawn (target, given) selections. Errors surface as failures.
std::vector<PropReport> check_all(const Scm& model, const Protocol& protocol, const CheckOptions& options = {});

/// Reports that depend only on the model and protocol.
std::vector<PropReport> check_model(const Scm& model, const Protocol& protocol);

/// Reports for one query; `given` may be empty.
std::vector<PropReport> check_query_props(const Scm& model, const Protocol& protocol,
                                          const std::vector<std::string>& target,
                                          const std::vector<std::string>& given);

bool all_passed(const std::vector<PropReport>& reports);

enum class HuntKind { NegativeGain, Dpi };

std::string_view to_string(HuntKind kind);
std::optional<HuntKind> parse_hunt_kind(std::string_view text);

/// Model and query tried before any generated trial.
struct HuntCandidate {
  Scm model;
  Protocol protocol;
  std::vector<std::string> target;  // NegativeGain: {Y}; Dpi: {Y, Z}
};

struct HuntOptions {
  std::uint64_t budget = 10'000;
  std::size_t max_witnesses = 1;
  unsigned jobs = 1;
  bool shrink = true;
  std::vector<HuntCandidate> candidates;
};

/// Witnesses in trial order. Identical for any `jobs`.
std::vector<Witness> hunt(HuntKind kind, const GenConfig& cfg, const HuntOptions& options = {});

struct ReplayResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool reproduced = false;
};

/// Recomputes a witness from its serialized text alone.
ReplayResult replay(const Witness& witness);

}  // namespace causalinfo
