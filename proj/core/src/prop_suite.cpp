#include "causalinfo/prop_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "causalinfo/causal_metrics.hpp"
#include "causalinfo/dsl.hpp"
#include "causalinfo/error.hpp"
#include "causalinfo/info_metrics.hpp"
#include "causalinfo/table_model.hpp"

namespace causalinfo {
namespace {

template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += workers) out[i] = f(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

struct Context {
  const Scm& model;
  const Protocol& protocol;
  std::vector<std::string> target;
  std::vector<std::string> given;
};

PropReport finish(PropReport r, const Context& c, const std::string& relation, double lhs, double rhs) {
  if (r.status == Status::Fail) r.witness = make_witness(r.prop, c.model, c.protocol, c.target, c.given, relation, lhs, rhs);
  return r;
}

PropReport equal_bits(std::string prop, double lhs, double rhs, const Context& c) {
  PropReport r;
  r.prop = std::move(prop);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = std::abs(lhs - rhs);
  r.status = r.slack <= kBitsTolerance ? Status::Pass : Status::Fail;
  return finish(std::move(r), c, "lhs = rhs", lhs, rhs);
}

PropReport at_most(std::string prop, double lhs, double rhs, const Context& c) {
  PropReport r;
  r.prop = std::move(prop);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.status = r.slack >= -kBitsTolerance ? Status::Pass : Status::Fail;
  return finish(std::move(r), c, "lhs <= rhs", lhs, rhs);
}

PropReport exact(std::string prop, const Pmf& lhs, const Pmf& rhs, const Context& c, std::string detail = {}) {
  PropReport r;
  r.prop = std::move(prop);
  r.lhs = to_string(lhs);
  r.rhs = to_string(rhs);
  r.detail = std::move(detail);
  r.status = lhs == rhs ? Status::Pass : Status::Fail;
  return finish(std::move(r), c, "exact equality", 0.0, 0.0);
}

PropReport info(std::string prop, double lhs, double rhs, std::string detail) {
  PropReport r;
  r.prop = std::move(prop);
  r.status = Status::Info;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.detail = std::move(detail);
  return r;
}

void guarded(std::vector<PropReport>& out, const std::string& prop, const Context& c,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    PropReport r;
    r.prop = prop;
    r.status = Status::Fail;
    r.detail = e.what();
    r.witness = make_witness(prop, c.model, c.protocol, c.target, c.given, "error", 0.0, 0.0);
    out.push_back(std::move(r));
  }
}

std::vector<std::string> others_than(const Scm& model, const std::string& x) {
  std::vector<std::string> out;
  for (const auto& v : model.endogenous()) {
    if (v.id != x) out.push_back(v.id);
  }
  return out;
}

double gain(const Scm& model, const Protocol& protocol, const std::string& y) {
  return causal_information_gain({model, {y}, protocol.target(), protocol, {}});
}

// Conditional independence of the targets given X after do(X=X'): each
// atomic post-intervention joint on the support factorizes.
bool independent_given_x(const Scm& model, const Protocol& protocol, const std::vector<std::string>& target) {
  std::vector<std::vector<std::string>> groups;
  for (const auto& t : target) groups.push_back({t});
  for (std::size_t x : protocol.support()) {
    if (!independent(post_dist(model, AtomicIntervention{protocol.target(), x}, target), groups)) return false;
  }
  return true;
}

}  // namespace

void GenConfig::check() const {
  if (max_endogenous < 1 || max_range < 1 || max_noise_range < 1 || pmf_grain < 1) {
    fail(ErrorKind::BadQuery, "generator bounds must be at least 1");
  }
  if (sgn(edge_probability) < 0 || edge_probability > 1) {
    fail(ErrorKind::BadQuery, "edge probability must lie in [0, 1]");
  }
  if (shape == GenShape::Chain && max_range < 2) fail(ErrorKind::BadQuery, "chain shape needs max_range >= 2");
}

std::vector<Rational> gen_weights(SplitMix64& rng, std::size_t n, unsigned grain) {
  std::vector<std::uint64_t> w(n);
  std::uint64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) {
      x = rng.below(grain + 1ULL);
      total += x;
    }
  }
  std::vector<Rational> out;
  out.reserve(n);
  for (auto x : w) {
    Rational r(static_cast<unsigned long>(x), static_cast<unsigned long>(total));
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

Scm gen_scm(const GenConfig& cfg) {
  cfg.check();
  SplitMix64 rng(cfg.seed);
  const bool chain = cfg.shape == GenShape::Chain;
  const std::size_t n = chain ? 3 : rng.between(1, cfg.max_endogenous);
  const unsigned lo = std::min(2U, cfg.max_range);

  TableModel tm;
  tm.name = "gen" + std::to_string(cfg.seed);
  for (std::size_t i = 0; i < n; ++i) {
    TableVar v;
    v.id = "V" + std::to_string(i);
    const std::size_t size = rng.between(lo, cfg.max_range);
    for (std::size_t k = 0; k < size; ++k) v.labels.push_back(std::to_string(k));
    if (chain) {
      if (i > 0) v.parents.push_back(i - 1);
    } else {
      for (std::size_t p = 0; p < i; ++p) {
        if (rng.bernoulli(cfg.edge_probability)) v.parents.push_back(p);
      }
    }
    v.noise_id = "N_" + v.id;
    const std::size_t noise_n = rng.between(1, cfg.max_noise_range);
    for (std::size_t k = 0; k < noise_n; ++k) v.noise_labels.push_back(std::to_string(k));
    v.noise_masses = gen_weights(rng, noise_n, cfg.pmf_grain);
    std::size_t rows = noise_n;
    for (std::size_t p : v.parents) rows *= tm.vars[p].labels.size();
    for (std::size_t r = 0; r < rows; ++r) v.outputs.push_back(rng.below(size));
    tm.vars.push_back(std::move(v));
  }
  return to_scm(tm);
}

Protocol gen_protocol(const Scm& model, const std::string& target, SplitMix64& rng, unsigned grain) {
  const std::size_t n = model.variable(target).range.size();
  return Protocol::over(model, target, gen_weights(rng, n, grain));
}

Protocol gen_protocol(const Scm& model, std::uint64_t seed, unsigned grain) {
  SplitMix64 rng(seed);
  const auto& vars = model.endogenous();
  const std::string target = vars.at(rng.below(vars.size())).id;
  return gen_protocol(model, target, rng, grain);
}

std::vector<PropReport> check_model(const Scm& model, const Protocol& protocol) {
  std::vector<PropReport> out;
  const std::string& x = protocol.target();
  const std::vector<std::string> all = endogenous_ids(model);
  const std::vector<std::string> rest = others_than(model, x);
  Context c{model, protocol, rest, {}};

  guarded(out, "EntailedMatchesOracle", c, [&] {
    out.push_back(exact("EntailedMatchesOracle", entailed(model, all), entailed_oracle(model, all), c));
  });
  if (!rest.empty()) {
    guarded(out, "AtomicEqualsConditioning", c, [&] {
      for (std::size_t xv : protocol.support()) {
        out.push_back(exact("AtomicEqualsConditioning", covariate_specific(model, protocol, xv, rest),
                            post_dist(model, AtomicIntervention{x, xv}, rest), c,
                            x + "=" + protocol.range().label(xv)));
      }
    });
  }
  guarded(out, "PointMassIsAtomic", c, [&] {
    for (std::size_t xv = 0; xv < protocol.range().size(); ++xv) {
      const Protocol point = Protocol::point_mass(model, x, xv);
      out.push_back(exact("PointMassIsAtomic", post_dist(model, StochasticIntervention{point}, all),
                          post_dist(model, AtomicIntervention{x, xv}, all), c, x + "=" + protocol.range().label(xv)));
    }
  });
  guarded(out, "StochasticIsMixture", c, [&] {
    const Pmf stochastic = post_dist(model, StochasticIntervention{protocol}, all);
    std::vector<Rational> mix(stochastic.size());
    for (std::size_t xv : protocol.support()) {
      const Pmf atomic = post_dist(model, AtomicIntervention{x, xv}, all);
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += protocol.mass(xv) * atomic.masses()[i];
    }
    out.push_back(exact("StochasticIsMixture", stochastic, Pmf(stochastic.scope(), std::move(mix)), c));
  });

  for (const auto& y : rest) {
    Context cy{model, protocol, {y}, {}};
    guarded(out, "NoEffectZeroGain", cy, [&] {
      const double ic = gain(model, protocol, y);
      if (!has_total_causal_effect(model, x, y)) out.push_back(equal_bits("NoEffectZeroGain", ic, 0.0, cy));
      if (ic < -kBitsTolerance) {
        const double h = entropy(entailed(model, std::vector<std::string>{y}));
        out.push_back(info("Hc-ExceedsH", h - ic, h, "H_c(" + y + ") > H(" + y + "); I_c = " + std::to_string(ic)));
      }
    });
  }

  const auto xi = model.require_index(x);
  for (std::size_t a = 0; a < model.endogenous().size(); ++a) {
    const auto& pa = model.parent_indices(a);
    if (std::find(pa.begin(), pa.end(), xi) == pa.end()) continue;
    for (std::size_t b = 0; b < model.endogenous().size(); ++b) {
      const auto& pb = model.parent_indices(b);
      if (b == xi || std::find(pb.begin(), pb.end(), a) == pb.end()) continue;
      const std::string& ya = model.endogenous()[a].id;
      const std::string& yb = model.endogenous()[b].id;
      Context cd{model, protocol, {ya, yb}, {}};
      guarded(out, "CausalDPI-Violated", cd, [&] {
        const double ia = gain(model, protocol, ya);
        const double ib = gain(model, protocol, yb);
        if (ib > ia + kBitsTolerance) {
          out.push_back(info("CausalDPI-Violated", ib, ia,
                             "I_c(" + yb + ") > I_c(" + ya + ") along " + x + "->" + ya + "->" + yb));
        }
      });
    }
  }
  return out;
}

std::vector<PropReport> check_query_props(const Scm& model, const Protocol& protocol,
                                          const std::vector<std::string>& target,
                                          const std::vector<std::string>& given) {
  std::vector<PropReport> out;
  const std::string& x = protocol.target();
  Context c{model, protocol, target, given};
  const CausalQuery q{model, target, x, protocol, {}};
  const CausalQuery qz{model, target, x, protocol, given};

  guarded(out, "Hc-Methods", c, [&] {
    const auto hc = causal_entropy_all(q);
    out.push_back(equal_bits("Hc-PlugIn", hc.plug_in, hc.definition, c));
    out.push_back(equal_bits("Hc-CovariateSpecific", hc.covariate_specific, hc.definition, c));
    out.push_back(at_most("Hc-NonNegative", 0.0, hc.definition, c));
    out.push_back(at_most("Hc-BelowStochasticEntropy", hc.definition, post_stochastic_entropy(q), c));
  });

  if (target.size() >= 2) {
    guarded(out, "IndependenceBound", c, [&] {
      const double joint = causal_entropy(q);
      double sum = 0.0;
      for (const auto& t : target) sum += causal_entropy({model, {t}, x, protocol, {}});
      PropReport r = at_most("IndependenceBound", joint, sum, c);
      const bool tight = std::abs(sum - joint) <= kBitsTolerance;
      const bool ci = independent_given_x(model, protocol, target);
      r.detail = std::string(tight ? "equality" : "strict") + "; targets " +
                 (ci ? "independent" : "dependent") + " given " + x + " after do(" + x + "=" + x + "')";
      if (tight != ci && r.status == Status::Pass) {
        r.status = Status::Fail;
        r.witness = make_witness(r.prop, model, protocol, target, given, "equality iff independence", joint, sum);
      }
      out.push_back(std::move(r));
    });
    guarded(out, "ChainRule2-Hc", c, [&] {
      const double lhs = causal_entropy({model, {target[0], target[1]}, x, protocol, {}});
      const double rhs = causal_entropy({model, {target[0]}, x, protocol, {}}) +
                         conditional_causal_entropy({model, {target[1]}, x, protocol, {target[0]}});
      out.push_back(equal_bits("ChainRule2-Hc", lhs, rhs, c));
    });
  }
  guarded(out, "ChainRule-Hc", c, [&] { out.push_back(check_chain_rule_hc(model, target, x, protocol)); });
  guarded(out, "ChainRule-Ic", c, [&] { out.push_back(check_chain_rule_ic(model, target, x, protocol)); });

  if (!given.empty()) {
    guarded(out, "CondHc", c, [&] {
      const double def = conditional_causal_entropy(qz, CondHcMethod::Definition);
      out.push_back(equal_bits("CondHc-AsConditionalEntropy",
                               conditional_causal_entropy(qz, CondHcMethod::ConditionalEntropyForm), def, c));
      out.push_back(at_most("CondHc-Reduces", def, causal_entropy(q), c));
    });
    guarded(out, "MIc-AverageMI", c, [&] {
      out.push_back(
          equal_bits("MIc-AverageMI", post_intervention_mutual_information(qz), average_post_atomic_mutual_information(qz), c));
    });
  }
  return out;
}

std::vector<PropReport> check_all(const Scm& model, const Protocol& protocol, const CheckOptions& options) {
  if (!model.valid()) fail(ErrorKind::InvalidModel, "model '" + model.name() + "' is invalid");
  protocol.check_against(model);
  std::vector<PropReport> out = check_model(model, protocol);
  const std::vector<std::string> rest = others_than(model, protocol.target());
  if (rest.empty()) return out;

  const auto per_query = parallel_map<std::vector<PropReport>>(options.queries, options.jobs, [&](std::size_t qi) {
    SplitMix64 rng(derive_seed(options.seed, qi));
    std::vector<std::string> pool = rest;
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
    const std::size_t k = rng.between(1, std::min<std::size_t>(3, pool.size()));
    std::vector<std::string> target(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::string> given;
    for (std::size_t i = k; i < pool.size() && given.size() < 2; ++i) {
      if (rng.below(2) == 1) given.push_back(pool[i]);
    }
    auto reports = check_query_props(model, protocol, target, given);
    for (auto& r : reports) {
      if (r.witness) {
        r.witness->seed = options.seed;
        r.witness->trial = qi;
      }
    }
    return reports;
  });
  for (const auto& reports : per_query) out.insert(out.end(), reports.begin(), reports.end());
  return out;
}

bool all_passed(const std::vector<PropReport>& reports) {
  return std::none_of(reports.begin(), reports.end(), [](const PropReport& r) { return r.status == Status::Fail; });
}

std::string_view to_string(HuntKind kind) {
  return kind == HuntKind::NegativeGain ? "negative-gain" : "dpi";
}

std::optional<HuntKind> parse_hunt_kind(std::string_view text) {
  if (text == "negative-gain") return HuntKind::NegativeGain;
  if (text == "dpi") return HuntKind::Dpi;
  return std::nullopt;
}

namespace {

struct HuntState {
  TableModel tm;
  std::vector<Rational> protocol;
  std::string x;
  std::vector<std::string> target;
};

struct Measured {
  double lhs = 0.0;
  double rhs = 0.0;
};

bool is_chain(const Scm& model, const std::string& x, const std::vector<std::string>& t) {
  if (t.size() != 2) return false;
  const auto xi = model.index_of(x);
  const auto yi = model.index_of(t[0]);
  const auto zi = model.index_of(t[1]);
  if (!xi || !yi || !zi) return false;
  return model.parent_indices(*xi).empty() && model.parent_indices(*yi) == std::vector<std::size_t>{*xi} &&
         model.parent_indices(*zi) == std::vector<std::size_t>{*yi};
}

// lhs/rhs of the violated relation, or nullopt when it does not hold.
std::optional<Measured> measure(HuntKind kind, const Scm& model, const Protocol& protocol,
                                const std::vector<std::string>& target) {
  if (kind == HuntKind::NegativeGain) {
    if (target.size() != 1) return std::nullopt;
    const double ic = gain(model, protocol, target[0]);
    if (ic < -kBitsTolerance) return Measured{ic, 0.0};
    return std::nullopt;
  }
  if (!is_chain(model, protocol.target(), target)) return std::nullopt;
  const double iy = gain(model, protocol, target[0]);
  const double iz = gain(model, protocol, target[1]);
  if (iz > iy + kBitsTolerance) return Measured{iz, iy};
  return std::nullopt;
}

std::optional<Measured> measure(HuntKind kind, const HuntState& s) {
  try {
    const Scm model = to_scm(s.tm);
    if (!model.valid()) return std::nullopt;
    return measure(kind, model, Protocol::over(model, s.x, s.protocol), s.target);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<HuntState> shrink_moves(HuntKind kind, const HuntState& s) {
  std::vector<HuntState> moves;
  const auto involved = [&](const std::string& id) {
    return id == s.x || std::find(s.target.begin(), s.target.end(), id) != s.target.end();
  };
  if (kind == HuntKind::NegativeGain) {
    for (std::size_t v = 0; v < s.tm.vars.size(); ++v) {
      if (involved(s.tm.vars[v].id)) continue;
      moves.push_back({drop_variable(s.tm, v), s.protocol, s.x, s.target});
    }
  }
  for (std::size_t v = 0; v < s.tm.vars.size(); ++v) {
    auto tm = shrink_range(s.tm, v);
    if (!tm) continue;
    std::vector<Rational> protocol = s.protocol;
    if (s.tm.vars[v].id == s.x) {
      protocol.pop_back();
      Rational total = 0;
      for (const auto& m : protocol) total += m;
      if (sgn(total) == 0) continue;
      for (auto& m : protocol) m /= total;
    }
    moves.push_back({std::move(*tm), std::move(protocol), s.x, s.target});
  }
  for (std::size_t v = 0; v < s.tm.vars.size(); ++v) {
    for (std::size_t k = 0; k < s.tm.vars[v].noise_labels.size(); ++k) {
      if (auto tm = drop_noise_label(s.tm, v, k)) moves.push_back({std::move(*tm), s.protocol, s.x, s.target});
    }
  }
  for (std::size_t v = 0; v < s.tm.vars.size(); ++v) {
    for (std::size_t k = 0; k < s.tm.vars[v].noise_masses.size(); ++k) {
      if (auto masses = zero_weight(s.tm.vars[v].noise_masses, k)) {
        HuntState next = s;
        next.tm.vars[v].noise_masses = std::move(*masses);
        moves.push_back(std::move(next));
      }
    }
  }
  for (std::size_t k = 0; k < s.protocol.size(); ++k) {
    if (auto masses = zero_weight(s.protocol, k)) moves.push_back({s.tm, std::move(*masses), s.x, s.target});
  }
  return moves;
}

HuntState shrink(HuntKind kind, HuntState s) {
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& next : shrink_moves(kind, s)) {
      if (measure(kind, next)) {
        s = std::move(next);
        changed = true;
        break;
      }
    }
  }
  return s;
}

std::optional<HuntCandidate> generate(HuntKind kind, const GenConfig& cfg, std::uint64_t trial) {
  GenConfig local = cfg;
  local.seed = derive_seed(cfg.seed, trial);
  if (kind == HuntKind::Dpi) local.shape = GenShape::Chain;
  const Scm model = gen_scm(local);
  const std::size_t n = model.endogenous().size();
  if (n < 2) return std::nullopt;
  SplitMix64 rng(derive_seed(local.seed, 1));
  if (kind == HuntKind::Dpi) {
    return HuntCandidate{model, gen_protocol(model, "V0", rng, cfg.pmf_grain), {"V1", "V2"}};
  }
  const std::size_t xi = rng.below(n - 1);
  const std::size_t yi = rng.between(xi + 1, n - 1);
  const std::string x = model.endogenous()[xi].id;
  return HuntCandidate{model, gen_protocol(model, x, rng, cfg.pmf_grain), {model.endogenous()[yi].id}};
}

std::optional<Witness> try_candidate(HuntKind kind, const HuntCandidate& c, bool do_shrink) {
  try {
    if (!measure(kind, c.model, c.protocol, c.target)) return std::nullopt;
    HuntState s{to_table_model(c.model), c.protocol.dist().masses(), c.protocol.target(), c.target};
    s.tm.name = c.model.name();
    Scm model = c.model;
    Protocol protocol = c.protocol;
    if (do_shrink) {
      s = shrink(kind, std::move(s));
      model = to_scm(s.tm);
      protocol = Protocol::over(model, s.x, s.protocol);
    }
    const auto m = measure(kind, model, protocol, c.target);
    if (!m) return std::nullopt;
    const std::string relation = kind == HuntKind::NegativeGain ? "I_c < 0" : "I_c(" + c.target[1] + ") > I_c(" + c.target[0] + ")";
    return make_witness(std::string(to_string(kind)), model, protocol, c.target, {}, relation, m->lhs, m->rhs);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<Witness> hunt(HuntKind kind, const GenConfig& cfg, const HuntOptions& options) {
  cfg.check();
  std::vector<Witness> out;
  if (options.max_witnesses == 0) return out;
  for (std::size_t i = 0; i < options.candidates.size() && out.size() < options.max_witnesses; ++i) {
    if (auto w = try_candidate(kind, options.candidates[i], options.shrink)) {
      w->seed = cfg.seed;
      w->trial = i;
      out.push_back(std::move(*w));
    }
  }
  const std::uint64_t chunk = std::max<std::uint64_t>(64, 16ULL * std::max(1U, options.jobs));
  for (std::uint64_t start = 0; start < options.budget && out.size() < options.max_witnesses; start += chunk) {
    const std::uint64_t n = std::min(chunk, options.budget - start);
    // Detection runs in parallel; shrinking only for hits that are kept.
    const auto hits = parallel_map<std::optional<HuntCandidate>>(n, options.jobs, [&](std::size_t i) {
      auto c = generate(kind, cfg, start + i);
      if (c && !measure(kind, c->model, c->protocol, c->target)) c.reset();
      return c;
    });
    for (std::uint64_t i = 0; i < n && out.size() < options.max_witnesses; ++i) {
      if (!hits[i]) continue;
      if (auto w = try_candidate(kind, *hits[i], options.shrink)) {
        w->seed = cfg.seed;
        w->trial = start + i;
        out.push_back(std::move(*w));
      }
    }
  }
  return out;
}

ReplayResult replay(const Witness& w) {
  const Scm model = parse_scm(w.scm_text);
  const Protocol protocol = parse_protocol(model, w.intervene, w.protocol);
  if (auto kind = parse_hunt_kind(w.kind)) {
    if (auto m = measure(*kind, model, protocol, w.target)) return {m->lhs, m->rhs, true};
    if (*kind == HuntKind::NegativeGain) return {gain(model, protocol, w.target.at(0)), 0.0, false};
    return {gain(model, protocol, w.target.at(1)), gain(model, protocol, w.target.at(0)), false};
  }
  auto reports = check_model(model, protocol);
  const auto query = check_query_props(model, protocol, w.target, w.given);
  reports.insert(reports.end(), query.begin(), query.end());
  for (const auto& r : reports) {
    if (r.prop != w.kind || r.status != Status::Fail) continue;
    const double* lhs = std::get_if<double>(&r.lhs);
    const double* rhs = std::get_if<double>(&r.rhs);
    return {lhs ? *lhs : 0.0, rhs ? *rhs : 0.0, true};
  }
  return {};
}

}  // namespace causalinfo
