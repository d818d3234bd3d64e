#include "causalinfo/causal_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "causalinfo/dsl.hpp"
#include "causalinfo/error.hpp"
#include "causalinfo/info_metrics.hpp"

namespace causalinfo {
namespace {

std::vector<std::string> join(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

CausalQuery without_given(const CausalQuery& q) {
  CausalQuery u = q;
  u.given.clear();
  return u;
}

Pmf atomic(const CausalQuery& q, std::size_t x, const std::vector<std::string>& vars) {
  return post_dist(q.model, AtomicIntervention{q.intervened, x}, vars);
}

Pmf stochastic(const CausalQuery& q, const std::vector<std::string>& vars) {
  return post_dist(q.model, StochasticIntervention{q.protocol}, vars);
}

void require_no_given(const CausalQuery& q) {
  check_query(q);
  if (!q.given.empty()) fail(ErrorKind::BadQuery, "causal entropy takes no conditioning set; use the conditional form");
}

void require_given(const CausalQuery& q) {
  check_query(q);
  if (q.given.empty()) fail(ErrorKind::BadQuery, "conditional causal quantities need a non-empty conditioning set");
}

// Positions of `ids` inside p's scope, in p's order restricted to ids.
std::vector<std::size_t> positions_of(const Pmf& p, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.scope().size(); ++i) {
    if (std::find(ids.begin(), ids.end(), p.scope()[i].id) != ids.end()) out.push_back(i);
  }
  return out;
}

}  // namespace

void check_query(const CausalQuery& q) {
  if (q.target.empty()) fail(ErrorKind::BadQuery, "target set is empty");
  q.model.require_index(q.intervened);
  std::set<std::string> seen;
  for (const auto& t : q.target) {
    q.model.require_index(t);
    if (t == q.intervened) fail(ErrorKind::BadQuery, "target and intervened variable overlap on '" + t + "'");
    if (!seen.insert(t).second) fail(ErrorKind::BadQuery, "target lists '" + t + "' twice");
  }
  for (const auto& z : q.given) {
    q.model.require_index(z);
    if (z == q.intervened) fail(ErrorKind::BadQuery, "conditioning set contains the intervened variable '" + z + "'");
    if (!seen.insert(z).second) fail(ErrorKind::BadQuery, "conditioning set and target overlap on '" + z + "'");
  }
  if (q.protocol.target() != q.intervened) {
    fail(ErrorKind::BadQuery, "protocol is for '" + q.protocol.target() + "', not '" + q.intervened + "'");
  }
  q.protocol.check_against(q.model);
}

double causal_entropy(const CausalQuery& q, HcMethod method) {
  require_no_given(q);
  const auto support = q.protocol.support();
  switch (method) {
    case HcMethod::Definition: {
      double h = 0.0;
      for (std::size_t x : support) h += to_double(q.protocol.mass(x)) * entropy(atomic(q, x, q.target));
      return h;
    }
    case HcMethod::PlugIn: {
      const Pmf joint = stochastic(q, join(q.target, {q.intervened}));
      const std::size_t xpos = *joint.position(q.intervened);
      const auto ypos = positions_of(joint, q.target);
      std::vector<std::optional<Pmf>> per_x(q.protocol.range().size());
      for (std::size_t x : support) per_x[x] = atomic(q, x, q.target);
      double h = 0.0;
      for (std::size_t flat = 0; flat < joint.size(); ++flat) {
        const Rational& m = joint.masses()[flat];
        if (sgn(m) == 0) continue;
        const auto t = joint.tuple_of(flat);
        std::vector<std::size_t> y;
        for (std::size_t pos : ypos) y.push_back(t[pos]);
        const auto& py = per_x.at(t[xpos]);
        if (!py || sgn(py->at(y)) == 0) {
          fail(ErrorKind::Internal, "post-stochastic mass outside the post-atomic support");
        }
        h -= to_double(m) * log2(py->at(y));
      }
      return h;
    }
    case HcMethod::CovariateSpecific: {
      const Pmf joint = stochastic(q, join(q.target, {q.intervened}));
      const std::vector<std::string> given{q.intervened};
      return cond_entropy(joint, given);
    }
  }
  return 0.0;
}

CausalEntropyCheck causal_entropy_all(const CausalQuery& q) {
  CausalEntropyCheck c;
  c.definition = causal_entropy(q, HcMethod::Definition);
  c.plug_in = causal_entropy(q, HcMethod::PlugIn);
  c.covariate_specific = causal_entropy(q, HcMethod::CovariateSpecific);
  c.max_slack = std::max({std::abs(c.definition - c.plug_in), std::abs(c.definition - c.covariate_specific),
                          std::abs(c.plug_in - c.covariate_specific)});
  return c;
}

double causal_information_gain(const CausalQuery& q) {
  require_no_given(q);
  return entropy(entailed(q.model, q.target)) - causal_entropy(q);
}

double post_stochastic_entropy(const CausalQuery& q) {
  require_no_given(q);
  return entropy(stochastic(q, q.target));
}

double conditional_causal_entropy(const CausalQuery& q, CondHcMethod method) {
  require_given(q);
  if (method == CondHcMethod::ConditionalEntropyForm) {
    const Pmf joint = stochastic(q, join(join(q.target, q.given), {q.intervened}));
    return cond_entropy(joint, join(q.given, {q.intervened}));
  }
  double h = 0.0;
  for (std::size_t x : q.protocol.support()) {
    const Pmf yz = atomic(q, x, join(q.target, q.given));
    const Pmf pz = marginalize(yz, q.given);
    const auto zpos = positions_of(yz, q.given);
    double inner = 0.0;
    for (std::size_t flat = 0; flat < pz.size(); ++flat) {
      const Rational& m = pz.masses()[flat];
      if (sgn(m) == 0) continue;
      const auto z = pz.tuple_of(flat);
      Event event;
      for (std::size_t k = 0; k < zpos.size(); ++k) event.push_back({yz.scope()[zpos[k]].id, z[k]});
      inner += to_double(m) * entropy(condition(yz, event));
    }
    h += to_double(q.protocol.mass(x)) * inner;
  }
  return h;
}

double conditional_causal_information_gain(const CausalQuery& q) {
  require_given(q);
  const Pmf observational = entailed(q.model, join(q.target, q.given));
  return cond_entropy(observational, q.given) - conditional_causal_entropy(q);
}

double post_intervention_mutual_information(const CausalQuery& q) {
  require_given(q);
  return causal_entropy(without_given(q)) - conditional_causal_entropy(q);
}

double average_post_atomic_mutual_information(const CausalQuery& q) {
  require_given(q);
  double mi = 0.0;
  for (std::size_t x : q.protocol.support()) {
    const Pmf yz = atomic(q, x, join(q.target, q.given));
    mi += to_double(q.protocol.mass(x)) * mutual_information(yz, q.target, q.given);
  }
  return mi;
}

Witness make_witness(const std::string& kind, const Scm& model, const Protocol& protocol,
                     const std::vector<std::string>& target, const std::vector<std::string>& given,
                     const std::string& relation, double lhs, double rhs) {
  Witness w;
  w.kind = kind;
  w.scm_text = serialize_scm(model);
  w.intervene = protocol.target();
  w.protocol = protocol_to_source(protocol);
  w.target = target;
  w.given = given;
  w.relation = relation;
  w.lhs = lhs;
  w.rhs = rhs;
  return w;
}

namespace {

PropReport equality_report(std::string prop, double lhs, double rhs, const Scm& model, const Protocol& protocol,
                           const std::vector<std::string>& targets) {
  PropReport r;
  r.prop = std::move(prop);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = std::abs(lhs - rhs);
  r.status = r.slack <= kBitsTolerance ? Status::Pass : Status::Fail;
  std::string order;
  for (const auto& t : targets) order += (order.empty() ? "" : ",") + t;
  r.detail = "ordering " + order;
  if (r.status == Status::Fail) r.witness = make_witness(r.prop, model, protocol, targets, {}, "lhs = rhs", lhs, rhs);
  return r;
}

}  // namespace

PropReport check_chain_rule_hc(const Scm& model, const std::vector<std::string>& targets, const std::string& intervened,
                               const Protocol& protocol) {
  CausalQuery whole{model, targets, intervened, protocol, {}};
  const double lhs = causal_entropy(whole);
  double rhs = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CausalQuery term{model, {targets[i]}, intervened, protocol,
                     std::vector<std::string>(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(i))};
    rhs += i == 0 ? causal_entropy(term) : conditional_causal_entropy(term);
  }
  return equality_report("ChainRule-Hc", lhs, rhs, model, protocol, targets);
}

PropReport check_chain_rule_ic(const Scm& model, const std::vector<std::string>& targets, const std::string& intervened,
                               const Protocol& protocol) {
  CausalQuery whole{model, targets, intervened, protocol, {}};
  const double lhs = causal_information_gain(whole);
  double rhs = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CausalQuery term{model, {targets[i]}, intervened, protocol,
                     std::vector<std::string>(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(i))};
    rhs += i == 0 ? causal_information_gain(term) : conditional_causal_information_gain(term);
  }
  return equality_report("ChainRule-Ic", lhs, rhs, model, protocol, targets);
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
  }
  return "?";
}

}  // namespace causalinfo
