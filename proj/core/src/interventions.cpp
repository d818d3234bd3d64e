#include "causalinfo/interventions.hpp"

#include <algorithm>

#include "causalinfo/error.hpp"

namespace causalinfo {
namespace {

std::string fresh_noise_id(const Scm& model, std::string base, std::string_view replaced) {
  auto taken = [&](const std::string& id) {
    if (model.index_of(id)) return true;
    auto n = model.noise_index_of(id);
    return n && model.noise()[*n].id != replaced;
  };
  while (taken(base)) base += "_";
  return base;
}

Scm replace(const Scm& model, const std::string& target, Assignment assignment, NoiseDecl noise) {
  const std::size_t v = model.require_index(target);
  if (!model.valid()) fail(ErrorKind::InvalidModel, "cannot intervene on invalid model '" + model.name() + "'");
  const std::string old_noise = model.noise()[model.noise_of(v)].id;

  std::vector<NoiseDecl> noises;
  for (const auto& nz : model.noise()) {
    if (nz.id == old_noise) {
      noises.push_back(std::move(noise));
    } else {
      noises.push_back(nz);
    }
  }
  std::vector<Assignment> assignments = model.assignments();
  assignments[v] = std::move(assignment);
  return Scm(model.name(), model.endogenous(), std::move(noises), std::move(assignments));
}

}  // namespace

Protocol::Protocol(std::string target, FiniteRange range, std::vector<Rational> masses)
    : target_(std::move(target)), dist_({ScopeVar{target_ + "'", std::move(range)}}, std::move(masses)) {}

Protocol Protocol::over(const Scm& model, const std::string& target, std::vector<Rational> masses) {
  return Protocol(target, model.variable(target).range, std::move(masses));
}

Protocol Protocol::point_mass(const Scm& model, const std::string& target, std::size_t value) {
  const auto& range = model.variable(target).range;
  if (value >= range.size()) fail(ErrorKind::RangeMismatch, "value index out of range for " + target);
  std::vector<Rational> masses(range.size(), Rational(0));
  masses[value] = 1;
  return Protocol(target, range, std::move(masses));
}

std::vector<std::size_t> Protocol::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dist_.size(); ++i) {
    if (sgn(dist_.masses()[i]) != 0) out.push_back(i);
  }
  return out;
}

void Protocol::check_against(const Scm& model) const {
  const auto& var = model.variable(target_);
  if (var.range != range()) {
    fail(ErrorKind::RangeMismatch, "protocol range does not match the range of '" + target_ + "'");
  }
}

Scm apply(const Scm& model, const Intervention& iv) {
  return std::visit(
      [&](const auto& i) -> Scm {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, AtomicIntervention>) {
          const auto& var = model.variable(i.target);
          if (i.value >= var.range.size()) {
            fail(ErrorKind::RangeMismatch, "atomic value index out of range for '" + i.target + "'");
          }
          const std::string& old = model.noise()[model.noise_of(model.require_index(i.target))].id;
          const std::string& label = var.range.label(i.value);
          NoiseDecl noise{fresh_noise_id(model, "N_" + i.target, old), FiniteRange({label}), {Rational(1)}, {}};
          Assignment a{i.target, {}, noise.id, make_label_literal(label), {}};
          return replace(model, i.target, std::move(a), std::move(noise));
        } else if constexpr (std::is_same_v<T, StochasticIntervention>) {
          i.protocol.check_against(model);
          const std::string& target = i.protocol.target();
          const std::string& old = model.noise()[model.noise_of(model.require_index(target))].id;
          NoiseDecl noise{fresh_noise_id(model, target + "'", old), i.protocol.range(), i.protocol.dist().masses(), {}};
          Assignment a{target, {}, noise.id, make_ref(noise.id), {}};
          return replace(model, target, std::move(a), std::move(noise));
        } else {
          const std::string& target = i.assignment.target;
          const std::string& old = model.noise()[model.noise_of(model.require_index(target))].id;
          if (i.noise.id != old && (model.noise_index_of(i.noise.id) || model.index_of(i.noise.id))) {
            fail(ErrorKind::InvalidModel, "noise id '" + i.noise.id + "' is already used");
          }
          Scm out = replace(model, target, i.assignment, i.noise);
          if (!out.valid()) {
            for (const auto& v : out.report().violations) {
              if (v.kind == Violation::Kind::Cycle) fail(ErrorKind::CycleCreated, v.message);
            }
            for (const auto& v : out.report().violations) {
              if (v.kind == Violation::Kind::RangeViolation) fail(ErrorKind::RangeMismatch, v.message);
            }
            fail(ErrorKind::InvalidModel, out.report().violations.front().message);
          }
          return out;
        }
      },
      iv);
}

Pmf post_dist(const Scm& model, const Intervention& iv, std::span<const std::string> vars) {
  return entailed(apply(model, iv), vars);
}

Pmf covariate_specific(const Scm& model, const Protocol& protocol, std::size_t x, std::span<const std::string> vars) {
  const std::string& target = protocol.target();
  if (std::find(vars.begin(), vars.end(), target) != vars.end()) {
    fail(ErrorKind::BadQuery, "covariate-specific query must not include the intervened variable '" + target + "'");
  }
  if (x >= protocol.range().size() || sgn(protocol.mass(x)) == 0) {
    fail(ErrorKind::ZeroProbabilityEvent, "value is outside the support of the protocol for '" + target + "'");
  }
  std::vector<std::string> with_target(vars.begin(), vars.end());
  with_target.push_back(target);
  const Pmf joint = post_dist(model, StochasticIntervention{protocol}, with_target);
  return condition(joint, {{target, x}});
}

bool has_total_causal_effect(const Scm& model, const std::string& cause, const std::string& effect) {
  if (cause == effect) fail(ErrorKind::BadQuery, "cause and effect must differ");
  const std::vector<std::string> vars{effect};
  const Pmf before = entailed(model, vars);
  const std::size_t n = model.variable(cause).range.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (post_dist(model, AtomicIntervention{cause, x}, vars) != before) return true;
  }
  return false;
}

}  // namespace causalinfo
