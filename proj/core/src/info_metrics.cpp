#include "causalinfo/info_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "causalinfo/error.hpp"

namespace causalinfo {
namespace {

std::vector<std::string> join(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::string> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(std::initializer_list<std::span<const std::string>> sets) {
  std::set<std::string> seen;
  for (auto s : sets) {
    for (const auto& id : s) {
      if (!seen.insert(id).second) fail(ErrorKind::BadScope, "variable '" + id + "' appears in more than one argument");
    }
  }
}

void require_non_empty(std::span<const std::string> s, const char* what) {
  if (s.empty()) fail(ErrorKind::BadScope, std::string(what) + " must name at least one variable");
}

void require_agreement(double a, double b, const char* what) {
  if (std::abs(a - b) > kBitsTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << " forms disagree: " << a << " vs " << b;
    fail(ErrorKind::Internal, os.str());
  }
}

}  // namespace

double entropy(const Pmf& p) {
  double h = 0.0;
  for (const auto& m : p.masses()) {
    if (sgn(m) != 0) h -= to_double(m) * log2(m);
  }
  return h;
}

double cond_entropy(const Pmf& p, std::span<const std::string> given) {
  std::vector<bool> is_given(p.scope().size(), false);
  for (const auto& id : given) {
    auto pos = p.position(id);
    if (!pos) fail(ErrorKind::BadScope, "conditioning variable '" + id + "' is not in the scope");
    is_given[*pos] = true;
  }
  if (static_cast<std::size_t>(std::count(is_given.begin(), is_given.end(), true)) >= p.scope().size()) {
    fail(ErrorKind::BadScope, "conditioning set must be a proper subset of the scope");
  }
  if (given.empty()) return entropy(p);

  const Pmf pz = marginalize(p, given);
  std::vector<std::size_t> given_pos;
  for (std::size_t i = 0; i < is_given.size(); ++i) {
    if (is_given[i]) given_pos.push_back(i);
  }
  // sum_z p(z) H(Y | Z=z) = -sum_{y,z} p(y,z) log p(y,z)/p(z)
  double h = 0.0;
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    const Rational& m = p.masses()[flat];
    if (sgn(m) == 0) continue;
    const auto t = p.tuple_of(flat);
    std::vector<std::size_t> z;
    for (std::size_t pos : given_pos) z.push_back(t[pos]);
    const Rational ratio = m / pz.at(z);
    h -= to_double(m) * log2(ratio);
  }
  return h;
}

double mutual_information_ratio_form(const Pmf& p, std::span<const std::string> left,
                                     std::span<const std::string> right) {
  require_non_empty(left, "left");
  require_non_empty(right, "right");
  require_disjoint({left, right});
  const Pmf joint = marginalize(p, join(left, right));
  const Pmf pl = marginalize(joint, left);
  const Pmf pr = marginalize(joint, right);
  std::vector<std::size_t> lpos, rpos;
  for (std::size_t i = 0; i < joint.scope().size(); ++i) {
    const auto& id = joint.scope()[i].id;
    if (std::find(left.begin(), left.end(), id) != left.end()) {
      lpos.push_back(i);
    } else {
      rpos.push_back(i);
    }
  }
  double mi = 0.0;
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const Rational& m = joint.masses()[flat];
    if (sgn(m) == 0) continue;
    const auto t = joint.tuple_of(flat);
    std::vector<std::size_t> l, r;
    for (std::size_t pos : lpos) l.push_back(t[pos]);
    for (std::size_t pos : rpos) r.push_back(t[pos]);
    mi += to_double(m) * log2(m / (pl.at(l) * pr.at(r)));
  }
  return mi;
}

double mutual_information(const Pmf& p, std::span<const std::string> left, std::span<const std::string> right) {
  const double ratio_form = mutual_information_ratio_form(p, left, right);
  const Pmf joint = marginalize(p, join(left, right));
  const double entropy_form = entropy(marginalize(joint, right)) - cond_entropy(joint, left);
  require_agreement(ratio_form, entropy_form, "mutual information");
  return entropy_form;
}

double cond_mutual_information(const Pmf& p, std::span<const std::string> left, std::span<const std::string> right,
                               std::span<const std::string> given) {
  require_non_empty(left, "left");
  require_non_empty(right, "right");
  require_disjoint({left, right, given});
  if (given.empty()) return mutual_information(p, left, right);
  const auto all = join(join(left, right), given);
  const Pmf joint = marginalize(p, all);
  const Pmf right_given = marginalize(joint, join(right, given));
  const Pmf left_given = marginalize(joint, join(left, given));
  const double first = cond_entropy(right_given, given) - cond_entropy(joint, join(left, given));
  const double second = cond_entropy(left_given, given) - cond_entropy(joint, join(right, given));
  require_agreement(first, second, "conditional mutual information");
  return first;
}

}  // namespace causalinfo
