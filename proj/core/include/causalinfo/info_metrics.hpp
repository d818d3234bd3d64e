#pragma once

#include <span>
#include <string>
#include <vector>

#include "causalinfo/pmf.hpp"

namespace causalinfo {

/// Tolerance (bits) for equalities between derived entropy formulas.
inline constexpr double kBitsTolerance = 1e-9;

/// Entropy in bits, 0 log 0 := 0.
double entropy(const Pmf& p);

/// H(Y | Z) = E_{z ~ p_Z}[H(Y | Z = z)] where Y is the rest of p's scope.
/// `given` must be a proper subset of the scope (may be empty).
double cond_entropy(const Pmf& p, std::span<const std::string> given);

/// I(L; R) in the H(R) - H(R | L) form, cross-checked against the
/// log-ratio sum. Variables outside left/right are summed out.
double mutual_information(const Pmf& p, std::span<const std::string> left, std::span<const std::string> right);

/// The log-ratio sum  sum p(l,r) log p(l,r) / (p(l) p(r)).
double mutual_information_ratio_form(const Pmf& p, std::span<const std::string> left,
                                     std::span<const std::string> right);

/// I(L; R | G) = H(R | G) - H(R | L, G), cross-checked against
/// H(L | G) - H(L | R, G).
double cond_mutual_information(const Pmf& p, std::span<const std::string> left, std::span<const std::string> right,
                               std::span<const std::string> given);

}  // namespace causalinfo
