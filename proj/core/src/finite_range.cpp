#include "causalinfo/finite_range.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "causalinfo/error.hpp"

namespace causalinfo {

FiniteRange::FiniteRange(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) fail(ErrorKind::BadScope, "a finite range needs at least one label");
  std::set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) fail(ErrorKind::BadScope, "duplicate range label '" + l + "'");
  }
}

FiniteRange FiniteRange::integers(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return FiniteRange(std::move(labels));
}

std::optional<std::size_t> FiniteRange::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::optional<long long> FiniteRange::integer_value(std::size_t index) const {
  return label_as_integer(labels_.at(index));
}

std::optional<long long> label_as_integer(std::string_view label) {
  if (label.empty()) return std::nullopt;
  long long value = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), value);
  if (ec != std::errc{} || ptr != label.data() + label.size()) return std::nullopt;
  // "+1" and "01" are not integer labels; "-0" neither.
  if (label.size() > 1 && label[0] == '0') return std::nullopt;
  if (label.size() > 1 && label[0] == '-' && label[1] == '0') return std::nullopt;
  return value;
}

}  // namespace causalinfo
