#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causalinfo {

/// Ordered, non-empty list of distinct value labels. Values are addressed by
/// their position 0..size()-1.
class FiniteRange {
 public:
  /// Throws Error(BadScope) on an empty list or duplicate labels.
  explicit FiniteRange(std::vector<std::string> labels);

  /// Labels "0", "1", ..., "n-1".
  static FiniteRange integers(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Integer interpretation of a label such as "2" or "-1"; nullopt for
  /// symbolic labels like "y3".
  std::optional<long long> integer_value(std::size_t index) const;

  bool operator==(const FiniteRange&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Integer interpretation of a free-standing label.
std::optional<long long> label_as_integer(std::string_view label);

}  // namespace causalinfo
