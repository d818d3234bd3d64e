#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace causalinfo {

/// A re-runnable instance: canonical model text plus the query that was
/// evaluated on it and the two sides of the relation that was checked.
struct Witness {
  std::string kind;
  std::string scm_text;
  std::string intervene;
  std::string protocol;
  std::vector<std::string> target;
  std::vector<std::string> given;
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

enum class Status { Pass, Fail, Info };

std::string_view to_string(Status status);

/// Side of a checked relation: bits, or an exact distribution digest.
using ReportValue = std::variant<double, std::string>;

struct PropReport {
  std::string prop;
  Status status = Status::Pass;
  ReportValue lhs = 0.0;
  ReportValue rhs = 0.0;
  double slack = 0.0;
  std::string detail;
  std::optional<Witness> witness;
};

}  // namespace causalinfo
