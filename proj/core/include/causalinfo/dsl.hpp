#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalinfo/error.hpp"
#include "causalinfo/expr.hpp"
#include "causalinfo/interventions.hpp"
#include "causalinfo/rational.hpp"
#include "causalinfo/scm.hpp"

// Text format for models:
//
//   # comment
//   scm example {
//     noise N_X ~ {0: 1/2, 1: 1/2}
//     noise N_Y ~ {0: 1/2, 1: 1/2}
//     var X : {0, 1} = N_X
//     var Y : {0, 1, 2} = X + N_Y
//   }
//
// A variable's parents are the endogenous variables its body references; its
// noise is the one noise variable the body references, or `N_<name>` when the
// body references none. Identifiers that name no variable are range labels.

namespace causalinfo {

struct Diagnostic {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;
};

/// Raised for lexical, syntax, and semantic errors. Diagnostics are ordered
/// by span, then message.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// "line:col: error: message (expected: a, b)".
std::string format_diagnostic(const Diagnostic& d);

/// Parses and validates a model. Throws ParseError.
Scm parse_scm(std::string_view text);

/// Canonical text: noise declarations then variables, each in declaration
/// order; rationals normalized; table rows sorted by tuple. Throws
/// InvalidModel for an invalid model.
std::string serialize_scm(const Scm& model);

/// Standalone expression (every identifier is read as a variable reference).
ExprPtr parse_expr(std::string_view text);

/// `{label: rational, ...}` entries in written order.
std::vector<std::pair<std::string, Rational>> parse_pmf_literal(std::string_view text);

/// Protocol for `target` from a pmf literal; unlisted labels get mass zero.
/// Throws ParseError, UnknownVariable, RangeMismatch, InvalidPmf.
Protocol parse_protocol(const Scm& model, const std::string& target, std::string_view text);

/// Pmf literal listing every label of the protocol's range.
std::string protocol_to_source(const Protocol& protocol);

}  // namespace causalinfo
