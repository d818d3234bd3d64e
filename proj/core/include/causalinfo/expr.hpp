#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalinfo/error.hpp"
#include "causalinfo/finite_range.hpp"

namespace causalinfo {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(const SourceSpan&) const = default;
};

enum class ExprKind { Int, Label, Ref, Neg, Not, Binary, If, Table };

enum class BinaryOp { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct TableRow {
  std::vector<std::string> key;
  std::string value;
};

/// Structural-assignment body. Immutable once built; shared freely.
struct Expr {
  ExprKind kind = ExprKind::Int;
  long long int_value = 0;           // Int
  std::string name;                  // Label text or referenced variable id
  BinaryOp op = BinaryOp::Add;       // Binary
  std::vector<ExprPtr> children;     // Neg/Not: 1, Binary: 2, If: 3
  std::vector<std::string> columns;  // Table
  std::vector<TableRow> rows;        // Table
  SourceSpan span;
};

ExprPtr make_int(long long value, SourceSpan span = {});
ExprPtr make_label(std::string label, SourceSpan span = {});
ExprPtr make_ref(std::string id, SourceSpan span = {});
ExprPtr make_unary(ExprKind kind, ExprPtr operand, SourceSpan span = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr make_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch, SourceSpan span = {});
ExprPtr make_table(std::vector<std::string> columns, std::vector<TableRow> rows, SourceSpan span = {});

/// Literal producing `label`: an integer literal for integer-looking labels,
/// a symbolic label literal otherwise.
ExprPtr make_label_literal(const std::string& label);

/// Values flowing through evaluation. Integer-looking labels evaluate to Int,
/// other labels to Sym (equality-comparable only).
struct Value {
  enum class Kind { Int, Sym, Bool } kind = Kind::Int;
  long long integer = 0;
  std::string symbol;
  bool boolean = false;
};

/// Variable valuation: id -> current label.
using Env = std::vector<std::pair<std::string, std::string>>;

/// Evaluation failure with the offending sub-expression's span.
class ExprError : public Error {
 public:
  ExprError(SourceSpan span, const std::string& message);
  const SourceSpan& span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

Value evaluate(const Expr& e, const Env& env);

/// Evaluates and maps the result into `target`. Throws ExprError when the
/// result is boolean or lands outside the range.
std::size_t eval_expr(const Expr& e, const Env& env, const FiniteRange& target);

/// Variable ids referenced by the expression (refs and table columns), in
/// first-occurrence order without duplicates.
std::vector<std::string> referenced_ids(const Expr& e);

/// Rank of a label inside a variable's range; used to sort table rows.
using LabelRank = std::function<std::size_t(const std::string& var, const std::string& label)>;

/// Canonical concrete syntax with minimal parentheses. Table rows are
/// sorted by `rank` when given, otherwise kept in stored order.
std::string to_source(const Expr& e, const LabelRank& rank = {});

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace causalinfo
