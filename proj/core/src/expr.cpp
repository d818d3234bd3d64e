#include "causalinfo/expr.hpp"

#include <algorithm>

namespace causalinfo {
namespace {

ExprPtr finish(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

Value value_of_label(const std::string& label) {
  Value v;
  if (auto n = label_as_integer(label)) {
    v.kind = Value::Kind::Int;
    v.integer = *n;
  } else {
    v.kind = Value::Kind::Sym;
    v.symbol = label;
  }
  return v;
}

const std::string* lookup(const Env& env, std::string_view id) {
  for (const auto& [k, v] : env) {
    if (k == id) return &v;
  }
  return nullptr;
}

std::string describe(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return std::to_string(v.integer);
    case Value::Kind::Sym: return v.symbol;
    case Value::Kind::Bool: return v.boolean ? "true" : "false";
  }
  return "?";
}

long long as_int(const Expr& e, const Value& v) {
  if (v.kind != Value::Kind::Int) throw ExprError(e.span, "arithmetic needs an integer operand, got '" + describe(v) + "'");
  return v.integer;
}

bool as_bool(const Expr& e, const Value& v) {
  if (v.kind != Value::Kind::Bool) throw ExprError(e.span, "expected a boolean, got '" + describe(v) + "'");
  return v.boolean;
}

Value make_bool(bool b) {
  Value v;
  v.kind = Value::Kind::Bool;
  v.boolean = b;
  return v;
}

Value make_integer(long long n) {
  Value v;
  v.kind = Value::Kind::Int;
  v.integer = n;
  return v;
}

bool equal_values(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Int: return a.integer == b.integer;
    case Value::Kind::Sym: return a.symbol == b.symbol;
    case Value::Kind::Bool: return a.boolean == b.boolean;
  }
  return false;
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::If: return 0;
    case ExprKind::Not: return 3;
    case ExprKind::Neg: return 7;
    case ExprKind::Binary:
      switch (e.op) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul: return 6;
        default: return 4;
      }
    default: return 8;
  }
}

std::string_view op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

void print(const Expr& e, const LabelRank& rank, std::string& out);

void print_child(const Expr& child, int min_prec, const LabelRank& rank, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, rank, out);
    out += ')';
  } else {
    print(child, rank, out);
  }
}

void print(const Expr& e, const LabelRank& rank, std::string& out) {
  switch (e.kind) {
    case ExprKind::Int: out += std::to_string(e.int_value); return;
    case ExprKind::Label:
    case ExprKind::Ref: out += e.name; return;
    case ExprKind::Neg:
      out += '-';
      print_child(*e.children[0], 7, rank, out);
      return;
    case ExprKind::Not:
      out += "not ";
      print_child(*e.children[0], 3, rank, out);
      return;
    case ExprKind::Binary: {
      const int p = precedence(e);
      const bool comparison = p == 4;
      print_child(*e.children[0], comparison ? 5 : p, rank, out);
      out += ' ';
      out += op_text(e.op);
      out += ' ';
      print_child(*e.children[1], comparison ? 5 : p + 1, rank, out);
      return;
    }
    case ExprKind::If:
      out += "if ";
      print(*e.children[0], rank, out);
      out += " then ";
      print(*e.children[1], rank, out);
      out += " else ";
      print(*e.children[2], rank, out);
      return;
    case ExprKind::Table: {
      out += "table(";
      for (std::size_t i = 0; i < e.columns.size(); ++i) {
        if (i) out += ", ";
        out += e.columns[i];
      }
      out += ") {";
      std::vector<const TableRow*> rows;
      for (const auto& r : e.rows) rows.push_back(&r);
      if (rank) {
        auto key = [&](const TableRow* r) {
          std::vector<std::size_t> k;
          for (std::size_t i = 0; i < r->key.size(); ++i) k.push_back(rank(e.columns[i], r->key[i]));
          return k;
        };
        std::stable_sort(rows.begin(), rows.end(), [&](const TableRow* a, const TableRow* b) { return key(a) < key(b); });
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        out += i ? ", (" : " (";
        for (std::size_t j = 0; j < rows[i]->key.size(); ++j) {
          if (j) out += ", ";
          out += rows[i]->key[j];
        }
        out += ") -> " + rows[i]->value;
      }
      out += " }";
      return;
    }
  }
}

}  // namespace

ExprError::ExprError(SourceSpan span, const std::string& message)
    : Error(ErrorKind::InvalidModel, message), span_(span) {}

ExprPtr make_int(long long value, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Int;
  e.int_value = value;
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_label(std::string label, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Label;
  e.name = std::move(label);
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_ref(std::string id, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Ref;
  e.name = std::move(id);
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_unary(ExprKind kind, ExprPtr operand, SourceSpan span) {
  Expr e;
  e.kind = kind;
  e.children = {std::move(operand)};
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = op;
  e.children = {std::move(lhs), std::move(rhs)};
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::If;
  e.children = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_table(std::vector<std::string> columns, std::vector<TableRow> rows, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::Table;
  e.columns = std::move(columns);
  e.rows = std::move(rows);
  e.span = span;
  return finish(std::move(e));
}

ExprPtr make_label_literal(const std::string& label) {
  if (auto n = label_as_integer(label)) {
    if (*n < 0) return make_unary(ExprKind::Neg, make_int(-*n));
    return make_int(*n);
  }
  return make_label(label);
}

Value evaluate(const Expr& e, const Env& env) {
  switch (e.kind) {
    case ExprKind::Int: return make_integer(e.int_value);
    case ExprKind::Label: return value_of_label(e.name);
    case ExprKind::Ref: {
      const std::string* label = lookup(env, e.name);
      if (!label) throw ExprError(e.span, "unbound variable '" + e.name + "'");
      return value_of_label(*label);
    }
    case ExprKind::Neg: return make_integer(-as_int(*e.children[0], evaluate(*e.children[0], env)));
    case ExprKind::Not: return make_bool(!as_bool(*e.children[0], evaluate(*e.children[0], env)));
    case ExprKind::Binary: {
      const Expr& l = *e.children[0];
      const Expr& r = *e.children[1];
      if (e.op == BinaryOp::And) {
        return make_bool(as_bool(l, evaluate(l, env)) && as_bool(r, evaluate(r, env)));
      }
      if (e.op == BinaryOp::Or) {
        return make_bool(as_bool(l, evaluate(l, env)) || as_bool(r, evaluate(r, env)));
      }
      const Value a = evaluate(l, env);
      const Value b = evaluate(r, env);
      switch (e.op) {
        case BinaryOp::Add: return make_integer(as_int(l, a) + as_int(r, b));
        case BinaryOp::Sub: return make_integer(as_int(l, a) - as_int(r, b));
        case BinaryOp::Mul: return make_integer(as_int(l, a) * as_int(r, b));
        case BinaryOp::Eq: return make_bool(equal_values(a, b));
        case BinaryOp::Ne: return make_bool(!equal_values(a, b));
        case BinaryOp::Lt: return make_bool(as_int(l, a) < as_int(r, b));
        case BinaryOp::Le: return make_bool(as_int(l, a) <= as_int(r, b));
        case BinaryOp::Gt: return make_bool(as_int(l, a) > as_int(r, b));
        case BinaryOp::Ge: return make_bool(as_int(l, a) >= as_int(r, b));
        default: break;
      }
      throw ExprError(e.span, "unsupported operator");
    }
    case ExprKind::If:
      return as_bool(*e.children[0], evaluate(*e.children[0], env)) ? evaluate(*e.children[1], env)
                                                                    : evaluate(*e.children[2], env);
    case ExprKind::Table: {
      std::vector<const std::string*> current;
      for (const auto& c : e.columns) {
        const std::string* label = lookup(env, c);
        if (!label) throw ExprError(e.span, "unbound variable '" + c + "'");
        current.push_back(label);
      }
      for (const auto& row : e.rows) {
        bool match = true;
        for (std::size_t i = 0; i < current.size() && match; ++i) match = row.key[i] == *current[i];
        if (match) return value_of_label(row.value);
      }
      std::string key;
      for (std::size_t i = 0; i < current.size(); ++i) key += (i ? ", " : "") + *current[i];
      throw ExprError(e.span, "table has no row for (" + key + ")");
    }
  }
  throw ExprError(e.span, "malformed expression");
}

std::size_t eval_expr(const Expr& e, const Env& env, const FiniteRange& target) {
  const Value v = evaluate(e, env);
  switch (v.kind) {
    case Value::Kind::Int:
      for (std::size_t i = 0; i < target.size(); ++i) {
        if (target.integer_value(i) == v.integer) return i;
      }
      throw ExprError(e.span, "value " + std::to_string(v.integer) + " is outside the target range");
    case Value::Kind::Sym:
      if (auto i = target.index_of(v.symbol)) return *i;
      throw ExprError(e.span, "value '" + v.symbol + "' is outside the target range");
    case Value::Kind::Bool: break;
  }
  throw ExprError(e.span, "assignment evaluates to a boolean");
}

std::vector<std::string> referenced_ids(const Expr& e) {
  std::vector<std::string> out;
  auto add = [&](const std::string& id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    if (n.kind == ExprKind::Ref) add(n.name);
    for (const auto& c : n.columns) add(c);
    for (const auto& c : n.children) walk(*c);
  };
  walk(e);
  return out;
}

std::string to_source(const Expr& e, const LabelRank& rank) {
  std::string out;
  print(e, rank, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.int_value != b.int_value || a.name != b.name || a.columns != b.columns) return false;
  if (a.kind == ExprKind::Binary && a.op != b.op) return false;
  if (a.children.size() != b.children.size() || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].key != b.rows[i].key || a.rows[i].value != b.rows[i].value) return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

}  // namespace causalinfo
