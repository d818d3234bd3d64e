#include "causalinfo/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace causalinfo {
namespace {

enum class Tok {
  End, Ident, Int, LBrace, RBrace, LParen, RParen, Colon, Comma, Tilde, Slash,
  Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Arrow,
  KwScm, KwNoise, KwVar, KwIf, KwThen, KwElse, KwAnd, KwOr, KwNot, KwTable,
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Tilde: return "'~'";
    case Tok::Slash: return "'/'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Arrow: return "'->'";
    case Tok::KwScm: return "'scm'";
    case Tok::KwNoise: return "'noise'";
    case Tok::KwVar: return "'var'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwNot: return "'not'";
    case Tok::KwTable: return "'table'";
  }
  return "?";
}

const std::map<std::string_view, Tok>& keywords() {
  static const std::map<std::string_view, Tok> k{
      {"scm", Tok::KwScm},   {"noise", Tok::KwNoise}, {"var", Tok::KwVar}, {"if", Tok::KwIf},
      {"then", Tok::KwThen}, {"else", Tok::KwElse},   {"and", Tok::KwAnd}, {"or", Tok::KwOr},
      {"not", Tok::KwNot},   {"table", Tok::KwTable},
  };
  return k;
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

[[noreturn]] void error_at(SourceSpan span, std::string message, std::vector<std::string> expected = {}) {
  throw ParseError({Diagnostic{span, std::move(message), std::move(expected)}});
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.span.begin = pos_;
      t.span.line = line_;
      t.span.column = column_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.span.end = pos_;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                      src_[pos_] == '\'')) {
          bump();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        auto kw = keywords().find(t.text);
        t.kind = kw == keywords().end() ? Tok::Ident : kw->second;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = Tok::Int;
      } else {
        const std::size_t start = pos_;
        t.kind = punct(t.span);
        t.text = std::string(src_.substr(start, pos_ - start));
      }
      t.span.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        bump();
      } else {
        return;
      }
    }
  }

  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  Tok take(std::size_t n, Tok kind) {
    for (std::size_t i = 0; i < n; ++i) bump();
    return kind;
  }

  Tok punct(SourceSpan start) {
    if (starts("->")) return take(2, Tok::Arrow);
    if (starts("!=")) return take(2, Tok::Ne);
    if (starts("<=")) return take(2, Tok::Le);
    if (starts(">=")) return take(2, Tok::Ge);
    if (starts("\xE2\x89\xA0")) return take(3, Tok::Ne);
    if (starts("\xE2\x89\xA4")) return take(3, Tok::Le);
    if (starts("\xE2\x89\xA5")) return take(3, Tok::Ge);
    switch (src_[pos_]) {
      case '{': return take(1, Tok::LBrace);
      case '}': return take(1, Tok::RBrace);
      case '(': return take(1, Tok::LParen);
      case ')': return take(1, Tok::RParen);
      case ':': return take(1, Tok::Colon);
      case ',': return take(1, Tok::Comma);
      case '~': return take(1, Tok::Tilde);
      case '/': return take(1, Tok::Slash);
      case '=': return take(1, Tok::Eq);
      case '<': return take(1, Tok::Lt);
      case '>': return take(1, Tok::Gt);
      case '+': return take(1, Tok::Plus);
      case '-': return take(1, Tok::Minus);
      case '*': return take(1, Tok::Star);
      default: break;
    }
    std::size_t len = 1;
    const auto lead = static_cast<unsigned char>(src_[pos_]);
    if (lead >= 0xC0) {
      while (pos_ + len < src_.size() && (static_cast<unsigned char>(src_[pos_ + len]) & 0xC0) == 0x80) ++len;
    }
    start.end = pos_ + len;
    error_at(start, "unexpected character '" + std::string(src_.substr(pos_, len)) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct NoiseAst {
  std::string id;
  std::vector<std::string> labels;
  std::vector<Rational> masses;
  SourceSpan span;
};

struct VarAst {
  std::string id;
  std::vector<std::string> labels;
  ExprPtr body;
  SourceSpan span;
};

struct ModelAst {
  std::string name;
  std::vector<NoiseAst> noise;
  std::vector<VarAst> vars;
  std::vector<Diagnostic> diagnostics;
};

SourceSpan cover(SourceSpan a, const SourceSpan& b) {
  a.end = b.end;
  return a;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ModelAst model() {
    ModelAst m;
    expect(Tok::KwScm);
    m.name = expect(Tok::Ident).text;
    expect(Tok::LBrace);
    while (true) {
      if (at(Tok::KwNoise)) {
        m.noise.push_back(noise(m.diagnostics));
      } else if (at(Tok::KwVar)) {
        m.vars.push_back(var());
      } else if (at(Tok::RBrace)) {
        next();
        break;
      } else {
        unexpected({Tok::KwNoise, Tok::KwVar, Tok::RBrace});
      }
    }
    expect(Tok::End);
    return m;
  }

  ExprPtr standalone_expr() {
    ExprPtr e = expr();
    expect(Tok::End);
    return e;
  }

  std::vector<std::pair<std::string, Rational>> standalone_pmf() {
    std::vector<Diagnostic> diags;
    auto entries = pmf(diags);
    if (!diags.empty()) throw ParseError(diags);
    expect(Tok::End);
    return entries;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void unexpected(std::initializer_list<Tok> expected) {
    std::vector<std::string> names;
    for (Tok t : expected) names.push_back(describe(t));
    std::sort(names.begin(), names.end());
    const Token& t = peek();
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    error_at(t.span, "unexpected " + got, std::move(names));
  }

  const Token& expect(Tok k) {
    if (!at(k)) unexpected({k});
    return next();
  }

  NoiseAst noise(std::vector<Diagnostic>& diags) {
    NoiseAst n;
    n.span = next().span;
    n.id = expect(Tok::Ident).text;
    expect(Tok::Tilde);
    for (auto& [label, mass] : pmf(diags)) {
      n.labels.push_back(std::move(label));
      n.masses.push_back(std::move(mass));
    }
    n.span = cover(n.span, toks_[pos_ - 1].span);
    return n;
  }

  VarAst var() {
    VarAst v;
    v.span = next().span;
    v.id = expect(Tok::Ident).text;
    expect(Tok::Colon);
    v.labels = range();
    expect(Tok::Eq);
    v.body = expr();
    v.span = cover(v.span, toks_[pos_ - 1].span);
    return v;
  }

  std::string label() {
    if (at(Tok::Ident) || at(Tok::Int)) return next().text;
    if (at(Tok::Minus)) {
      next();
      return "-" + expect(Tok::Int).text;
    }
    unexpected({Tok::Ident, Tok::Int, Tok::Minus});
  }

  std::vector<std::string> range() {
    std::vector<std::string> labels;
    expect(Tok::LBrace);
    labels.push_back(label());
    while (at(Tok::Comma)) {
      next();
      labels.push_back(label());
    }
    expect(Tok::RBrace);
    return labels;
  }

  std::vector<std::pair<std::string, Rational>> pmf(std::vector<Diagnostic>& diags) {
    std::vector<std::pair<std::string, Rational>> entries;
    expect(Tok::LBrace);
    while (true) {
      const SourceSpan label_span = peek().span;
      std::string l = label();
      expect(Tok::Colon);
      const Token& num = expect(Tok::Int);
      SourceSpan span = num.span;
      std::string text = num.text;
      if (at(Tok::Slash)) {
        next();
        const Token& den = expect(Tok::Int);
        text += "/" + den.text;
        span = cover(span, den.span);
      }
      auto r = parse_rational(text);
      if (!r) {
        diags.push_back({span, "invalid rational '" + text + "' (zero denominator)", {}});
        r = Rational(0);
      }
      for (const auto& e : entries) {
        if (e.first == l) diags.push_back({label_span, "duplicate label '" + l + "' in distribution", {}});
      }
      entries.emplace_back(std::move(l), *r);
      if (at(Tok::Comma)) {
        next();
        continue;
      }
      if (at(Tok::RBrace)) {
        next();
        break;
      }
      unexpected({Tok::Comma, Tok::RBrace});
    }
    return entries;
  }

  ExprPtr expr() {
    if (at(Tok::KwIf)) {
      const SourceSpan start = next().span;
      ExprPtr c = expr();
      expect(Tok::KwThen);
      ExprPtr a = expr();
      expect(Tok::KwElse);
      ExprPtr b = expr();
      return make_if(std::move(c), std::move(a), b, cover(start, b->span));
    }
    return or_expr();
  }

  ExprPtr or_expr() {
    ExprPtr l = and_expr();
    while (at(Tok::KwOr)) {
      next();
      ExprPtr r = and_expr();
      const SourceSpan s = cover(l->span, r->span);
      l = make_binary(BinaryOp::Or, std::move(l), std::move(r), s);
    }
    return l;
  }

  ExprPtr and_expr() {
    ExprPtr l = not_expr();
    while (at(Tok::KwAnd)) {
      next();
      ExprPtr r = not_expr();
      const SourceSpan s = cover(l->span, r->span);
      l = make_binary(BinaryOp::And, std::move(l), std::move(r), s);
    }
    return l;
  }

  ExprPtr not_expr() {
    if (at(Tok::KwNot)) {
      const SourceSpan start = next().span;
      ExprPtr e = not_expr();
      const SourceSpan s = cover(start, e->span);
      return make_unary(ExprKind::Not, std::move(e), s);
    }
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr l = additive();
    static const std::map<Tok, BinaryOp> ops{{Tok::Eq, BinaryOp::Eq}, {Tok::Ne, BinaryOp::Ne}, {Tok::Lt, BinaryOp::Lt},
                                             {Tok::Le, BinaryOp::Le}, {Tok::Gt, BinaryOp::Gt}, {Tok::Ge, BinaryOp::Ge}};
    auto it = ops.find(peek().kind);
    if (it == ops.end()) return l;
    next();
    ExprPtr r = additive();
    const SourceSpan s = cover(l->span, r->span);
    return make_binary(it->second, std::move(l), std::move(r), s);
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const BinaryOp op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      ExprPtr r = multiplicative();
      const SourceSpan s = cover(l->span, r->span);
      l = make_binary(op, std::move(l), std::move(r), s);
    }
    return l;
  }

  ExprPtr multiplicative() {
    ExprPtr l = unary();
    while (at(Tok::Star)) {
      next();
      ExprPtr r = unary();
      const SourceSpan s = cover(l->span, r->span);
      l = make_binary(BinaryOp::Mul, std::move(l), std::move(r), s);
    }
    return l;
  }

  ExprPtr unary() {
    if (at(Tok::Minus)) {
      const SourceSpan start = next().span;
      ExprPtr e = unary();
      const SourceSpan s = cover(start, e->span);
      return make_unary(ExprKind::Neg, std::move(e), s);
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        next();
        auto value = label_as_integer(t.text);
        if (!value && t.text.find_first_not_of('0') == std::string::npos) value = 0;
        if (!value) error_at(t.span, "integer literal '" + t.text + "' is malformed or too large");
        return make_int(*value, t.span);
      }
      case Tok::Ident: next(); return make_ref(t.text, t.span);
      case Tok::LParen: {
        next();
        ExprPtr e = expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::KwIf: return expr();
      case Tok::KwTable: return table();
      default: break;
    }
    unexpected({Tok::Int, Tok::Ident, Tok::LParen, Tok::Minus, Tok::KwIf, Tok::KwNot, Tok::KwTable});
  }

  ExprPtr table() {
    const SourceSpan start = next().span;
    std::vector<std::string> columns;
    expect(Tok::LParen);
    columns.push_back(expect(Tok::Ident).text);
    while (at(Tok::Comma)) {
      next();
      columns.push_back(expect(Tok::Ident).text);
    }
    expect(Tok::RParen);
    expect(Tok::LBrace);
    std::vector<TableRow> rows;
    while (true) {
      const SourceSpan row_span = peek().span;
      TableRow row;
      expect(Tok::LParen);
      row.key.push_back(label());
      while (at(Tok::Comma)) {
        next();
        row.key.push_back(label());
      }
      expect(Tok::RParen);
      if (row.key.size() != columns.size()) {
        error_at(cover(row_span, toks_[pos_ - 1].span),
                 "table row has " + std::to_string(row.key.size()) + " entries, expected " +
                     std::to_string(columns.size()));
      }
      expect(Tok::Arrow);
      row.value = label();
      for (const auto& r : rows) {
        if (r.key == row.key) error_at(cover(row_span, toks_[pos_ - 1].span), "duplicate table row");
      }
      rows.push_back(std::move(row));
      if (at(Tok::Comma)) {
        next();
        continue;
      }
      if (at(Tok::RBrace)) break;
      unexpected({Tok::Comma, Tok::RBrace});
    }
    const SourceSpan end = next().span;
    return make_table(std::move(columns), std::move(rows), cover(start, end));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    if (a.span.end != b.span.end) return a.span.end < b.span.end;
    return a.message < b.message;
  });
  diags.erase(std::unique(diags.begin(), diags.end(),
                          [](const Diagnostic& a, const Diagnostic& b) {
                            return a.span == b.span && a.message == b.message;
                          }),
              diags.end());
}

// Rewrites Ref nodes that name no variable into Label nodes; reports
// identifiers that are neither.
ExprPtr resolve(const ExprPtr& e, const std::set<std::string>& variables, const std::set<std::string>& labels,
                std::vector<Diagnostic>& diags) {
  switch (e->kind) {
    case ExprKind::Ref:
      if (variables.count(e->name)) return e;
      if (labels.count(e->name)) return make_label(e->name, e->span);
      diags.push_back({e->span, "unknown variable or label '" + e->name + "'", {}});
      return e;
    case ExprKind::Table:
      for (const auto& c : e->columns) {
        if (!variables.count(c)) diags.push_back({e->span, "unknown variable '" + c + "' in table columns", {}});
      }
      return e;
    case ExprKind::Neg:
    case ExprKind::Not:
    case ExprKind::Binary:
    case ExprKind::If: {
      Expr copy = *e;
      for (auto& c : copy.children) c = resolve(c, variables, labels, diags);
      return std::make_shared<const Expr>(std::move(copy));
    }
    default: return e;
  }
}

Scm build(ModelAst ast) {
  std::vector<Diagnostic>& diags = ast.diagnostics;
  std::set<std::string> variables;
  std::set<std::string> noise_ids;
  std::set<std::string> labels;
  std::map<std::string, SourceSpan> first_decl;
  auto declare = [&](const std::string& id, SourceSpan span) {
    if (!first_decl.emplace(id, span).second) diags.push_back({span, "duplicate definition of '" + id + "'", {}});
    variables.insert(id);
  };
  for (const auto& n : ast.noise) {
    declare(n.id, n.span);
    noise_ids.insert(n.id);
    labels.insert(n.labels.begin(), n.labels.end());
  }
  for (const auto& v : ast.vars) {
    declare(v.id, v.span);
    labels.insert(v.labels.begin(), v.labels.end());
  }

  std::vector<Variable> endogenous;
  std::vector<NoiseDecl> noise;
  std::vector<Assignment> assignments;
  auto make_range = [&](const std::vector<std::string>& ls, SourceSpan span) -> std::optional<FiniteRange> {
    std::set<std::string> seen;
    for (const auto& l : ls) {
      if (!seen.insert(l).second) {
        diags.push_back({span, "duplicate label '" + l + "'", {}});
        return std::nullopt;
      }
    }
    return FiniteRange(ls);
  };
  for (const auto& n : ast.noise) {
    if (auto r = make_range(n.labels, n.span)) noise.push_back({n.id, *r, n.masses, n.span});
  }
  std::set<std::string> endogenous_ids;
  for (const auto& v : ast.vars) endogenous_ids.insert(v.id);

  for (const auto& v : ast.vars) {
    auto r = make_range(v.labels, v.span);
    if (!r) continue;
    endogenous.push_back({v.id, *r});
    ExprPtr body = resolve(v.body, variables, labels, diags);
    const auto refs = referenced_ids(*body);
    Assignment a;
    a.target = v.id;
    a.body = body;
    a.span = v.span;
    std::vector<std::string> noise_refs;
    for (const auto& w : ast.vars) {
      if (std::find(refs.begin(), refs.end(), w.id) != refs.end()) a.parents.push_back(w.id);
    }
    for (const auto& id : refs) {
      if (noise_ids.count(id)) noise_refs.push_back(id);
    }
    if (noise_refs.size() > 1) {
      diags.push_back({body->span, "body of '" + v.id + "' references more than one noise variable", {}});
      continue;
    }
    if (noise_refs.empty()) {
      if (!noise_ids.count("N_" + v.id)) {
        diags.push_back({v.span, "variable '" + v.id + "' has no noise variable (reference one or declare N_" + v.id + ")", {}});
        continue;
      }
      a.noise = "N_" + v.id;
    } else {
      a.noise = noise_refs.front();
    }
    assignments.push_back(std::move(a));
  }

  if (!diags.empty()) {
    sort_diagnostics(diags);
    throw ParseError(diags);
  }
  Scm model(ast.name, std::move(endogenous), std::move(noise), std::move(assignments));
  if (!model.valid()) {
    for (const auto& violation : model.report().violations) {
      SourceSpan span = violation.span;
      if (span.end == 0 && !violation.variable.empty()) {
        auto it = first_decl.find(violation.variable);
        if (it != first_decl.end()) span = it->second;
      }
      diags.push_back({span, violation.message, {}});
    }
    sort_diagnostics(diags);
    throw ParseError(diags);
  }
  return model;
}

std::string join_labels(const FiniteRange& r) {
  std::string out;
  for (std::size_t i = 0; i < r.size(); ++i) out += (i ? ", " : "") + r.label(i);
  return out;
}

std::string pmf_source(const FiniteRange& r, const std::vector<Rational>& masses) {
  std::string out = "{";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += (i ? ", " : "") + r.label(i) + ": " + to_string(masses[i]);
  }
  return out + "}";
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorKind::Parse, diagnostics.empty() ? "parse error" : format_diagnostic(diagnostics.front())),
      diagnostics_(std::move(diagnostics)) {}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": error: " + d.message;
  if (!d.expected.empty()) {
    out += " (expected: ";
    for (std::size_t i = 0; i < d.expected.size(); ++i) out += (i ? ", " : "") + d.expected[i];
    out += ")";
  }
  return out;
}

Scm parse_scm(std::string_view text) { return build(Parser(Lexer(text).run()).model()); }

ExprPtr parse_expr(std::string_view text) { return Parser(Lexer(text).run()).standalone_expr(); }

std::vector<std::pair<std::string, Rational>> parse_pmf_literal(std::string_view text) {
  return Parser(Lexer(text).run()).standalone_pmf();
}

Protocol parse_protocol(const Scm& model, const std::string& target, std::string_view text) {
  const auto& range = model.variable(target).range;
  std::vector<Rational> masses(range.size(), Rational(0));
  for (const auto& [label, mass] : parse_pmf_literal(text)) {
    auto i = range.index_of(label);
    if (!i) fail(ErrorKind::RangeMismatch, "label '" + label + "' is not in the range of '" + target + "'");
    masses[*i] = mass;
  }
  return Protocol(target, range, std::move(masses));
}

std::string protocol_to_source(const Protocol& protocol) {
  return pmf_source(protocol.range(), protocol.dist().masses());
}

std::string serialize_scm(const Scm& model) {
  if (!model.valid()) {
    fail(ErrorKind::InvalidModel, "cannot serialize invalid model '" + model.name() + "'");
  }
  const LabelRank rank = [&](const std::string& var, const std::string& label) -> std::size_t {
    const FiniteRange* r = nullptr;
    if (auto i = model.index_of(var)) r = &model.endogenous()[*i].range;
    if (auto i = model.noise_index_of(var)) r = &model.noise()[*i].range;
    if (!r) return 0;
    return r->index_of(label).value_or(r->size());
  };
  std::string out = "scm " + model.name() + " {\n";
  for (const auto& n : model.noise()) {
    std::vector<Rational> masses = n.masses;
    for (auto& m : masses) m.canonicalize();
    out += "  noise " + n.id + " ~ " + pmf_source(n.range, masses) + "\n";
  }
  for (std::size_t i = 0; i < model.endogenous().size(); ++i) {
    const auto& v = model.endogenous()[i];
    out += "  var " + v.id + " : {" + join_labels(v.range) + "} = " + to_source(*model.assignments()[i].body, rank) + "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace causalinfo
