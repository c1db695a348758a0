// Copyright 2026 The cutloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Assertion language for global predicates over a state.
//
//   line   := IDENT ':' expr
//   expr   := and ('or' and)*
//   and    := unary ('and' unary)*
//   unary  := 'not' unary | cmp
//   cmp    := sum (('=' | '!=' | '<' | '<=' | '>' | '>=') sum)?
//   sum    := prod (('+' | '-') prod)*
//   prod   := atom ('*' atom)*
//   atom   := NUMBER | STRING | 'true' | 'false' | IDENT | '(' expr ')' | '-' atom
//
// '==', '&&', '||', '!' and the symbols '≠' '≤' '≥' '×' are accepted as
// spellings of the same operators.

#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cutloc/cutset.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"

namespace cutloc {

struct Expr {
  enum class Op {
    kLiteral, kVariable,
    kOr, kAnd, kNot,
    kEq, kNe, kLt, kLe, kGt, kGe,
    kAdd, kSub, kMul, kNeg,
  };
  using Value = std::variant<double, bool, std::string>;

  Op op = Op::kLiteral;
  Value literal;
  std::string name;
  std::vector<Expr> args;
};

struct GlobalPredicate {
  std::string id;
  std::string text;
  Expr expr;
  std::set<std::string> variables;
};

namespace detail {

class PredicateParser {
 public:
  explicit PredicateParser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_, 1)) + "'");
    return e;
  }

  const std::set<std::string>& variables() const { return variables_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kPredicateSyntax,
                what + " at column " + std::to_string(pos_ + 1) + " in '" +
                    std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // Consumes `token` if it is next; word tokens must not run into an identifier.
  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    bool word = std::isalpha(static_cast<unsigned char>(token.front()));
    if (word) {
      std::size_t end = pos_ + token.size();
      if (end < text_.size() && is_ident_char(text_[end])) return false;
    }
    pos_ += token.size();
    return true;
  }

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  static Expr node(Expr::Op op, std::vector<Expr> args) {
    Expr e;
    e.op = op;
    e.args = std::move(args);
    return e;
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (accept("or") || accept("||")) lhs = node(Expr::Op::kOr, {std::move(lhs), parse_and()});
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_unary();
    while (accept("and") || accept("&&")) {
      lhs = node(Expr::Op::kAnd, {std::move(lhs), parse_unary()});
    }
    return lhs;
  }

  Expr parse_unary() {
    if (accept("not")) return node(Expr::Op::kNot, {parse_unary()});
    skip_space();
    if (text_.substr(pos_, 2) != "!=" && accept("!")) return node(Expr::Op::kNot, {parse_unary()});
    return parse_cmp();
  }

  Expr parse_cmp() {
    Expr lhs = parse_sum();
    static const std::pair<std::string_view, Expr::Op> kOps[] = {
        {"==", Expr::Op::kEq}, {"!=", Expr::Op::kNe}, {"≠", Expr::Op::kNe},
        {"<=", Expr::Op::kLe}, {"≤", Expr::Op::kLe}, {">=", Expr::Op::kGe},
        {"≥", Expr::Op::kGe},  {"=", Expr::Op::kEq},  {"<", Expr::Op::kLt},
        {">", Expr::Op::kGt},
    };
    for (const auto& [token, op] : kOps) {
      if (accept(token)) return node(op, {std::move(lhs), parse_sum()});
    }
    return lhs;
  }

  Expr parse_sum() {
    Expr lhs = parse_prod();
    for (;;) {
      if (accept("+")) {
        lhs = node(Expr::Op::kAdd, {std::move(lhs), parse_prod()});
      } else if (accept("-") || accept("−")) {
        lhs = node(Expr::Op::kSub, {std::move(lhs), parse_prod()});
      } else {
        return lhs;
      }
    }
  }

  Expr parse_prod() {
    Expr lhs = parse_atom();
    while (accept("*") || accept("×")) lhs = node(Expr::Op::kMul, {std::move(lhs), parse_atom()});
    return lhs;
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of expression");
    if (accept("(")) {
      Expr inner = parse_or();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    if (accept("-") || accept("−")) return node(Expr::Op::kNeg, {parse_atom()});
    Expr e;
    char c = text_[pos_];
    if (c == '"') {
      std::size_t close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated string literal");
      e.literal = std::string(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) {
        ++end;
      }
      double value = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
      if (ec != std::errc() || ptr != text_.data() + end) fail("bad number");
      e.literal = value;
      pos_ = end;
      return e;
    }
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < text_.size() && is_ident_char(text_[end])) ++end;
      std::string word(text_.substr(pos_, end - pos_));
      if (word == "and" || word == "or" || word == "not") fail("unexpected keyword '" + word + "'");
      pos_ = end;
      if (word == "true" || word == "false") {
        e.literal = (word == "true");
        return e;
      }
      e.op = Expr::Op::kVariable;
      e.name = word;
      variables_.insert(word);
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<std::string> variables_;
};

}  // namespace detail

inline GlobalPredicate parse_predicate(std::string id, std::string_view expr_text) {
  detail::PredicateParser parser(expr_text);
  GlobalPredicate p;
  p.expr = parser.parse_all();
  p.variables = parser.variables();
  p.id = std::move(id);
  p.text = std::string(expr_text);
  return p;
}

// Parses the `id: EXPR` form.
inline GlobalPredicate parse_predicate_line(std::string_view line) {
  auto colon = line.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kPredicateSyntax, "expected 'id: EXPR' in '" + std::string(line) + "'");
  }
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto id = trim(line.substr(0, colon));
  bool id_ok = !id.empty() && (std::isalpha(static_cast<unsigned char>(id[0])) || id[0] == '_');
  for (char c : id) id_ok = id_ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  if (!id_ok) {
    throw Error(ErrorCode::kPredicateSyntax, "bad predicate id '" + std::string(id) + "'");
  }
  return parse_predicate(std::string(id), trim(line.substr(colon + 1)));
}

// One predicate per line; blank lines and lines starting with '#' are skipped.
inline std::vector<GlobalPredicate> parse_predicate_list(std::string_view text) {
  std::vector<GlobalPredicate> result;
  std::set<std::string> ids;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    result.push_back(parse_predicate_line(line.substr(first, last - first + 1)));
    if (!ids.insert(result.back().id).second) {
      throw Error(ErrorCode::kDuplicatePredicate, result.back().id);
    }
  }
  return result;
}

// Variable bindings carried by the data atoms of a state. When several atoms
// bind one variable the atom whose source vertex id is greatest wins.
inline std::map<std::string, Scalar> bindings_of(const State& s) {
  std::map<std::string, std::pair<VertexId, Scalar>> best;
  for (const auto& atom : s.atoms) {
    if (atom.label.kind != EdgeKind::kData) continue;
    auto [it, inserted] = best.try_emplace(atom.label.var, atom.key.src, atom.label.value);
    if (!inserted && atom.key.src > it->second.first) {
      it->second = {atom.key.src, atom.label.value};
    }
  }
  std::map<std::string, Scalar> bindings;
  for (auto& [var, entry] : best) bindings.emplace(var, std::move(entry.second));
  return bindings;
}

enum class PredicateResult { kViolated, kNotViolated, kUnevaluable };

struct PredicateOutcome {
  PredicateResult result = PredicateResult::kUnevaluable;
  std::string diagnostic;
};

namespace detail {

struct TypeMismatch {
  std::string what;
};

inline Expr::Value to_value(const Scalar& s) {
  if (s.is_number()) return s.as_number();
  if (s.is_bool()) return s.as_bool();
  return s.as_string();
}

inline Expr::Value evaluate(const Expr& e, const std::map<std::string, Scalar>& env) {
  using Op = Expr::Op;
  auto number = [](const Expr::Value& v, const char* op) {
    if (!std::holds_alternative<double>(v)) throw TypeMismatch{std::string("non-number operand of ") + op};
    return std::get<double>(v);
  };
  auto boolean = [](const Expr::Value& v, const char* op) {
    if (!std::holds_alternative<bool>(v)) throw TypeMismatch{std::string("non-boolean operand of ") + op};
    return std::get<bool>(v);
  };
  switch (e.op) {
    case Op::kLiteral: return e.literal;
    case Op::kVariable: return to_value(env.at(e.name));
    case Op::kNot: return !boolean(evaluate(e.args[0], env), "not");
    case Op::kNeg: return -number(evaluate(e.args[0], env), "-");
    default: break;
  }
  // Both operands are always evaluated so type errors surface regardless of
  // which branch would short-circuit.
  Expr::Value lhs = evaluate(e.args[0], env);
  Expr::Value rhs = evaluate(e.args[1], env);
  switch (e.op) {
    case Op::kOr: {
      bool a = boolean(lhs, "or");
      bool b = boolean(rhs, "or");
      return a || b;
    }
    case Op::kAnd: {
      bool a = boolean(lhs, "and");
      bool b = boolean(rhs, "and");
      return a && b;
    }
    case Op::kAdd: return number(lhs, "+") + number(rhs, "+");
    case Op::kSub: return number(lhs, "-") - number(rhs, "-");
    case Op::kMul: return number(lhs, "*") * number(rhs, "*");
    case Op::kEq:
    case Op::kNe: {
      if (lhs.index() != rhs.index()) throw TypeMismatch{"comparison of different types"};
      bool equal = lhs == rhs;
      return e.op == Op::kEq ? equal : !equal;
    }
    default: break;
  }
  if (lhs.index() != rhs.index() || std::holds_alternative<bool>(lhs)) {
    throw TypeMismatch{"ordering comparison of incompatible types"};
  }
  switch (e.op) {
    case Op::kLt: return lhs < rhs;
    case Op::kLe: return lhs <= rhs;
    case Op::kGt: return lhs > rhs;
    case Op::kGe: return lhs >= rhs;
    default: break;
  }
  throw TypeMismatch{"unknown operator"};
}

}  // namespace detail

// Violated iff every referenced variable is bound and the expression is false.
inline PredicateOutcome eval_predicate(const GlobalPredicate& p,
                                       const std::map<std::string, Scalar>& bindings) {
  for (const auto& var : p.variables) {
    if (!bindings.contains(var)) {
      return {PredicateResult::kUnevaluable, "unbound variable '" + var + "'"};
    }
  }
  try {
    auto value = detail::evaluate(p.expr, bindings);
    if (!std::holds_alternative<bool>(value)) {
      return {PredicateResult::kUnevaluable, "expression is not boolean"};
    }
    return {std::get<bool>(value) ? PredicateResult::kNotViolated : PredicateResult::kViolated, {}};
  } catch (const detail::TypeMismatch& mismatch) {
    return {PredicateResult::kUnevaluable, mismatch.what};
  }
}

inline PredicateOutcome eval_predicate(const GlobalPredicate& p, const State& s) {
  return eval_predicate(p, bindings_of(s));
}

}  // namespace cutloc
