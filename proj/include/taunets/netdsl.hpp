#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taunets/gfunction.hpp"

namespace taunets {
namespace netdsl {

// Expression tree for nets over (eps, x). Number literals are non-negative
// by construction; negation is always an explicit node, which keeps
// parse(pretty_print(e)) structurally exact.
struct NetExpr {
  enum class Kind {
    number,
    eps,
    var,    // x1..xd, var_index is 1-based
    abs_x,  // |x|
    neg,
    ln,
    exp,
    sigma,
    abs,
    log_eps,
    add,
    sub,
    mul,
    div,
    pow
  };

  Kind kind = Kind::number;
  double number = 0.0;
  int var_index = 0;
  std::vector<NetExpr> kids;

  bool operator==(const NetExpr& o) const;
};

struct ParseError {
  std::size_t offset = 0;  // byte offset into the source
  std::string expected;
  std::string excerpt;
};

struct ParseResult {
  std::optional<NetExpr> expr;
  std::optional<ParseError> error;
  bool ok() const { return expr.has_value(); }
};

// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := unary ('^' factor)?          (right-associative power)
//   unary   := ('-')? primary
//   primary := number | 'eps' | 'x'i | '|x|' | fn '(' expr ')' | '(' expr ')'
//   fn      := ln | exp | sigma | abs | log_eps
ParseResult parse(std::string_view src, int dim);

// Canonical fully parenthesized form; parse(pretty_print(e)) == e.
std::string pretty_print(const NetExpr& e);

struct CompiledNet {
  FunctionNet fn;
  bool uses_x = false;
  int dim = 1;

  // View as a scalar net; only valid when no x-variables occur.
  ScalarNet scalar() const;
};

// Pure evaluator. Power and log_eps nodes run in log space; sigma is the
// counterexample cutoff. Domain violations (ln of a non-positive value,
// division by zero, ...) surface as EvaluationError carrying (eps, x).
CompiledNet compile(const NetExpr& e, int dim);

}  // namespace netdsl
}  // namespace taunets
