#include "taunets/netdsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "taunets/counterexample.hpp"

namespace taunets {
namespace netdsl {

bool NetExpr::operator==(const NetExpr& o) const {
  if (kind != o.kind || kids.size() != o.kids.size()) return false;
  if (kind == Kind::number && number != o.number) return false;
  if (kind == Kind::var && var_index != o.var_index) return false;
  for (std::size_t i = 0; i < kids.size(); ++i)
    if (!(kids[i] == o.kids[i])) return false;
  return true;
}

namespace {

struct Token {
  enum class Type { number, ident, abs_x, plus, minus, star, slash, caret, lparen, rparen, end };
  Type type = Type::end;
  std::size_t offset = 0;
  double number = 0.0;
  std::string text;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  // Returns the next token or sets err.
  bool next(Token& tok, ParseError& err) {
    skip_ws();
    tok.offset = pos;
    if (pos >= src.size()) {
      tok.type = Token::Type::end;
      return true;
    }
    const char c = src[pos];
    switch (c) {
      case '+': tok.type = Token::Type::plus; ++pos; return true;
      case '-': tok.type = Token::Type::minus; ++pos; return true;
      case '*': tok.type = Token::Type::star; ++pos; return true;
      case '/': tok.type = Token::Type::slash; ++pos; return true;
      case '^': tok.type = Token::Type::caret; ++pos; return true;
      case '(': tok.type = Token::Type::lparen; ++pos; return true;
      case ')': tok.type = Token::Type::rparen; ++pos; return true;
      default: break;
    }
    if (c == '|') {
      if (pos + 2 < src.size() + 1 && pos + 2 <= src.size() && src[pos + 1] == 'x' &&
          src[pos + 2] == '|') {
        tok.type = Token::Type::abs_x;
        pos += 3;
        return true;
      }
      err = {pos, "'|x|'", excerpt(pos)};
      return false;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos < src.size() && src[pos] == '.') {
        ++pos;
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) {
          err = {pos, "digit after decimal point", excerpt(start)};
          return false;
        }
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
      if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
        std::size_t epos = pos + 1;
        if (epos < src.size() && (src[epos] == '+' || src[epos] == '-')) ++epos;
        if (epos < src.size() && std::isdigit(static_cast<unsigned char>(src[epos]))) {
          pos = epos;
          while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        }
      }
      tok.type = Token::Type::number;
      tok.text = std::string(src.substr(start, pos - start));
      tok.number = std::strtod(tok.text.c_str(), nullptr);
      tok.offset = start;
      return true;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      tok.type = Token::Type::ident;
      tok.text = std::string(src.substr(start, pos - start));
      tok.offset = start;
      return true;
    }
    err = {pos, "a token", excerpt(pos)};
    return false;
  }

  std::string excerpt(std::size_t at) const {
    const std::size_t lo = at > 12 ? at - 12 : 0;
    return std::string(src.substr(lo, 24));
  }
};

class Parser {
 public:
  Parser(std::string_view src, int dim) : lex_{src}, dim_(dim) {}

  ParseResult run() {
    ParseResult out;
    ParseError err;
    if (!advance(err)) {
      out.error = err;
      return out;
    }
    NetExpr e;
    if (!parse_expr(e, err)) {
      out.error = err;
      return out;
    }
    if (cur_.type != Token::Type::end) {
      out.error = {cur_.offset, "end of input", lex_.excerpt(cur_.offset)};
      return out;
    }
    out.expr = std::move(e);
    return out;
  }

 private:
  bool advance(ParseError& err) { return lex_.next(cur_, err); }

  bool parse_expr(NetExpr& out, ParseError& err) {
    if (!parse_term(out, err)) return false;
    while (cur_.type == Token::Type::plus || cur_.type == Token::Type::minus) {
      const bool plus = cur_.type == Token::Type::plus;
      if (!advance(err)) return false;
      NetExpr rhs;
      if (!parse_term(rhs, err)) return false;
      NetExpr node;
      node.kind = plus ? NetExpr::Kind::add : NetExpr::Kind::sub;
      node.kids.push_back(std::move(out));
      node.kids.push_back(std::move(rhs));
      out = std::move(node);
    }
    return true;
  }

  bool parse_term(NetExpr& out, ParseError& err) {
    if (!parse_factor(out, err)) return false;
    while (cur_.type == Token::Type::star || cur_.type == Token::Type::slash) {
      const bool mul = cur_.type == Token::Type::star;
      if (!advance(err)) return false;
      NetExpr rhs;
      if (!parse_factor(rhs, err)) return false;
      NetExpr node;
      node.kind = mul ? NetExpr::Kind::mul : NetExpr::Kind::div;
      node.kids.push_back(std::move(out));
      node.kids.push_back(std::move(rhs));
      out = std::move(node);
    }
    return true;
  }

  bool parse_factor(NetExpr& out, ParseError& err) {
    if (!parse_unary(out, err)) return false;
    if (cur_.type == Token::Type::caret) {
      if (!advance(err)) return false;
      NetExpr rhs;
      if (!parse_factor(rhs, err)) return false;  // right-associative
      NetExpr node;
      node.kind = NetExpr::Kind::pow;
      node.kids.push_back(std::move(out));
      node.kids.push_back(std::move(rhs));
      out = std::move(node);
    }
    return true;
  }

  bool parse_unary(NetExpr& out, ParseError& err) {
    if (cur_.type == Token::Type::minus) {
      if (!advance(err)) return false;
      NetExpr inner;
      if (!parse_primary(inner, err)) return false;
      out = NetExpr{};
      out.kind = NetExpr::Kind::neg;
      out.kids.push_back(std::move(inner));
      return true;
    }
    return parse_primary(out, err);
  }

  bool parse_primary(NetExpr& out, ParseError& err) {
    switch (cur_.type) {
      case Token::Type::number: {
        out = NetExpr{};
        out.kind = NetExpr::Kind::number;
        out.number = cur_.number;
        return advance(err);
      }
      case Token::Type::abs_x: {
        out = NetExpr{};
        out.kind = NetExpr::Kind::abs_x;
        return advance(err);
      }
      case Token::Type::lparen: {
        if (!advance(err)) return false;
        if (!parse_expr(out, err)) return false;
        if (cur_.type != Token::Type::rparen) {
          err = {cur_.offset, "')'", lex_.excerpt(cur_.offset)};
          return false;
        }
        return advance(err);
      }
      case Token::Type::ident: {
        const std::string name = cur_.text;
        const std::size_t at = cur_.offset;
        if (name == "eps") {
          out = NetExpr{};
          out.kind = NetExpr::Kind::eps;
          return advance(err);
        }
        if (name.size() >= 2 && name[0] == 'x' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
          const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
          if (idx < 1 || idx > dim_) {
            err = {at, "variable index in 1.." + std::to_string(dim_), lex_.excerpt(at)};
            return false;
          }
          out = NetExpr{};
          out.kind = NetExpr::Kind::var;
          out.var_index = static_cast<int>(idx);
          return advance(err);
        }
        NetExpr::Kind fn;
        if (name == "ln")
          fn = NetExpr::Kind::ln;
        else if (name == "exp")
          fn = NetExpr::Kind::exp;
        else if (name == "sigma")
          fn = NetExpr::Kind::sigma;
        else if (name == "abs")
          fn = NetExpr::Kind::abs;
        else if (name == "log_eps")
          fn = NetExpr::Kind::log_eps;
        else {
          err = {at, "a known identifier (eps, x<i>, ln, exp, sigma, abs, log_eps)",
                 lex_.excerpt(at)};
          return false;
        }
        if (!advance(err)) return false;
        if (cur_.type != Token::Type::lparen) {
          err = {cur_.offset, "'(' after " + name, lex_.excerpt(cur_.offset)};
          return false;
        }
        if (!advance(err)) return false;
        NetExpr arg;
        if (!parse_expr(arg, err)) return false;
        if (cur_.type != Token::Type::rparen) {
          err = {cur_.offset, "')'", lex_.excerpt(cur_.offset)};
          return false;
        }
        out = NetExpr{};
        out.kind = fn;
        out.kids.push_back(std::move(arg));
        return advance(err);
      }
      default:
        err = {cur_.offset, "expression", lex_.excerpt(cur_.offset)};
        return false;
    }
  }

  Lexer lex_;
  Token cur_;
  int dim_;
};

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void pp(const NetExpr& e, std::string& out) {
  using K = NetExpr::Kind;
  switch (e.kind) {
    case K::number: out += fmt_number(e.number); return;
    case K::eps: out += "eps"; return;
    case K::var: out += "x" + std::to_string(e.var_index); return;
    case K::abs_x: out += "|x|"; return;
    case K::neg:
      out += "(-";
      pp(e.kids[0], out);
      out += ")";
      return;
    case K::ln:
    case K::exp:
    case K::sigma:
    case K::abs:
    case K::log_eps: {
      const char* name = e.kind == K::ln      ? "ln"
                         : e.kind == K::exp   ? "exp"
                         : e.kind == K::sigma ? "sigma"
                         : e.kind == K::abs   ? "abs"
                                              : "log_eps";
      out += name;
      out += "(";
      pp(e.kids[0], out);
      out += ")";
      return;
    }
    default: {
      const char* op = e.kind == K::add   ? " + "
                       : e.kind == K::sub ? " - "
                       : e.kind == K::mul ? " * "
                       : e.kind == K::div ? " / "
                                          : " ^ ";
      out += "(";
      pp(e.kids[0], out);
      out += op;
      pp(e.kids[1], out);
      out += ")";
      return;
    }
  }
}

bool uses_x_vars(const NetExpr& e) {
  if (e.kind == NetExpr::Kind::var || e.kind == NetExpr::Kind::abs_x) return true;
  for (const auto& k : e.kids)
    if (uses_x_vars(k)) return true;
  return false;
}

[[noreturn]] void eval_fail(const std::string& what, double eps, const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < x.size() && i < 4; ++i) os << (i ? ", " : "") << x[i];
  os << "]";
  throw EvaluationError("dsl: " + what, eps, os.str());
}

double eval_node(const NetExpr& e, double eps, const Eigen::VectorXd& x) {
  using K = NetExpr::Kind;
  switch (e.kind) {
    case K::number: return e.number;
    case K::eps: return eps;
    case K::var: return x[e.var_index - 1];
    case K::abs_x: return x.stableNorm();
    case K::neg: return -eval_node(e.kids[0], eps, x);
    case K::ln: {
      const double v = eval_node(e.kids[0], eps, x);
      if (!(v > 0.0)) eval_fail("ln of a non-positive value", eps, x);
      return std::log(v);
    }
    case K::exp: return std::exp(eval_node(e.kids[0], eps, x));
    case K::sigma: {
      const double v = eval_node(e.kids[0], eps, x);
      if (v < 0.0) eval_fail("sigma of a negative radius", eps, x);
      return sigma(v);
    }
    case K::abs: return std::abs(eval_node(e.kids[0], eps, x));
    case K::log_eps: {
      const double v = eval_node(e.kids[0], eps, x);
      if (!(v > 0.0)) eval_fail("log_eps of a non-positive value", eps, x);
      return log_eps(v, eps);
    }
    case K::add: return eval_node(e.kids[0], eps, x) + eval_node(e.kids[1], eps, x);
    case K::sub: return eval_node(e.kids[0], eps, x) - eval_node(e.kids[1], eps, x);
    case K::mul: return eval_node(e.kids[0], eps, x) * eval_node(e.kids[1], eps, x);
    case K::div: {
      const double a = eval_node(e.kids[0], eps, x);
      const double b = eval_node(e.kids[1], eps, x);
      if (b == 0.0) eval_fail("division by zero", eps, x);
      return a / b;
    }
    case K::pow: {
      const double a = eval_node(e.kids[0], eps, x);
      const double b = eval_node(e.kids[1], eps, x);
      if (a > 0.0) return pow_logspace(a, b);
      if (a == 0.0) {
        if (b > 0.0) return 0.0;
        if (b == 0.0) return 1.0;
        eval_fail("0 raised to a negative power", eps, x);
      }
      if (std::nearbyint(b) == b && std::abs(b) < 9.007199254740992e15)
        return std::pow(a, b);
      eval_fail("negative base with non-integer exponent", eps, x);
    }
  }
  eval_fail("malformed expression node", eps, x);
}

}  // namespace

ParseResult parse(std::string_view src, int dim) {
  if (dim < 1) throw DomainError("parse: dim must be >= 1");
  return Parser(src, dim).run();
}

std::string pretty_print(const NetExpr& e) {
  std::string out;
  pp(e, out);
  return out;
}

ScalarNet CompiledNet::scalar() const {
  if (uses_x) throw DomainError("CompiledNet: expression depends on x");
  const auto ev = fn.eval;
  const int d = dim;
  return {[ev, d](double eps) { return ev(eps, Eigen::VectorXd::Zero(d)); }, fn.label};
}

CompiledNet compile(const NetExpr& e, int dim) {
  if (dim < 1) throw DomainError("compile: dim must be >= 1");
  CompiledNet out{
      FunctionNet{nullptr, nullptr, nullptr, Box::whole_space(dim), pretty_print(e)},
      uses_x_vars(e), dim};
  auto tree = std::make_shared<const NetExpr>(e);
  out.fn.eval = [tree](double eps, const Eigen::VectorXd& x) { return eval_node(*tree, eps, x); };
  return out;
}

}  // namespace netdsl
}  // namespace taunets
