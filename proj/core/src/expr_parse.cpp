#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "distval/expr.hpp"

namespace distval {

ParseError::ParseError(std::size_t off, std::string exp, std::string fnd)
    : std::runtime_error("parse error at offset " + std::to_string(off) + ": expected " + exp + ", found " + fnd),
      offset(off),
      expected(std::move(exp)),
      found(std::move(fnd)) {}

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end, bad };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    cur_ = Token{};
    cur_.offset = pos_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::end;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_ + 1;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      cur_.kind = Tok::ident;
      cur_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    cur_.text = src_.substr(pos_, 1);
    ++pos_;
    switch (c) {
      case '+': cur_.kind = Tok::plus; break;
      case '-': cur_.kind = Tok::minus; break;
      case '*': cur_.kind = Tok::star; break;
      case '/': cur_.kind = Tok::slash; break;
      case '^': cur_.kind = Tok::caret; break;
      case '(': cur_.kind = Tok::lparen; break;
      case ')': cur_.kind = Tok::rparen; break;
      case ',': cur_.kind = Tok::comma; break;
      default: cur_.kind = Tok::bad; break;
    }
  }

  void lex_number() {
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
      if (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end])))
        digits();
      else
        end = save;  // "2e" is the number 2 followed by the constant e
    }
    cur_.text = src_.substr(pos_, end - pos_);
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, cur_.number);
    cur_.kind = (ec == std::errc() && ptr == src_.data() + end) ? Tok::number : Tok::bad;
    pos_ = end;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Expr parse_all() {
    Expr e = expr();
    if (lex_.peek().kind != Tok::end) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(std::string expected) const {
    throw ParseError(lex_.peek().offset, std::move(expected), describe(lex_.peek()));
  }

  void expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) fail(what);
    lex_.take();
  }

  Expr expr() {
    Expr lhs = term();
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      const bool add = lex_.take().kind == Tok::plus;
      Expr rhs = term();
      lhs = Expr::binary(add ? BinaryOp::add : BinaryOp::sub, lhs, rhs);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
      const bool mul = lex_.take().kind == Tok::star;
      Expr rhs = factor();
      lhs = Expr::binary(mul ? BinaryOp::mul : BinaryOp::div, lhs, rhs);
    }
    return lhs;
  }

  Expr factor() {
    if (lex_.peek().kind == Tok::minus) {
      lex_.take();
      return Expr::unary(UnaryOp::neg, factor());
    }
    Expr b = base();
    if (lex_.peek().kind == Tok::caret) {
      lex_.take();
      Expr ex = lex_.peek().kind == Tok::minus ? factor() : base();
      return Expr::binary(BinaryOp::pow, b, ex);
    }
    return b;
  }

  Expr base() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::number: {
        double v = t.number;
        lex_.take();
        return Expr::constant(v);
      }
      case Tok::lparen: {
        lex_.take();
        Expr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident:
        return identifier();
      default:
        fail("number, identifier or '('");
    }
  }

  std::vector<Expr> arguments() {
    expect(Tok::lparen, "'('");
    std::vector<Expr> args;
    args.push_back(expr());
    while (lex_.peek().kind == Tok::comma) {
      lex_.take();
      args.push_back(expr());
    }
    expect(Tok::rparen, "',' or ')'");
    return args;
  }

  double constant_arg(const Expr& e, std::size_t offset) const {
    for (Var v : {Var::x, Var::y, Var::r, Var::n})
      if (e.uses(v)) throw ParseError(offset, "constant expression", "expression in " + std::string(var_name(v)));
    return e.eval(Env{});
  }

  Expr identifier() {
    const Token id = lex_.take();
    const std::string_view name = id.text;

    if (name == "x") return Expr::variable(Var::x);
    if (name == "y") return Expr::variable(Var::y);
    if (name == "r") return Expr::variable(Var::r);
    if (name == "n") return Expr::variable(Var::n);
    if (name == "pi") return Expr::constant(std::numbers::pi);
    if (name == "e") return Expr::constant(std::numbers::e);
    if (name == "inf") return Expr::constant(std::numeric_limits<double>::infinity());

    struct UnaryName {
      std::string_view name;
      UnaryOp op;
    };
    static constexpr UnaryName unaries[] = {
        {"sin", UnaryOp::sin},       {"cos", UnaryOp::cos}, {"exp", UnaryOp::exp},   {"ln", UnaryOp::ln},
        {"arctan", UnaryOp::arctan}, {"abs", UnaryOp::abs}, {"sqrt", UnaryOp::sqrt},
    };
    for (const auto& u : unaries) {
      if (name == u.name) {
        if (lex_.peek().kind != Tok::lparen) fail("'(' after " + std::string(name));
        const std::size_t at = lex_.peek().offset;
        auto args = arguments();
        if (args.size() != 1) throw ParseError(at, "one argument", std::to_string(args.size()) + " arguments");
        return Expr::unary(u.op, args[0]);
      }
    }
    if (name == "bump") {
      const std::size_t at = lex_.peek().offset;
      auto args = arguments();
      if (args.size() != 1) throw ParseError(at, "one argument", std::to_string(args.size()) + " arguments");
      return Expr::bump(args[0]);
    }
    if (name == "chi") {
      const std::size_t at = lex_.peek().offset;
      auto args = arguments();
      if (args.size() != 2 && args.size() != 3)
        throw ParseError(at, "2 or 3 arguments", std::to_string(args.size()) + " arguments");
      const double lo = constant_arg(args[0], at);
      const double hi = constant_arg(args[1], at);
      return Expr::indicator(lo, hi, args.size() == 3 ? args[2] : Expr::variable(Var::x));
    }
    if (name == "piecewise") {
      const std::size_t at = lex_.peek().offset;
      auto args = arguments();
      if (args.size() < 4 || (args.size() - 1) % 3 != 0)
        throw ParseError(at, "argument plus (lo, hi, body) triples", std::to_string(args.size()) + " arguments");
      std::vector<std::tuple<double, double, Expr>> branches;
      for (std::size_t i = 1; i < args.size(); i += 3)
        branches.emplace_back(constant_arg(args[i], at), constant_arg(args[i + 1], at), args[i + 2]);
      return Expr::piecewise(args[0], branches);
    }
    if (name == "onsupp") {
      const std::size_t at = lex_.peek().offset;
      auto args = arguments();
      if (args.size() != 2) throw ParseError(at, "two arguments", std::to_string(args.size()) + " arguments");
      return Expr::on_support(args[0], args[1]);
    }
    throw ParseError(id.offset, "known identifier", "'" + std::string(name) + "'");
  }

  Lexer lex_;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::variant<Expr, ParseError> try_parse(std::string_view text) {
  try {
    return parse(text);
  } catch (const ParseError& err) {
    return err;
  }
}

}  // namespace distval
