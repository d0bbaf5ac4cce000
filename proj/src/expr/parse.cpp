#include <cctype>
#include <numbers>

#include "liesym/expr.hpp"

namespace liesym {

namespace {

const std::map<std::string_view, Func>& function_table() {
  static const std::map<std::string_view, Func> table = {
      {"sin", Func::sin}, {"cos", Func::cos},   {"tan", Func::tan},       {"sec", Func::sec},
      {"exp", Func::exp}, {"ln", Func::ln},     {"log", Func::ln},        {"sqrt", Func::sqrt},
      {"arctan", Func::arctan}, {"atan", Func::arctan}, {"abs", Func::abs}, {"sign", Func::sign},
  };
  return table;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : src_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = expression();
    skip_space();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;

  // Accepts ASCII whitespace; U+2212 MINUS SIGN and U+00B7 / U+00D7 are
  // mapped to '-' and '*' so text copied from typeset formulas parses.
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    if (pos_ >= src_.size()) return '\0';
    const auto rest = src_.substr(pos_);
    if (rest.starts_with("−")) return '-';
    if (rest.starts_with("·") || rest.starts_with("×")) return '*';
    return src_[pos_];
  }

  void advance() {
    const auto rest = src_.substr(pos_);
    if (rest.starts_with("−")) {
      pos_ += 3;
    } else if (rest.starts_with("·") || rest.starts_with("×")) {
      pos_ += 2;
    } else {
      ++pos_;
    }
  }

  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    advance();
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        advance();
        lhs = lhs + term();
      } else if (c == '-') {
        advance();
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        advance();
        lhs = lhs * unary();
      } else if (c == '/') {
        advance();
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    const char c = peek();
    if (c == '-') {
      advance();
      return -unary();
    }
    if (c == '+') {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek() == '^') {
      advance();
      return pow(base, unary());
    }
    return base;
  }

  Expr atom() {
    const char c = peek();
    if (c == '(') {
      advance();
      Expr inner = expression();
      expect(')');
      return inner;
    }
    if (c == '|') {
      advance();
      Expr inner = expression();
      expect('|');
      return apply(Func::abs, inner);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    auto value = Number::from_string(std::string(src_.substr(start, pos_ - start)));
    if (!value) throw ParseError("malformed number", start);
    return Expr::constant(*value);
  }

  Expr call_argument() {
    expect('(');
    Expr arg = expression();
    expect(')');
    return arg;
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    int primes = 0;
    while (pos_ < src_.size() && src_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }

    if (auto slot = ctx_.slots.find(name); slot != ctx_.slots.end()) {
      Expr arg = call_argument();
      return Expr::slot(name, arg, primes, slot->second);
    }
    if (primes > 0) throw ParseError("derivative marks on non-slot '" + name + "'", start);

    if (name == "t") return Expr::variable(Var::t);
    if (name == "x") return Expr::variable(Var::x);
    if (name == "u") return Expr::variable(Var::u);
    if (name == "ux") return Expr::variable(Var::ux);
    if (name == "s") {
      if (!ctx_.allow_slot_argument) throw ParseError("variable 's' is only valid in slot bindings", start);
      return Expr::variable(Var::s);
    }
    if (auto m = ctx_.macros.find(name); m != ctx_.macros.end()) return m->second;
    if (auto p = ctx_.params.find(name); p != ctx_.params.end()) return Expr::param(name, p->second);
    if (auto f = function_table().find(name); f != function_table().end()) return apply(f->second, call_argument());
    if (name == "pi") return Expr::constant(Number::real(std::numbers::pi));
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::pair<std::string, std::string_view> split_assignment(std::string_view body, std::string_view line) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) throw ParseError("expected '=' in declaration '" + std::string(line) + "'", 0);
  return {std::string(trim(body.substr(0, eq))), trim(body.substr(eq + 1))};
}

}  // namespace

Expr parse(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).run(); }

void ParseContext::declare(std::string_view line) {
  line = trim(line);
  const auto space = line.find_first_of(" \t");
  const std::string_view keyword = line.substr(0, space);
  const std::string_view body = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
  if (keyword == "param") {
    auto [name, value] = split_assignment(body, line);
    auto number = Number::from_string(std::string(value));
    if (!number) {
      // Allow simple rational expressions such as "-1/2" or "(1/3)".
      const Expr e = parse(value);
      if (!e.is_constant()) throw ParseError("param value must be a rational constant", 0);
      number = *e.constant_value();
    }
    params[name] = *number;
  } else if (keyword == "slot") {
    slots[std::string(body)] = std::nullopt;
  } else if (keyword == "bind") {
    auto [name, value] = split_assignment(body, line);
    ParseContext inner = *this;
    inner.allow_slot_argument = true;
    slots[name] = parse(value, inner);
  } else if (keyword == "let") {
    auto [name, value] = split_assignment(body, line);
    macros[name] = parse(value, *this);
  } else {
    throw ParseError("unknown declaration '" + std::string(keyword) + "'", 0);
  }
}

}  // namespace liesym
