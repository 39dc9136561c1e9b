// Recursive-descent parser for symbol expressions.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "locomp/errors.hpp"
#include "locomp/symbols.hpp"

namespace locomp {

struct Expression::Node {
  enum class Kind { number, var_r, var_x, var_y, var_theta, unary_minus, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  double value = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double r, double x, double y) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::var_r: return r;
      case Kind::var_x: return x;
      case Kind::var_y: return y;
      case Kind::var_theta: return std::atan2(y, x);
      case Kind::unary_minus: return -args[0]->eval(r, x, y);
      case Kind::add: return args[0]->eval(r, x, y) + args[1]->eval(r, x, y);
      case Kind::sub: return args[0]->eval(r, x, y) - args[1]->eval(r, x, y);
      case Kind::mul: return args[0]->eval(r, x, y) * args[1]->eval(r, x, y);
      case Kind::div: return args[0]->eval(r, x, y) / args[1]->eval(r, x, y);
      case Kind::pow: return std::pow(args[0]->eval(r, x, y), args[1]->eval(r, x, y));
      case Kind::call: break;
    }
    std::vector<double> a;
    for (const auto& n : args) a.push_back(n->eval(r, x, y));
    if (fn == "exp") return std::exp(a[0]);
    if (fn == "log") return std::log(a[0]);
    if (fn == "sqrt") return std::sqrt(a[0]);
    if (fn == "abs") return std::abs(a[0]);
    if (fn == "sin") return std::sin(a[0]);
    if (fn == "cos") return std::cos(a[0]);
    if (fn == "tan") return std::tan(a[0]);
    if (fn == "tanh") return std::tanh(a[0]);
    if (fn == "atan") return std::atan(a[0]);
    if (fn == "step") return a[0] >= 0.0 ? 1.0 : 0.0;
    if (fn == "min") return std::min(a[0], a[1]);
    return std::max(a[0], a[1]);  // "max", the only remaining function
  }

  bool uses_cartesian() const {
    if (kind == Kind::var_x || kind == Kind::var_y || kind == Kind::var_theta) return true;
    for (const auto& n : args) {
      if (n->uses_cartesian()) return true;
    }
    return false;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

int arity(const std::string& fn) {
  static const char* unary[] = {"exp", "log", "sqrt", "abs", "sin", "cos", "tan", "tanh", "atan", "step"};
  for (const char* u : unary) {
    if (fn == u) return 1;
  }
  if (fn == "min" || fn == "max") return 2;
  return -1;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Kind k, std::vector<NodePtr> args = {}, double v = 0.0, std::string fn = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->args = std::move(args);
    n->value = v;
    n->fn = std::move(fn);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Kind::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Kind::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::unary_minus, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Kind::pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Kind::number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (accept('(')) {
        const int k = arity(name);
        if (k < 0) fail("unknown function '" + name + "'");
        std::vector<NodePtr> args{expr()};
        while (accept(',')) args.push_back(expr());
        if (!accept(')')) fail("expected ')'");
        if (static_cast<int>(args.size()) != k) fail("function '" + name + "' takes " + std::to_string(k) + " argument(s)");
        return make(Kind::call, std::move(args), 0.0, name);
      }
      if (name == "r") return make(Kind::var_r);
      if (name == "x") return make(Kind::var_x);
      if (name == "y") return make(Kind::var_y);
      if (name == "theta") return make(Kind::var_theta);
      if (name == "pi") return make(Kind::number, {}, std::numbers::pi);
      if (name == "e") return make(Kind::number, {}, std::numbers::e);
      fail("unknown name '" + name + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text).parse()) {}

double Expression::operator()(double r, double x, double y) const { return root_->eval(r, x, y); }

bool Expression::radial_only() const { return !root_->uses_cartesian(); }

}  // namespace locomp
