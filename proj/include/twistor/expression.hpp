#pragma once

#include "twistor/chart.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

// Metric components written as expressions in x1..x4.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | x1 | x2 | x3 | x4 | pi | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sqrt | sin | cos
//
// '^' is right associative and binds tighter than unary minus, so -x1^2 = -(x1^2).
// Evaluation is generic over double and Jet, which gives exact first and second partials.

namespace twistor {

class Expression {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt, Sin, Cos };

  static Expression parse(const std::string& text) {
    Parser p{text};
    Expression e;
    e.root_ = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    e.text_ = text;
    return e;
  }

  const std::string& text() const { return text_; }

  template <class S>
  S operator()(const std::array<S, 4>& x) const {
    return eval(*root_, x);
  }

  double operator()(const Point& x) const { return (*this)(std::array<double, 4>{x[0], x[1], x[2], x[3]}); }

 private:
  struct Node {
    Op op = Op::Const;
    double value = 0.0;
    int var = 0;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;

    bool constant() const { return op == Op::Const || (op != Op::Var && (!a || a->constant()) && (!b || b->constant())); }
  };
  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
      throw Error(ErrorKind::Parse, what + " at offset " + std::to_string(pos) + " in '" + s + "'");
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    NodePtr expr() {
      NodePtr lhs = term();
      for (;;) {
        if (eat('+')) lhs = make(Op::Add, lhs, term());
        else if (eat('-')) lhs = make(Op::Sub, lhs, term());
        else return lhs;
      }
    }
    NodePtr term() {
      NodePtr lhs = unary();
      for (;;) {
        if (eat('*')) lhs = make(Op::Mul, lhs, unary());
        else if (eat('/')) lhs = make(Op::Div, lhs, unary());
        else return lhs;
      }
    }
    NodePtr unary() {
      if (eat('-')) return make(Op::Neg, unary());
      if (eat('+')) return unary();
      return power();
    }
    NodePtr power() {
      NodePtr base = primary();
      if (eat('^')) return make(Op::Pow, base, unary());
      return base;
    }
    NodePtr primary() {
      skip();
      if (pos >= s.size()) fail("unexpected end of expression");
      if (eat('(')) {
        NodePtr e = expr();
        if (!eat(')')) fail("expected ')'");
        return e;
      }
      const char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(s.substr(pos), &used);
        } catch (const std::exception&) {
          fail("malformed number");
        }
        pos += used;
        auto n = std::make_shared<Node>();
        n->value = v;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t start = pos;
        while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
        const std::string word = s.substr(start, pos - start);
        if (word.size() == 2 && word[0] == 'x' && word[1] >= '1' && word[1] <= '4') {
          auto n = std::make_shared<Node>();
          n->op = Op::Var;
          n->var = word[1] - '1';
          return n;
        }
        if (word == "pi") {
          auto n = std::make_shared<Node>();
          n->value = std::acos(-1.0);
          return n;
        }
        Op op;
        if (word == "exp") op = Op::Exp;
        else if (word == "log") op = Op::Log;
        else if (word == "sqrt") op = Op::Sqrt;
        else if (word == "sin") op = Op::Sin;
        else if (word == "cos") op = Op::Cos;
        else {
          pos = start;
          fail("unknown name '" + word + "'");
        }
        if (!eat('(')) fail("expected '(' after " + word);
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(op, arg);
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }
  };

  template <class S>
  static S eval(const Node& n, const std::array<S, 4>& x) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    switch (n.op) {
      case Op::Const: return S(n.value);
      case Op::Var: return x[n.var];
      case Op::Add: return eval(*n.a, x) + eval(*n.b, x);
      case Op::Sub: return eval(*n.a, x) - eval(*n.b, x);
      case Op::Mul: return eval(*n.a, x) * eval(*n.b, x);
      case Op::Div: return eval(*n.a, x) / eval(*n.b, x);
      case Op::Neg: return S(0.0) - eval(*n.a, x);
      case Op::Pow:
        if (n.b->constant()) {
          using std::pow;
          return pow(eval(*n.a, x), eval(*n.b, std::array<double, 4>{0.0, 0.0, 0.0, 0.0}));
        }
        return exp(eval(*n.b, x) * log(eval(*n.a, x)));
      case Op::Exp: return exp(eval(*n.a, x));
      case Op::Log: return log(eval(*n.a, x));
      case Op::Sqrt: return sqrt(eval(*n.a, x));
      case Op::Sin: return sin(eval(*n.a, x));
      case Op::Cos: return cos(eval(*n.a, x));
    }
    return S(0.0);
  }

  NodePtr root_;
  std::string text_;
};

/// Chart whose metric components g_ab (a <= b) are expressions; partials by automatic differentiation.
inline MetricChart make_expression_chart(std::string id, const Vec4& lower, const Vec4& upper,
                                         const std::array<std::array<std::string, 4>, 4>& components,
                                         int orientation = 1) {
  std::array<std::array<std::shared_ptr<Expression>, 4>, 4> e{};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const std::string& text = components[a][b].empty() ? components[b][a] : components[a][b];
      if (text.empty()) {
        throw Error(ErrorKind::Parse, "metric component g" + std::to_string(a + 1) + std::to_string(b + 1) + " missing");
      }
      e[a][b] = std::make_shared<Expression>(Expression::parse(text));
      e[b][a] = e[a][b];
    }
  return make_jet_chart(std::move(id), lower, upper,
                        [e](const auto& x) {
                          using S = std::decay_t<decltype(x[0])>;
                          std::array<std::array<S, 4>, 4> g{};
                          for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b) g[a][b] = (*e[a][b])(x);
                          return g;
                        },
                        orientation);
}

}  // namespace twistor
