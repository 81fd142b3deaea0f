#include "sigmak/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sigmak {

struct Expression::Node {
  enum class Kind { number, variable, neg, add, sub, mul, div, sin, cos, exp };
  Kind kind = Kind::number;
  double value = 0.0;
  std::string name;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::set<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) + ": " +
                                what + " in \"" + std::string(text_) + "\"");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = make(Node::Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Node::Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = make(Node::Kind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Node::Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      return make(Node::Kind::neg, unary());
    }
    if (accept('+')) {
      return unary();
    }
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) {
      fail("unexpected end of input");
    }
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) {
        fail("expected ')'");
      }
      return e;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (res.ec != std::errc()) {
        fail("bad number");
      }
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "sin" || name == "cos" || name == "exp") {
        if (!accept('(')) {
          fail("expected '(' after " + name);
        }
        NodePtr arg = expr();
        if (!accept(')')) {
          fail("expected ')'");
        }
        const auto kind = name == "sin"   ? Node::Kind::sin
                          : name == "cos" ? Node::Kind::cos
                                          : Node::Kind::exp;
        return make(kind, arg);
      }
      if (name == "pi") {
        auto n = std::make_shared<Node>();
        n->value = std::numbers::pi;
        return n;
      }
      if (name == "x" || name == "y" || name == "z" || name == "theta" || name == "r") {
        vars_.insert(name);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->name = name;
        return n;
      }
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::set<std::string>& vars_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, const ExprVars& v) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable:
      if (n.name == "x") return v.x;
      if (n.name == "y") return v.y;
      if (n.name == "z") return v.z;
      if (n.name == "theta") return v.theta;
      return v.r;
    case Node::Kind::neg:
      return -eval_node(*n.lhs, v);
    case Node::Kind::add:
      return eval_node(*n.lhs, v) + eval_node(*n.rhs, v);
    case Node::Kind::sub:
      return eval_node(*n.lhs, v) - eval_node(*n.rhs, v);
    case Node::Kind::mul:
      return eval_node(*n.lhs, v) * eval_node(*n.rhs, v);
    case Node::Kind::div:
      return eval_node(*n.lhs, v) / eval_node(*n.rhs, v);
    case Node::Kind::sin:
      return std::sin(eval_node(*n.lhs, v));
    case Node::Kind::cos:
      return std::cos(eval_node(*n.lhs, v));
    case Node::Kind::exp:
      return std::exp(eval_node(*n.lhs, v));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  Parser p(text, e.vars_);
  e.root_ = p.parse();
  return e;
}

double Expression::eval(const ExprVars& vars) const { return eval_node(*root_, vars); }

ScalarField field_from_spec(const std::string& spec, const Grid& grid) {
  if (!spec.empty() && spec.front() == '@') {
    ScalarField f = load_field(spec.substr(1));
    if (kind_name(f.grid()) != kind_name(grid) || f.size() != node_count(grid) ||
        grid_spacing(f.grid()) != grid_spacing(grid)) {
      throw std::invalid_argument("field file " + spec.substr(1) + " is on a different grid");
    }
    return f;
  }
  const Expression e = Expression::parse(spec);
  const std::string kind = kind_name(grid);
  std::set<std::string> bound;
  if (kind == "torus") {
    bound = {"x", "y", "z"};
  } else if (kind == "sphere_polar") {
    bound = {"theta", "r"};
  } else {
    bound = {"r"};
  }
  for (const std::string& name : e.variables()) {
    if (bound.count(name) == 0) {
      throw std::invalid_argument("variable '" + name + "' is not defined on a " + kind + " grid");
    }
  }
  return ScalarField::sample(grid, [&](const std::array<double, 3>& p) {
    ExprVars v;
    if (kind == "torus") {
      v.x = p[0];
      v.y = p[1];
      v.z = p[2];
    } else {
      v.theta = p[0];
      v.r = p[0];
    }
    return e.eval(v);
  });
}

}  // namespace sigmak
