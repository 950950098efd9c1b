#pragma once

// Minimal arithmetic expressions over the variables x and t, so kernels and
// inhomogeneous terms can be supplied as text.  Recursive descent, no
// implicit multiplication, case-sensitive identifiers.
//
// Precedence: ^ (right-associative) > unary minus > * / > + -.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace supra::kexpr {

enum class ParseErrorKind { UnknownIdentifier, UnbalancedParen, DanglingOperator, BadNumber };

struct ParseError : std::runtime_error {
  ParseErrorKind kind;
  std::size_t offset;  // byte offset into the source string
  ParseError(ParseErrorKind k, std::size_t off, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(off)), kind(k), offset(off) {}
};

struct EvalError : std::runtime_error {
  std::string subexpr;
  EvalError(const std::string& what, std::string sub)
      : std::runtime_error(what + " in '" + sub + "'"), subexpr(std::move(sub)) {}
};

enum class Func { Sin, Cos, Exp, Ln, Abs, Sqrt };

struct Node {
  enum class Type { Number, Variable, Negate, Binary, Call };
  Type type;
  double number = 0.0;
  char variable = 'x';  // 'x' or 't'
  char op = '+';        // + - * / ^
  Func func = Func::Sin;
  std::shared_ptr<const Node> lhs, rhs;  // Negate/Call use lhs only
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  const Node& root() const {
    if (!root_) throw std::logic_error("empty expression");
    return *root_;
  }
  bool empty() const { return root_ == nullptr; }

 private:
  std::shared_ptr<const Node> root_;
};

namespace detail {

inline std::shared_ptr<const Node> make_number(double v) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Number;
  n->number = v;
  return n;
}

inline std::shared_ptr<const Node> make_variable(char v) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Variable;
  n->variable = v;
  return n;
}

inline std::shared_ptr<const Node> make_negate(std::shared_ptr<const Node> kid) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Negate;
  n->lhs = std::move(kid);
  return n;
}

inline std::shared_ptr<const Node> make_binary(char op, std::shared_ptr<const Node> a,
                                               std::shared_ptr<const Node> b) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Binary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline std::shared_ptr<const Node> make_call(Func f, std::shared_ptr<const Node> kid) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Call;
  n->func = f;
  n->lhs = std::move(kid);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::shared_ptr<const Node> run() {
    auto node = parse_sum();
    skip_ws();
    if (pos_ < src_.size()) {
      if (src_[pos_] == ')')
        throw ParseError(ParseErrorKind::UnbalancedParen, pos_, "unmatched ')'");
      throw ParseError(ParseErrorKind::DanglingOperator, pos_, "unexpected trailing input");
    }
    return node;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  std::shared_ptr<const Node> parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        const char op = src_[pos_++];
        lhs = make_binary(op, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  std::shared_ptr<const Node> parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && (src_[pos_] == '*' || src_[pos_] == '/')) {
        const char op = src_[pos_++];
        lhs = make_binary(op, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  std::shared_ptr<const Node> parse_unary() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '-') {
      ++pos_;
      return make_negate(parse_unary());
    }
    return parse_power();
  }

  std::shared_ptr<const Node> parse_power() {
    auto base = parse_primary();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      ++pos_;
      // Right-associative; the exponent may carry its own unary minus.
      return make_binary('^', base, parse_unary());
    }
    return base;
  }

  std::shared_ptr<const Node> parse_primary() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError(ParseErrorKind::DanglingOperator, pos_, "expected an operand");
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      auto inner = parse_sum();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != ')')
        throw ParseError(ParseErrorKind::UnbalancedParen, open, "unbalanced parenthesis");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(ParseErrorKind::DanglingOperator, pos_, "dangling operator");
  }

  std::shared_ptr<const Node> parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    // Exponent suffix like 1e-3.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
      if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
        pos_ = probe;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return make_number(value);
    } catch (const std::exception&) {
      throw ParseError(ParseErrorKind::BadNumber, start, "malformed number '" + text + "'");
    }
  }

  std::shared_ptr<const Node> parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (name == "x" || name == "t") return make_variable(name[0]);
    Func f;
    if (name == "sin") f = Func::Sin;
    else if (name == "cos") f = Func::Cos;
    else if (name == "exp") f = Func::Exp;
    else if (name == "ln") f = Func::Ln;
    else if (name == "abs") f = Func::Abs;
    else if (name == "sqrt") f = Func::Sqrt;
    else throw ParseError(ParseErrorKind::UnknownIdentifier, start, "unknown identifier '" + name + "'");
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != '(')
      throw ParseError(ParseErrorKind::UnbalancedParen, pos_,
                       "function '" + name + "' needs parentheses");
    const std::size_t open = pos_++;
    auto arg = parse_sum();
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != ')')
      throw ParseError(ParseErrorKind::UnbalancedParen, open, "unbalanced parenthesis");
    ++pos_;
    return make_call(f, std::move(arg));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline std::string func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Abs: return "abs";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

inline void print_node(const Node& node, std::string& out) {
  switch (node.type) {
    case Node::Type::Number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", node.number);
      out += buf;
      break;
    }
    case Node::Type::Variable:
      out += node.variable;
      break;
    case Node::Type::Negate:
      out += "(-";
      print_node(*node.lhs, out);
      out += ')';
      break;
    case Node::Type::Binary:
      out += '(';
      print_node(*node.lhs, out);
      out += node.op;
      print_node(*node.rhs, out);
      out += ')';
      break;
    case Node::Type::Call:
      out += func_name(node.func);
      out += '(';
      print_node(*node.lhs, out);
      out += ')';
      break;
  }
}

inline double eval_node(const Node& node, double x, double t) {
  switch (node.type) {
    case Node::Type::Number: return node.number;
    case Node::Type::Variable: return node.variable == 'x' ? x : t;
    case Node::Type::Negate: return -eval_node(*node.lhs, x, t);
    case Node::Type::Binary: {
      const double a = eval_node(*node.lhs, x, t);
      const double b = eval_node(*node.rhs, x, t);
      double value = 0.0;
      switch (node.op) {
        case '+': value = a + b; break;
        case '-': value = a - b; break;
        case '*': value = a * b; break;
        case '/':
          if (b == 0.0) {
            std::string sub;
            print_node(node, sub);
            throw EvalError("division by zero", sub);
          }
          value = a / b;
          break;
        case '^': value = std::pow(a, b); break;
      }
      if (!std::isfinite(value)) {
        std::string sub;
        print_node(node, sub);
        throw EvalError("non-finite result", sub);
      }
      return value;
    }
    case Node::Type::Call: {
      const double a = eval_node(*node.lhs, x, t);
      switch (node.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Exp: {
          const double value = std::exp(a);
          if (!std::isfinite(value)) {
            std::string sub;
            print_node(node, sub);
            throw EvalError("non-finite result", sub);
          }
          return value;
        }
        case Func::Ln:
          if (a <= 0.0) {
            std::string sub;
            print_node(node, sub);
            throw EvalError("logarithm of a nonpositive value", sub);
          }
          return std::log(a);
        case Func::Abs: return std::abs(a);
        case Func::Sqrt:
          if (a < 0.0) {
            std::string sub;
            print_node(node, sub);
            throw EvalError("square root of a negative value", sub);
          }
          return std::sqrt(a);
      }
      return 0.0;
    }
  }
  return 0.0;
}

inline bool nodes_equal(const Node& a, const Node& b) {
  if (a.type != b.type) return false;
  switch (a.type) {
    case Node::Type::Number: return a.number == b.number;
    case Node::Type::Variable: return a.variable == b.variable;
    case Node::Type::Negate: return nodes_equal(*a.lhs, *b.lhs);
    case Node::Type::Binary:
      return a.op == b.op && nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    case Node::Type::Call: return a.func == b.func && nodes_equal(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace detail

inline Expr parse(std::string_view src) { return Expr(detail::Parser(src).run()); }

inline double eval(const Expr& e, double x, double t) { return detail::eval_node(e.root(), x, t); }

/// Fully parenthesized form; reparses to a structurally identical tree.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_node(e.root(), out);
  return out;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  return detail::nodes_equal(a.root(), b.root());
}

}  // namespace supra::kexpr
