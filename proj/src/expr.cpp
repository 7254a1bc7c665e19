#include "bvir/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace bvir {

struct Expression::Node {
  NodeKind kind = NodeKind::Const;
  double value = 0.0;   // Const
  int var = -1;         // Var
  int exponent = 0;     // Pow
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

const std::array<std::string, kNumVarSlots>& var_names() {
  static const std::array<std::string, kNumVarSlots> names = {
      "x", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9", "t"};
  return names;
}

NodePtr make_const(double c) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = NodeKind::Const;
  n->value = c;
  return n;
}

NodePtr make_var(int slot) {
  if (slot < 0 || slot >= kNumVarSlots)
    throw std::invalid_argument("unknown variable slot " + std::to_string(slot));
  auto n = std::make_shared<Expression::Node>();
  n->kind = NodeKind::Var;
  n->var = slot;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->kind == NodeKind::Const && n->value == v;
}

NodePtr make_binary(NodeKind kind, NodePtr a, NodePtr b) {
  // Constant folding plus neutral-element cleanup; nothing fancier.
  const bool ca = a->kind == NodeKind::Const;
  const bool cb = b->kind == NodeKind::Const;
  switch (kind) {
    case NodeKind::Add:
      if (ca && cb) return make_const(a->value + b->value);
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case NodeKind::Sub:
      if (ca && cb) return make_const(a->value - b->value);
      if (is_const(b, 0.0)) return a;
      break;
    case NodeKind::Mul:
      if (ca && cb) return make_const(a->value * b->value);
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case NodeKind::Div:
      if (ca && cb && b->value != 0.0) return make_const(a->value / b->value);
      if (is_const(b, 1.0)) return a;
      if (is_const(a, 0.0)) return make_const(0.0);
      break;
    default:
      break;
  }
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
  if (exponent == 0) return make_const(1.0);
  if (exponent == 1) return base;
  if (base->kind == NodeKind::Const) {
    if (!(base->value == 0.0 && exponent < 0))
      return make_const(std::pow(base->value, exponent));
  }
  auto n = std::make_shared<Expression::Node>();
  n->kind = NodeKind::Pow;
  n->exponent = exponent;
  n->a = std::move(base);
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr a) {
  if (a->kind == NodeKind::Const) {
    switch (kind) {
      case NodeKind::Sin: return make_const(std::sin(a->value));
      case NodeKind::Cos: return make_const(std::cos(a->value));
      case NodeKind::Exp: return make_const(std::exp(a->value));
      case NodeKind::Atan: return make_const(std::atan(a->value));
      case NodeKind::Log:
        if (a->value > 0.0) return make_const(std::log(a->value));
        break;  // keep the node; evaluation reports the domain violation
      default: break;
    }
  }
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->a = std::move(a);
  return n;
}

double pow_int(double base, int exponent) {
  if (exponent < 0) return 1.0 / pow_int(base, -exponent);
  double result = 1.0, acc = base;
  for (int e = exponent; e > 0; e >>= 1) {
    if (e & 1) result *= acc;
    acc *= acc;
  }
  return result;
}

std::string format_double(double v) {
  std::array<char, 40> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Pow: return 3;
    default: return 4;
  }
}

void print_node(const Expression::Node* n, int min_prec, std::string& out) {
  const int prec = precedence(n->kind);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (n->kind) {
    case NodeKind::Const:
      out += format_double(n->value);
      break;
    case NodeKind::Var:
      out += var_names()[n->var];
      break;
    case NodeKind::Add:
      print_node(n->a.get(), 1, out);
      out += " + ";
      print_node(n->b.get(), 2, out);
      break;
    case NodeKind::Sub:
      print_node(n->a.get(), 1, out);
      out += " - ";
      print_node(n->b.get(), 2, out);
      break;
    case NodeKind::Mul:
      print_node(n->a.get(), 2, out);
      out += "*";
      print_node(n->b.get(), 3, out);
      break;
    case NodeKind::Div:
      print_node(n->a.get(), 2, out);
      out += "/";
      print_node(n->b.get(), 3, out);
      break;
    case NodeKind::Pow:
      print_node(n->a.get(), 4, out);
      out += "^";
      out += std::to_string(n->exponent);
      break;
    case NodeKind::Sin: out += "sin("; print_node(n->a.get(), 1, out); out += ')'; break;
    case NodeKind::Cos: out += "cos("; print_node(n->a.get(), 1, out); out += ')'; break;
    case NodeKind::Exp: out += "exp("; print_node(n->a.get(), 1, out); out += ')'; break;
    case NodeKind::Log: out += "log("; print_node(n->a.get(), 1, out); out += ')'; break;
    case NodeKind::Atan: out += "atan("; print_node(n->a.get(), 1, out); out += ')'; break;
  }
  if (parens) out += ')';
}

std::string node_str(const Expression::Node* n) {
  std::string out;
  print_node(n, 0, out);
  return out;
}

double eval_node(const Expression::Node* n, const Binding& b) {
  switch (n->kind) {
    case NodeKind::Const:
      return n->value;
    case NodeKind::Var:
      if (!b.has(n->var)) throw EvalError("unbound variable", var_names()[n->var]);
      return b.get(n->var);
    case NodeKind::Add: return eval_node(n->a.get(), b) + eval_node(n->b.get(), b);
    case NodeKind::Sub: return eval_node(n->a.get(), b) - eval_node(n->b.get(), b);
    case NodeKind::Mul: return eval_node(n->a.get(), b) * eval_node(n->b.get(), b);
    case NodeKind::Div: {
      const double den = eval_node(n->b.get(), b);
      if (den == 0.0) throw EvalError("division by zero", node_str(n));
      return eval_node(n->a.get(), b) / den;
    }
    case NodeKind::Pow: {
      const double base = eval_node(n->a.get(), b);
      if (base == 0.0 && n->exponent < 0)
        throw EvalError("zero raised to a negative power", node_str(n));
      return pow_int(base, n->exponent);
    }
    case NodeKind::Sin: return std::sin(eval_node(n->a.get(), b));
    case NodeKind::Cos: return std::cos(eval_node(n->a.get(), b));
    case NodeKind::Exp: return std::exp(eval_node(n->a.get(), b));
    case NodeKind::Log: {
      const double arg = eval_node(n->a.get(), b);
      if (arg <= 0.0) throw EvalError("log of a non-positive value", node_str(n));
      return std::log(arg);
    }
    case NodeKind::Atan: return std::atan(eval_node(n->a.get(), b));
  }
  throw std::logic_error("unreachable expression kind");
}

NodePtr derivative_node(const NodePtr& n, int slot);

NodePtr d(const NodePtr& n, int slot) { return derivative_node(n, slot); }

NodePtr derivative_node(const NodePtr& n, int slot) {
  switch (n->kind) {
    case NodeKind::Const:
      return make_const(0.0);
    case NodeKind::Var:
      return make_const(n->var == slot ? 1.0 : 0.0);
    case NodeKind::Add:
      return make_binary(NodeKind::Add, d(n->a, slot), d(n->b, slot));
    case NodeKind::Sub:
      return make_binary(NodeKind::Sub, d(n->a, slot), d(n->b, slot));
    case NodeKind::Mul:
      return make_binary(NodeKind::Add,
                         make_binary(NodeKind::Mul, d(n->a, slot), n->b),
                         make_binary(NodeKind::Mul, n->a, d(n->b, slot)));
    case NodeKind::Div:
      return make_binary(
          NodeKind::Div,
          make_binary(NodeKind::Sub,
                      make_binary(NodeKind::Mul, d(n->a, slot), n->b),
                      make_binary(NodeKind::Mul, n->a, d(n->b, slot))),
          make_pow(n->b, 2));
    case NodeKind::Pow:
      return make_binary(
          NodeKind::Mul, make_const(static_cast<double>(n->exponent)),
          make_binary(NodeKind::Mul, make_pow(n->a, n->exponent - 1), d(n->a, slot)));
    case NodeKind::Sin:
      return make_binary(NodeKind::Mul, make_unary(NodeKind::Cos, n->a), d(n->a, slot));
    case NodeKind::Cos:
      return make_binary(NodeKind::Mul,
                         make_binary(NodeKind::Mul, make_const(-1.0),
                                     make_unary(NodeKind::Sin, n->a)),
                         d(n->a, slot));
    case NodeKind::Exp:
      return make_binary(NodeKind::Mul, make_unary(NodeKind::Exp, n->a), d(n->a, slot));
    case NodeKind::Log:
      return make_binary(NodeKind::Div, d(n->a, slot), n->a);
    case NodeKind::Atan:
      return make_binary(NodeKind::Div, d(n->a, slot),
                         make_binary(NodeKind::Add, make_const(1.0), make_pow(n->a, 2)));
  }
  throw std::logic_error("unreachable expression kind");
}

NodePtr substitute_node(const NodePtr& n, int slot, const NodePtr& repl) {
  switch (n->kind) {
    case NodeKind::Const:
      return n;
    case NodeKind::Var:
      return n->var == slot ? repl : n;
    case NodeKind::Pow:
      return make_pow(substitute_node(n->a, slot, repl), n->exponent);
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Atan:
      return make_unary(n->kind, substitute_node(n->a, slot, repl));
    default:
      return make_binary(n->kind, substitute_node(n->a, slot, repl),
                         substitute_node(n->b, slot, repl));
  }
}

bool equals_node(const Expression::Node* a, const Expression::Node* b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Const: return a->value == b->value;
    case NodeKind::Var: return a->var == b->var;
    case NodeKind::Pow:
      return a->exponent == b->exponent && equals_node(a->a.get(), b->a.get());
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Atan:
      return equals_node(a->a.get(), b->a.get());
    default:
      return equals_node(a->a.get(), b->a.get()) && equals_node(a->b.get(), b->b.get());
  }
}

bool depends_node(const Expression::Node* n, int slot) {
  switch (n->kind) {
    case NodeKind::Const: return false;
    case NodeKind::Var: return n->var == slot;
    default:
      if (n->a && depends_node(n->a.get(), slot)) return true;
      return n->b && depends_node(n->b.get(), slot);
  }
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (consume('+')) e = make_binary(NodeKind::Add, e, term());
      else if (consume('-')) e = make_binary(NodeKind::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    for (;;) {
      if (consume('*')) e = make_binary(NodeKind::Mul, e, factor());
      else if (consume('/')) e = make_binary(NodeKind::Div, e, factor());
      else return e;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (consume('^')) return make_pow(b, integer());
    return b;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() &&
          (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        return make_const(-number());
      }
      return make_binary(NodeKind::Mul, make_const(-1.0), base());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_const(number());
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // not an exponent after all
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
      fail("malformed number");
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc()) fail("malformed number");
    return value;
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    int value = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || pos_ == start)
      fail("expected integer exponent");
    return value;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (auto slot = var_slot(name)) return make_var(*slot);
    NodeKind fn;
    if (name == "sin") fn = NodeKind::Sin;
    else if (name == "cos") fn = NodeKind::Cos;
    else if (name == "exp") fn = NodeKind::Exp;
    else if (name == "log") fn = NodeKind::Log;
    else if (name == "atan") fn = NodeKind::Atan;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!consume('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!consume(')')) fail("expected ')'");
    return make_unary(fn, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

const std::string& var_name(int slot) { return var_names().at(slot); }

std::optional<int> var_slot(std::string_view name) {
  if (name == "x") return kVarX;
  if (name == "t") return kVarT;
  if (name.size() == 2 && name[0] == 'p' && name[1] >= '1' && name[1] <= '9')
    return name[1] - '0';
  return std::nullopt;
}

Binding& Binding::set(int slot, double value) {
  if (slot < 0 || slot >= kNumVarSlots)
    throw std::invalid_argument("unknown variable slot " + std::to_string(slot));
  values_[slot] = value;
  bound_ |= (1u << slot);
  return *this;
}

Binding& Binding::set(std::string_view name, double value) {
  auto slot = var_slot(name);
  if (!slot) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  return set(*slot, value);
}

Expression::Expression() : node_(make_const(0.0)) {}

Expression Expression::constant(double c) { return Expression(make_const(c)); }
Expression Expression::variable(int slot) { return Expression(make_var(slot)); }
Expression Expression::variable(std::string_view name) {
  auto slot = var_slot(name);
  if (!slot) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  return Expression(make_var(*slot));
}

NodeKind Expression::kind() const { return node_->kind; }
double Expression::const_value() const { return node_->value; }
int Expression::var() const { return node_->var; }
int Expression::exponent() const { return node_->exponent; }

Expression Expression::child(int i) const {
  return Expression(i == 0 ? node_->a : node_->b);
}

int Expression::child_count() const {
  if (!node_->a) return 0;
  return node_->b ? 2 : 1;
}

bool Expression::equals(const Expression& other) const {
  return equals_node(node_.get(), other.node_.get());
}

std::string Expression::str() const { return node_str(node_.get()); }

double Expression::eval(const Binding& b) const { return eval_node(node_.get(), b); }

Expression Expression::derivative(int slot) const {
  if (slot < 0 || slot >= kNumVarSlots)
    throw std::invalid_argument("unknown variable slot " + std::to_string(slot));
  return Expression(derivative_node(node_, slot));
}

Expression Expression::substitute(int slot, const Expression& replacement) const {
  return Expression(substitute_node(node_, slot, replacement.node_ptr()));
}

bool Expression::depends_on(int slot) const { return depends_node(node_.get(), slot); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(make_binary(NodeKind::Add, a.node_ptr(), b.node_ptr()));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(make_binary(NodeKind::Sub, a.node_ptr(), b.node_ptr()));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(make_binary(NodeKind::Mul, a.node_ptr(), b.node_ptr()));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(make_binary(NodeKind::Div, a.node_ptr(), b.node_ptr()));
}
Expression operator-(const Expression& a) { return Expression::constant(-1.0) * a; }

Expression operator+(double a, const Expression& b) { return Expression::constant(a) + b; }
Expression operator+(const Expression& a, double b) { return a + Expression::constant(b); }
Expression operator-(double a, const Expression& b) { return Expression::constant(a) - b; }
Expression operator-(const Expression& a, double b) { return a - Expression::constant(b); }
Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }
Expression operator*(const Expression& a, double b) { return a * Expression::constant(b); }
Expression operator/(double a, const Expression& b) { return Expression::constant(a) / b; }
Expression operator/(const Expression& a, double b) { return a / Expression::constant(b); }

Expression pow(const Expression& base, int exponent) {
  return Expression(make_pow(base.node_ptr(), exponent));
}
Expression sin(const Expression& a) { return Expression(make_unary(NodeKind::Sin, a.node_ptr())); }
Expression cos(const Expression& a) { return Expression(make_unary(NodeKind::Cos, a.node_ptr())); }
Expression exp(const Expression& a) { return Expression(make_unary(NodeKind::Exp, a.node_ptr())); }
Expression log(const Expression& a) { return Expression(make_unary(NodeKind::Log, a.node_ptr())); }
Expression atan(const Expression& a) { return Expression(make_unary(NodeKind::Atan, a.node_ptr())); }

Expression parse_expression(std::string_view text) { return Expression(Parser(text).run()); }

}  // namespace bvir
