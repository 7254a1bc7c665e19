#pragma once

// Symbolic expression DSL over the variables x, p1..p9, t: parsing,
// printing, exact differentiation, substitution and evaluation. All
// expressions are immutable values sharing structure; every operation is
// pure and safe to call concurrently.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bvir {

// Variable slots. x and t are scalar coordinates, p1..p9 are break angles.
inline constexpr int kVarX = 0;
inline constexpr int kVarT = 10;
inline constexpr int kNumVarSlots = 11;

// Slot for p_i (1-based, i in 1..9).
constexpr int var_p(int i) { return i; }

const std::string& var_name(int slot);
std::optional<int> var_slot(std::string_view name);

class Binding {
 public:
  Binding() = default;
  Binding& set(int slot, double value);
  Binding& set(std::string_view name, double value);
  bool has(int slot) const { return (bound_ >> slot) & 1u; }
  double get(int slot) const { return values_[slot]; }

 private:
  std::array<double, kNumVarSlots> values_{};
  std::uint32_t bound_ = 0;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

struct EvalError : std::runtime_error {
  EvalError(const std::string& msg, std::string term)
      : std::runtime_error(msg + " in subterm `" + term + "`"),
        subterm(std::move(term)) {}
  std::string subterm;
};

enum class NodeKind : std::uint8_t {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent
  Sin,
  Cos,
  Exp,
  Log,
  Atan,
};

class Expression {
 public:
  Expression();  // the constant 0

  static Expression constant(double c);
  static Expression variable(int slot);
  static Expression variable(std::string_view name);

  NodeKind kind() const;
  double const_value() const;  // Const only
  int var() const;             // Var only
  int exponent() const;        // Pow only
  Expression child(int i) const;
  int child_count() const;

  bool equals(const Expression& other) const;
  std::string str() const;

  double eval(const Binding& b) const;
  Expression derivative(int slot) const;
  Expression substitute(int slot, const Expression& replacement) const;
  bool depends_on(int slot) const;

  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node* node() const { return node_.get(); }
  std::shared_ptr<const Node> node_ptr() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator+(double a, const Expression& b);
Expression operator+(const Expression& a, double b);
Expression operator-(double a, const Expression& b);
Expression operator-(const Expression& a, double b);
Expression operator*(double a, const Expression& b);
Expression operator*(const Expression& a, double b);
Expression operator/(double a, const Expression& b);
Expression operator/(const Expression& a, double b);

Expression pow(const Expression& base, int exponent);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression exp(const Expression& a);
Expression log(const Expression& a);
Expression atan(const Expression& a);

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' int)?
//   base   := ['-'] (number | ident | ident '(' expr ')' | '(' expr ')')
// Identifiers: x, t, p1..p9, sin, cos, exp, log, atan. A leading '-' on a
// numeric literal folds into the constant; on anything else it parses as
// multiplication by -1.
Expression parse_expression(std::string_view text);

}  // namespace bvir
