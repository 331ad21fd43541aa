#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "antilinear/error.hpp"
#include "antilinear/grid.hpp"

// Coefficient expressions in the single real variable x.
//
//   expr    := literal | 'x' | 'i' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//            | '-' expr | expr ('+'|'-'|'*'|'/'|'^') expr
//   func    := sin cos tan sinh cosh tanh exp log sqrt abs re im conj
//
// '^' is right-associative and binds tightest; unary minus binds tighter than '*' '/'.
namespace antilinear::expr {

enum class Constant { imaginary_unit, pi, e };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, abs, re, im, conj };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {};
struct NamedConstant {
  Constant which;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs, rhs;
};
struct Call {
  Function fn;
  NodePtr arg;
};

struct Node {
  std::variant<Number, Variable, NamedConstant, Negate, Binary, Call> kind;
};

/// Raised by evaluate() when the result is not finite.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// Immutable parsed expression. Copies share the tree.
class Expression {
 public:
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const noexcept { return *root_; }

  cplx evaluate(double x) const;

  /// Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  NodePtr root_;
};

Expression parse(std::string_view text);
bool structurally_equal(const Node& a, const Node& b);

std::string_view function_name(Function fn);

/// Wraps an expression (and an optional derivative expression) as a coefficient.
CoefficientFunction to_coefficient(const Expression& value);
CoefficientFunction to_coefficient(const Expression& value, const Expression& derivative);

}  // namespace antilinear::expr
