#ifndef MYLLER_EXPR_HPP
#define MYLLER_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>

namespace myller {

/// Thrown by parse_expr on malformed input. `offset` is the byte position
/// of the first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Thrown when evaluation leaves the real domain (log of non-positive,
/// sqrt of negative, division by zero, fractional power of non-positive base).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class NodeKind { Constant, Var, Unary, Binary };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;      // Constant
  UnaryOp uop{};           // Unary
  BinaryOp bop{};          // Binary
  ExprPtr a, b;            // operands (a only for Unary)
};

/// Immutable expression tree in the single variable `s`.
class ExprAst {
 public:
  ExprAst() = default;
  explicit ExprAst(ExprPtr root) : root_(std::move(root)) {}

  bool valid() const { return root_ != nullptr; }
  double eval(double s) const;
  ExprAst derivative() const;
  std::string str() const;
  bool equals(const ExprAst& other) const;

  /// nullopt-style: true and sets out when the whole tree folds to a constant.
  bool as_constant(double& out) const;

  const ExprPtr& root() const { return root_; }

  // node builders (light constant folding only)
  static ExprAst constant(double v);
  static ExprAst var();
  static ExprAst unary(UnaryOp op, ExprAst a);
  static ExprAst binary(BinaryOp op, ExprAst a, ExprAst b);

 private:
  ExprPtr root_;
};

ExprAst parse_expr(const std::string& text);

}  // namespace myller

#endif
