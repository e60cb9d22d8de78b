#ifndef MYLLER_SCALAR_FUNC_HPP
#define MYLLER_SCALAR_FUNC_HPP

#include <memory>
#include <string>
#include <vector>

#include "myller/expr.hpp"

namespace myller {

/// A smooth real function of arclength s: either an expression tree
/// (symbolic derivative) or interpolated samples (finite-difference
/// derivative). Immutable after construction; safe to evaluate
/// concurrently.
class ScalarFunc {
 public:
  ScalarFunc() = default;

  static ScalarFunc expression(ExprAst ast);
  static ScalarFunc expression(const std::string& text);
  static ScalarFunc constant(double v);
  /// Natural cubic spline through (s[i], v[i]); s strictly increasing, >= 4 knots.
  static ScalarFunc samples(std::vector<double> s, std::vector<double> v);

  bool valid() const { return impl_ != nullptr; }
  bool is_samples() const;
  bool is_expression() const;
  const ExprAst* expression_ast() const;  // nullptr for samples

  double operator()(double s) const;
  ScalarFunc derivative() const;

  /// Knot range for samples; expressions report an unbounded domain.
  double domain_min() const;
  double domain_max() const;

  const std::vector<double>& knots() const;  // empty for expressions

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace myller

#endif
