#include "myller/scalar_func.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace myller {

namespace {

struct Spline {
  std::vector<double> s, y, y2;  // knots, values, second derivatives

  // natural cubic spline second derivatives via the standard tridiagonal sweep
  void build() {
    std::size_t n = s.size();
    y2.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double sig = (s[i] - s[i - 1]) / (s[i + 1] - s[i - 1]);
      double p = sig * y2[i - 1] + 2.0;
      y2[i] = (sig - 1.0) / p;
      u[i] = (y[i + 1] - y[i]) / (s[i + 1] - s[i]) -
             (y[i] - y[i - 1]) / (s[i] - s[i - 1]);
      u[i] = (6.0 * u[i] / (s[i + 1] - s[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) y2[k] = y2[k] * y2[k + 1] + u[k];
    y2[0] = y2[n - 1] = 0.0;
  }

  double eval(double x) const {
    if (x < s.front() || x > s.back())
      throw EvalError("sample evaluation outside knot range");
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - s.begin()), s.size() - 1);
    std::size_t lo = hi - 1;
    double h = s[hi] - s[lo];
    double a = (s[hi] - x) / h, b = (x - s[lo]) / h;
    return a * y[lo] + b * y[hi] +
           ((a * a * a - a) * y2[lo] + (b * b * b - b) * y2[hi]) * h * h / 6.0;
  }

  double eval_derivative(double x) const {
    if (x < s.front() || x > s.back())
      throw EvalError("sample evaluation outside knot range");
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - s.begin()), s.size() - 1);
    std::size_t lo = hi - 1;
    double h = s[hi] - s[lo];
    double a = (s[hi] - x) / h, b = (x - s[lo]) / h;
    return (y[hi] - y[lo]) / h +
           ((3.0 * b * b - 1.0) * y2[hi] - (3.0 * a * a - 1.0) * y2[lo]) * h / 6.0;
  }

  bool uniform() const {
    double h = s[1] - s[0];
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
      if (std::fabs((s[i + 1] - s[i]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
        return false;
    return true;
  }
};

}  // namespace

struct ScalarFunc::Impl {
  // exactly one of the two is active
  ExprAst ast;
  Spline spline;
  bool sampled = false;
};

ScalarFunc ScalarFunc::expression(ExprAst ast) {
  if (!ast.valid()) throw EvalError("empty expression");
  auto impl = std::make_shared<Impl>();
  impl->ast = std::move(ast);
  ScalarFunc f;
  f.impl_ = std::move(impl);
  return f;
}

ScalarFunc ScalarFunc::expression(const std::string& text) {
  return expression(parse_expr(text));
}

ScalarFunc ScalarFunc::constant(double v) { return expression(ExprAst::constant(v)); }

ScalarFunc ScalarFunc::samples(std::vector<double> s, std::vector<double> v) {
  if (s.size() != v.size()) throw EvalError("sample grid/value length mismatch");
  if (s.size() < 4) throw EvalError("sample grid needs at least 4 points");
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!(s[i] < s[i + 1])) throw EvalError("sample grid must be strictly increasing");
  auto impl = std::make_shared<Impl>();
  impl->sampled = true;
  impl->spline.s = std::move(s);
  impl->spline.y = std::move(v);
  impl->spline.build();
  ScalarFunc f;
  f.impl_ = std::move(impl);
  return f;
}

bool ScalarFunc::is_samples() const { return impl_ && impl_->sampled; }
bool ScalarFunc::is_expression() const { return impl_ && !impl_->sampled; }

const ExprAst* ScalarFunc::expression_ast() const {
  return is_expression() ? &impl_->ast : nullptr;
}

double ScalarFunc::operator()(double s) const {
  if (!impl_) throw EvalError("uninitialized function");
  return impl_->sampled ? impl_->spline.eval(s) : impl_->ast.eval(s);
}

double ScalarFunc::domain_min() const {
  if (is_samples()) return impl_->spline.s.front();
  return -std::numeric_limits<double>::infinity();
}

double ScalarFunc::domain_max() const {
  if (is_samples()) return impl_->spline.s.back();
  return std::numeric_limits<double>::infinity();
}

const std::vector<double>& ScalarFunc::knots() const {
  static const std::vector<double> empty;
  return is_samples() ? impl_->spline.s : empty;
}

ScalarFunc ScalarFunc::derivative() const {
  if (!impl_) throw EvalError("uninitialized function");
  if (!impl_->sampled) return expression(impl_->ast.derivative());

  const Spline& sp = impl_->spline;
  std::size_t n = sp.s.size();
  std::vector<double> d(n);
  if (sp.uniform()) {
    double h = sp.s[1] - sp.s[0];
    const std::vector<double>& y = sp.y;
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    d[1] = (y[2] - y[0]) / (2.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
    d[n - 2] = (y[n - 1] - y[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  } else {
    for (std::size_t i = 0; i < n; ++i) d[i] = sp.eval_derivative(sp.s[i]);
  }
  return samples(sp.s, std::move(d));
}

}  // namespace myller
