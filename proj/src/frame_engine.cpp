#include "myller/frame_engine.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace myller {

namespace {

// Both moving systems share the skew form
//   e1' = p e2 + q e3,  e2' = -p e1 + t e3,  e3' = -q e1 - t e2,
//   r'  = u1 e1 + u2 e2 + u3 e3.
// Darboux: (p,q,t) = (G,K,T), u = c.  Frenet-type: (p,q,t) = (K1,0,K2), u = a.
struct Coefficients {
  const ScalarFunc *p, *q, *t, *u1, *u2, *u3;
};

struct State {
  Vec3 r, e1, e2, e3;
};

State derivative(const Coefficients& c, const State& x, double s) {
  double p = c.p ? (*c.p)(s) : 0.0;
  double q = c.q ? (*c.q)(s) : 0.0;
  double t = c.t ? (*c.t)(s) : 0.0;
  double u1 = (*c.u1)(s), u2 = (*c.u2)(s), u3 = (*c.u3)(s);
  State d;
  d.e1 = p * x.e2 + q * x.e3;
  d.e2 = -p * x.e1 + t * x.e3;
  d.e3 = -q * x.e1 - t * x.e2;
  d.r = u1 * x.e1 + u2 * x.e2 + u3 * x.e3;
  return d;
}

State axpy(const State& x, double h, const State& d) {
  return {x.r + h * d.r, x.e1 + h * d.e1, x.e2 + h * d.e2, x.e3 + h * d.e3};
}

State rk4_step(const Coefficients& c, const State& x, double s, double h) {
  State k1 = derivative(c, x, s);
  State k2 = derivative(c, axpy(x, h / 2.0, k1), s + h / 2.0);
  State k3 = derivative(c, axpy(x, h / 2.0, k2), s + h / 2.0);
  State k4 = derivative(c, axpy(x, h, k3), s + h);
  State out = x;
  out.r += (h / 6.0) * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
  out.e1 += (h / 6.0) * (k1.e1 + 2.0 * k2.e1 + 2.0 * k3.e1 + k4.e1);
  out.e2 += (h / 6.0) * (k1.e2 + 2.0 * k2.e2 + 2.0 * k3.e2 + k4.e2);
  out.e3 += (h / 6.0) * (k1.e3 + 2.0 * k2.e3 + 2.0 * k3.e3 + k4.e3);
  return out;
}

void gram_schmidt(State& x) {
  x.e1.normalize();
  x.e2 -= x.e1.dot(x.e2) * x.e1;
  x.e2.normalize();
  x.e3 -= x.e1.dot(x.e3) * x.e1;
  x.e3 -= x.e2.dot(x.e3) * x.e2;
  x.e3.normalize();
}

FrameTrajectory integrate(const Coefficients& c, const FramePose& initial,
                          const std::vector<double>& grid,
                          const IntegratorConfig& cfg, FrameKind kind) {
  if (grid.empty()) throw std::invalid_argument("empty integration grid");
  if (!(cfg.step > 0.0)) throw std::invalid_argument("integrator step must be positive");
  if (cfg.reorthonormalize_every < 1)
    throw std::invalid_argument("reorthonormalize_every must be >= 1");
  if (!initial.orthonormal(1e-8))
    throw std::invalid_argument("initial pose is not orthonormal");

  FrameTrajectory traj;
  traj.kind = kind;
  traj.grid = grid;
  traj.poses.reserve(grid.size());

  State x{initial.r, initial.e1, initial.e2, initial.e3};
  traj.poses.push_back(initial);
  long step_count = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double span = grid[i + 1] - grid[i];
    if (!(span > 0.0)) throw std::invalid_argument("grid must be strictly increasing");
    long nsub = std::max(1L, std::lround(std::ceil(span / cfg.step - 1e-12)));
    double h = span / static_cast<double>(nsub);
    double s = grid[i];
    for (long k = 0; k < nsub; ++k) {
      x = rk4_step(c, x, s, h);
      s += h;
      if (++step_count % cfg.reorthonormalize_every == 0) gram_schmidt(x);
    }
    traj.poses.push_back({x.r, x.e1, x.e2, x.e3});
  }
  return traj;
}

}  // namespace

FrameTrajectory integrate_darboux(const DarbouxInvariants& inv,
                                  const FramePose& initial,
                                  const std::vector<double>& grid,
                                  const IntegratorConfig& cfg) {
  Coefficients c{&inv.G, &inv.K, &inv.T, &inv.c1, &inv.c2, &inv.c3};
  return integrate(c, initial, grid, cfg, FrameKind::Darboux);
}

FrameTrajectory integrate_frenet(const FrenetInvariants& inv,
                                 const FramePose& initial,
                                 const std::vector<double>& grid,
                                 const IntegratorConfig& cfg) {
  Coefficients c{&inv.K1, nullptr, &inv.K2, &inv.a1, &inv.a2, &inv.a3};
  return integrate(c, initial, grid, cfg, FrameKind::Frenet);
}

namespace {

using B = BinaryOp;
using U = UnaryOp;

ExprAst ast_of(const ScalarFunc& f) { return *f.expression_ast(); }

bool all_expr(std::initializer_list<const ScalarFunc*> fs) {
  for (const ScalarFunc* f : fs)
    if (!f->is_expression()) return false;
  return true;
}

ScalarFunc sample_combination(const std::vector<double>& grid,
                              const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return ScalarFunc::samples(grid, std::move(v));
}

}  // namespace

DarbouxInvariants darboux_from_frenet(const FrenetInvariants& inv,
                                      const ScalarFunc& psi) {
  ScalarFunc psi_d = psi.derivative();
  DarbouxInvariants out;
  if (all_expr({&inv.K1, &inv.K2, &inv.a1, &inv.a2, &inv.a3, &psi})) {
    ExprAst sp = ExprAst::unary(U::Sin, ast_of(psi));
    ExprAst cp = ExprAst::unary(U::Cos, ast_of(psi));
    out.G = ScalarFunc::expression(ExprAst::binary(B::Mul, sp, ast_of(inv.K1)));
    out.K = ScalarFunc::expression(ExprAst::binary(B::Mul, cp, ast_of(inv.K1)));
    out.T = ScalarFunc::expression(
        ExprAst::binary(B::Add, ast_of(inv.K2), ast_of(psi_d)));
    out.c1 = inv.a1;
    out.c2 = ScalarFunc::expression(
        ExprAst::binary(B::Sub, ExprAst::binary(B::Mul, sp, ast_of(inv.a2)),
                        ExprAst::binary(B::Mul, cp, ast_of(inv.a3))));
    out.c3 = ScalarFunc::expression(
        ExprAst::binary(B::Add, ExprAst::binary(B::Mul, cp, ast_of(inv.a2)),
                        ExprAst::binary(B::Mul, sp, ast_of(inv.a3))));
    return out;
  }

  // mixed expression/sample inputs: evaluate on the first sampled knot grid
  const std::vector<double>* grid = nullptr;
  for (const ScalarFunc* f : {&inv.K1, &inv.K2, &inv.a1, &inv.a2, &inv.a3, &psi})
    if (f->is_samples()) {
      grid = &f->knots();
      break;
    }
  const std::vector<double>& g = *grid;
  auto K1 = inv.K1, K2 = inv.K2, a2 = inv.a2, a3 = inv.a3;
  out.G = sample_combination(g, [=](double s) { return std::sin(psi(s)) * K1(s); });
  out.K = sample_combination(g, [=](double s) { return std::cos(psi(s)) * K1(s); });
  out.T = sample_combination(g, [=](double s) { return K2(s) + psi_d(s); });
  out.c1 = inv.a1;
  out.c2 = sample_combination(
      g, [=](double s) { return std::sin(psi(s)) * a2(s) - std::cos(psi(s)) * a3(s); });
  out.c3 = sample_combination(
      g, [=](double s) { return std::cos(psi(s)) * a2(s) + std::sin(psi(s)) * a3(s); });
  return out;
}

FrameTrajectory frames_from_frenet_frames(const FrameTrajectory& traj_F,
                                          const ScalarFunc& psi) {
  if (traj_F.kind != FrameKind::Frenet)
    throw std::invalid_argument("frames_from_frenet_frames expects a Frenet-kind trajectory");
  FrameTrajectory out;
  out.kind = FrameKind::Darboux;
  out.grid = traj_F.grid;
  out.poses.resize(traj_F.poses.size());
  for (std::size_t i = 0; i < traj_F.poses.size(); ++i) {
    const FramePose& p = traj_F.poses[i];
    double sp = std::sin(psi(traj_F.grid[i]));
    double cp = std::cos(psi(traj_F.grid[i]));
    FramePose& q = out.poses[i];
    q.r = p.r;
    q.e1 = p.e1;                       // xi = xi1
    q.e2 = sp * p.e2 - cp * p.e3;      // mu
    q.e3 = cp * p.e2 + sp * p.e3;      // v
  }
  return out;
}

RigidMotion align_trajectories(const FrameTrajectory& a, const FrameTrajectory& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw std::invalid_argument("align_trajectories requires equal nonempty grids");

  std::size_t n = a.size();
  Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    ca += a.poses[i].r;
    cb += b.poses[i].r;
  }
  ca /= static_cast<double>(n);
  cb /= static_cast<double>(n);

  double spread = 0.0;
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 pa = a.poses[i].r - ca, pb = b.poses[i].r - cb;
    spread = std::max(spread, std::max(pa.norm(), pb.norm()));
    h += pb * pa.transpose();
  }

  RigidMotion m;
  if (spread < 1e-12) {
    m.degenerate = true;
    m.translation = ca - cb;
    return m;
  }

  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU(), v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  m.rotation = v * d * u.transpose();
  m.translation = ca - m.rotation * cb;

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    ss += (a.poses[i].r - (m.rotation * b.poses[i].r + m.translation)).squaredNorm();
  m.rms = std::sqrt(ss / static_cast<double>(n));
  return m;
}

}  // namespace myller
