#include "egmgeom/mecp.hpp"

#include <cmath>
#include <limits>

namespace egmgeom {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

MecpProblem::MecpProblem(const PolytopeShape& shape, const PointSet& ps,
                         double eps, double q1)
    : shape_(shape), ps_(ps) {
  if (shape.dim() != ps.dim()) {
    throw InvalidInputError("shape and point dimensions disagree");
  }
  if (!(eps > 0.0)) throw InvalidInputError("eps must be positive");
  if (!(q1 > 0.0)) throw InvalidInputError("Q1 radius must be positive");
  const std::size_t m = shape.faces();
  const std::size_t n = ps.size();
  q1_ = q1;
  eta_ = eps / (2.0 * q1 * q1);

  b_.resize(m * n);
  face_max_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto w = shape.scaled_normal(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double v = dot(w, ps.point(j));
      b_[i * n + j] = v;
      mx = std::max(mx, v);
    }
    face_max_[i] = mx;
  }

  const double w_bound = shape.w_bound();
  const double paper = q1 * q1 * w_bound * w_bound / eps;
  const double certified =
      1.10 * power_iteration_sq_norm(*this, 50) / (2.0 * eta_);
  lipschitz_ = std::max(paper, certified);
  verify_adjoint(*this);
}

void MecpProblem::apply_A(std::span<const double> c, std::span<double> out) const {
  const std::size_t m = shape_.faces();
  const std::size_t n = ps_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double t = -dot(shape_.scaled_normal(i), c);
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = t;
  }
  ops_ += static_cast<long>(m * ps_.dim() + m * n);
}

void MecpProblem::apply_At(std::span<const double> u, std::span<double> out) const {
  const std::size_t m = shape_.faces();
  const std::size_t n = ps_.size();
  const std::size_t d = ps_.dim();
  for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += u[i * n + j];
    if (s == 0.0) continue;
    const auto w = shape_.scaled_normal(i);
    for (std::size_t j = 0; j < d; ++j) out[j] -= s * w[j];
  }
  ops_ += static_cast<long>(m * n + m * d);
}

double MecpProblem::magnification(std::span<const double> c) const {
  const std::size_t m = shape_.faces();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    best = std::max(best, face_max_[i] - dot(shape_.scaled_normal(i), c));
  }
  return best;
}

double mecp_primal(const PolytopeShape& shape, const PointSet& ps,
                   std::span<const double> c) {
  if (shape.dim() != ps.dim() || c.size() != ps.dim()) {
    throw InvalidInputError("dimension mismatch");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < shape.faces(); ++i) {
    const auto w = shape.scaled_normal(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ps.size(); ++j) {
      mx = std::max(mx, dot(w, ps.point(j)));
    }
    best = std::max(best, mx - dot(w, c));
  }
  return best;
}

MecpResult solve_mecp(const PolytopeShape& shape, const PointSet& ps, double eps,
                      double q1_radius, long max_iters,
                      const MecpSolveOptions& opts) {
  if (!(eps > 0.0)) throw InvalidInputError("eps must be positive");
  double q1 = q1_radius;
  if (q1 <= 0.0) {
    q1 = data_radius(ps);
    if (q1 == 0.0) q1 = 1.0;  // single point at the origin
  }
  MecpProblem prob(shape, ps, eps, q1);
  const long cap = static_cast<long>(
      std::ceil(std::sqrt(6.0) * q1 * shape.w_bound() / eps));
  StoppingRule rule{0.5 * eps, cap, max_iters};
  RunOptions ropts{opts.checks, opts.trace_every};
  const RunResult r = run(prob, rule, ropts);

  MecpResult out;
  out.fit.center = r.state.c;
  out.fit.magnification = prob.magnification(r.state.c);
  out.iterations = r.iterations;
  out.iteration_cap = cap;
  out.gap = r.state.gap;
  out.converged = r.converged;
  out.reason = r.reason;
  out.q1_clamped = r.q1_clamp_engaged;
  out.eps = eps;
  out.trace = r.trace;
  return out;
}

}  // namespace egmgeom
