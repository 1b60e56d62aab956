#include "egmgeom/meb.hpp"

#include <cassert>
#include <cmath>

namespace egmgeom {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

MebProblem::MebProblem(const PointSet& ps, LipschitzMode mode) : ps_(ps) {
  const std::size_t n = ps.size();
  b_.resize(n);
  double max_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = ps.point(i);
    b_[i] = dot(x, x);
    max_sq = std::max(max_sq, b_[i]);
  }
  q_ = std::sqrt(max_sq);

  const int iters = mode == LipschitzMode::kTight ? 200 : 50;
  const double margin = mode == LipschitzMode::kTight ? 1.02 : 1.10;
  const double certified = 0.5 * margin * power_iteration_sq_norm(*this, iters);
  lipschitz_ = std::max(2.0 * max_sq, certified);
  verify_adjoint(*this);
}

void MebProblem::apply_A(std::span<const double> c, std::span<double> out) const {
  for (std::size_t i = 0; i < ps_.size(); ++i) {
    out[i] = -2.0 * dot(ps_.point(i), c);
  }
}

void MebProblem::apply_At(std::span<const double> u, std::span<double> out) const {
  const std::size_t d = ps_.dim();
  for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
  const double* x = ps_.coords().data();
  for (std::size_t i = 0; i < ps_.size(); ++i, x += d) {
    const double w = -2.0 * u[i];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) out[j] += w * x[j];
  }
}

double meb_primal(const PointSet& ps, std::span<const double> c) {
  if (c.size() != ps.dim()) throw InvalidInputError("center dimension mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto x = ps.point(i);
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double t = c[j] - x[j];
      s += t * t;
    }
    best = std::max(best, s);
  }
  return best;
}

double meb_dual(const PointSet& ps, const SimplexVector& u) {
  if (u.size() != ps.size()) throw InvalidInputError("dual dimension mismatch");
  const std::size_t d = ps.dim();
  std::vector<double> atu(d, 0.0);
  double ub = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto x = ps.point(i);
    ub += u[i] * dot(x, x);
    for (std::size_t j = 0; j < d; ++j) atu[j] += -2.0 * u[i] * x[j];
  }
  return ub - 0.25 * dot(atu, atu);
}

std::vector<double> meb_dual_gradient(const PointSet& ps, const SimplexVector& u) {
  if (u.size() != ps.size()) throw InvalidInputError("dual dimension mismatch");
  const std::size_t d = ps.dim();
  std::vector<double> atu(d, 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto x = ps.point(i);
    for (std::size_t j = 0; j < d; ++j) atu[j] += -2.0 * u[i] * x[j];
  }
  std::vector<double> grad(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto x = ps.point(i);
    grad[i] = dot(x, x) + dot(x, atu);  // b_i - 1/2 (A A^T u)_i
  }
  return grad;
}

namespace {

MebResult finish(const PointSet& ps, const RunResult& run_res, std::string mode,
                 double eps, const MebProblem& prob, long cap) {
  MebResult out;
  const double r_sq = meb_primal(ps, run_res.state.c);
  out.ball = Ball::from_radius_sq(run_res.state.c, r_sq);
  out.iterations = run_res.iterations;
  out.iteration_cap = cap;
  out.gap = run_res.state.gap;
  out.converged = run_res.converged;
  out.reason = run_res.reason;
  out.mode = std::move(mode);
  out.eps = eps;
  out.lipschitz = prob.lipschitz();
  out.trace = run_res.trace;
  assert(meb_primal(ps, out.ball.center) <= out.ball.radius_sq + 1e-9);
  return out;
}

}  // namespace

MebResult solve_meb_additive(const PointSet& ps, double eps_add, long max_iters,
                             const MebSolveOptions& opts) {
  if (!(eps_add > 0.0)) throw InvalidInputError("eps must be positive");
  MebProblem prob(ps, opts.lipschitz);
  const double q = prob.data_radius_bound();
  const long cap =
      static_cast<long>(std::ceil(std::sqrt(6.0 * q * q / eps_add)));
  StoppingRule rule{eps_add, cap, max_iters};
  RunOptions ropts{opts.checks, opts.trace_every};
  const RunResult r = run(prob, rule, ropts);
  return finish(ps, r, "add", eps_add, prob, cap);
}

MebResult solve_meb_multiplicative(const PointSet& ps, double eps_mult,
                                   long max_iters, const MebSolveOptions& opts) {
  if (!(eps_mult > 0.0)) throw InvalidInputError("eps must be positive");
  if (ps.size() < 2) {
    throw InsufficientPointsError(
        "multiplicative mode needs n >= 2 for the pair lower bound");
  }
  MebProblem prob(ps, opts.lipschitz);
  const double q = prob.data_radius_bound();
  const double p_bound = pair_lower_bound(ps);
  if (p_bound == 0.0) {
    // All points coincide: the optimum is that point, radius zero.
    MebResult out;
    out.ball = Ball::from_radius_sq(
        std::vector<double>(ps.point(0).begin(), ps.point(0).end()), 0.0);
    out.iterations = 1;
    out.iteration_cap = 1;
    out.converged = true;
    out.mode = "mult";
    out.eps = eps_mult;
    out.lipschitz = prob.lipschitz();
    return out;
  }
  const double eps_add = eps_mult * p_bound * p_bound;
  const long cap =
      static_cast<long>(std::ceil(q / p_bound * std::sqrt(6.0 / eps_mult)));
  StoppingRule rule{eps_add, cap, max_iters};
  RunOptions ropts{opts.checks, opts.trace_every};
  const RunResult r = run(prob, rule, ropts);
  return finish(ps, r, "mult", eps_mult, prob, cap);
}

}  // namespace egmgeom
