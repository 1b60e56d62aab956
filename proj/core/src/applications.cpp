#include "egmgeom/applications.hpp"

#include <cmath>
#include <limits>

namespace egmgeom {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// min-norm-point problem: rows of A are -x_i, b = 0, eta = 1.
class PolytopeDistProblem final : public SaddleProblem {
 public:
  explicit PolytopeDistProblem(const PointSet& ps) : ps_(ps), b_(ps.size(), 0.0) {
    double max_sq = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      max_sq = std::max(max_sq, dot(ps.point(i), ps.point(i)));
    }
    const double certified = 0.55 * power_iteration_sq_norm(*this, 50);
    lipschitz_ = std::max(0.5 * max_sq, certified);
    if (lipschitz_ == 0.0) lipschitz_ = 1.0;  // all points at the origin
    verify_adjoint(*this);
  }

  std::size_t dual_dim() const override { return ps_.size(); }
  std::size_t primal_dim() const override { return ps_.dim(); }
  double eta() const override { return 1.0; }
  double lipschitz() const override { return lipschitz_; }
  const std::vector<double>& linear_term() const override { return b_; }

  void apply_A(std::span<const double> c, std::span<double> out) const override {
    for (std::size_t i = 0; i < ps_.size(); ++i) out[i] = -dot(ps_.point(i), c);
  }
  void apply_At(std::span<const double> u, std::span<double> out) const override {
    const std::size_t d = ps_.dim();
    for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
    const double* x = ps_.coords().data();
    for (std::size_t i = 0; i < ps_.size(); ++i, x += d) {
      const double w = -u[i];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) out[j] += w * x[j];
    }
  }

 private:
  const PointSet& ps_;
  std::vector<double> b_;
  double lipschitz_ = 0.0;
};

// max-margin problem: rows of A are -y_i z_i, b = 0, eta = eps/2, Q1 the
// unit ball.
class MarginProblem final : public SaddleProblem {
 public:
  MarginProblem(const LabeledDataset& ds, double eps)
      : ds_(ds), b_(ds.size(), 0.0), eta_(0.5 * eps) {
    double max_sq = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto z = ds.points().point(i);
      max_sq = std::max(max_sq, dot(z, z));
    }
    w_bound_ = std::sqrt(max_sq);
    const double paper = max_sq / eps;  // Q = 1
    const double certified =
        1.10 * power_iteration_sq_norm(*this, 50) / (2.0 * eta_);
    lipschitz_ = std::max(paper, certified);
    if (lipschitz_ == 0.0) lipschitz_ = 1.0;
    verify_adjoint(*this);
  }

  std::size_t dual_dim() const override { return ds_.size(); }
  std::size_t primal_dim() const override { return ds_.points().dim(); }
  double eta() const override { return eta_; }
  double lipschitz() const override { return lipschitz_; }
  const std::vector<double>& linear_term() const override { return b_; }
  double q1_radius() const override { return 1.0; }
  double w_bound() const { return w_bound_; }

  void apply_A(std::span<const double> c, std::span<double> out) const override {
    for (std::size_t i = 0; i < ds_.size(); ++i) {
      out[i] = -static_cast<double>(ds_.labels()[i]) * dot(ds_.points().point(i), c);
    }
  }
  void apply_At(std::span<const double> u, std::span<double> out) const override {
    const std::size_t d = ds_.points().dim();
    for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
    const double* z = ds_.points().coords().data();
    for (std::size_t i = 0; i < ds_.size(); ++i, z += d) {
      const double w = -static_cast<double>(ds_.labels()[i]) * u[i];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) out[j] += w * z[j];
    }
  }

 private:
  const LabeledDataset& ds_;
  std::vector<double> b_;
  double eta_ = 0.0;
  double w_bound_ = 0.0;
  double lipschitz_ = 0.0;
};

}  // namespace

PolytopeDistanceResult polytope_distance(const PointSet& ps, double eps,
                                         long max_iters,
                                         const AppSolveOptions& opts) {
  if (!(eps > 0.0)) throw InvalidInputError("eps must be positive");
  PolytopeDistProblem prob(ps);
  const double target = 0.25 * eps;
  const long cap = static_cast<long>(
      std::ceil(std::sqrt(3.0 * prob.lipschitz() / target)));
  StoppingRule rule{target, cap, max_iters};
  RunOptions ropts{opts.checks, opts.trace_every};
  const RunResult r = run(prob, rule, ropts);

  PolytopeDistanceResult out;
  out.witness = r.state.u;
  out.nearest_point.assign(ps.dim(), 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto x = ps.point(i);
    for (std::size_t j = 0; j < ps.dim(); ++j) {
      out.nearest_point[j] += out.witness[i] * x[j];
    }
  }
  out.distance = std::sqrt(dot(out.nearest_point, out.nearest_point));
  out.iterations = r.iterations;
  out.gap = r.state.gap;
  out.converged = r.converged;
  out.reason = r.reason;
  out.trace = r.trace;
  return out;
}

PolytopeDistanceResult polytope_pair_distance(const PointSet& plus,
                                              const PointSet& minus, double eps,
                                              long max_iters,
                                              const AppSolveOptions& opts) {
  if (plus.dim() != minus.dim()) throw InvalidInputError("dimension mismatch");
  const std::size_t total = plus.size() * minus.size();
  if (total > 1000000) {
    throw InvalidInputError(
        "Minkowski difference too large: n * n' = " + std::to_string(total) +
        " exceeds 10^6");
  }
  const std::size_t d = plus.dim();
  std::vector<double> diff;
  diff.reserve(total * d);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const auto a = plus.point(i);
    for (std::size_t j = 0; j < minus.size(); ++j) {
      const auto b = minus.point(j);
      for (std::size_t t = 0; t < d; ++t) diff.push_back(a[t] - b[t]);
    }
  }
  const PointSet mink(std::move(diff), d);
  return polytope_distance(mink, eps, max_iters, opts);
}

MarginResult max_margin(const LabeledDataset& ds, double eps, long max_iters,
                        const AppSolveOptions& opts) {
  if (!(eps > 0.0)) throw InvalidInputError("eps must be positive");
  MarginProblem prob(ds, eps);
  const long cap = static_cast<long>(
      std::ceil(std::sqrt(6.0) * prob.w_bound() / eps));
  StoppingRule rule{0.5 * eps, cap, max_iters};
  RunOptions ropts{opts.checks, opts.trace_every};
  const RunResult r = run(prob, rule, ropts);

  MarginResult out;
  out.iterations = r.iterations;
  out.iteration_cap = cap;
  out.gap = r.state.gap;
  out.converged = r.converged;
  out.reason = r.reason;
  out.trace = r.trace;

  const std::size_t d = ds.points().dim();
  out.direction = r.state.c;
  const double nn = std::sqrt(dot(out.direction, out.direction));
  if (nn > 1e-300) {
    for (double& x : out.direction) x /= nn;
  } else {
    // Fully balanced data leaves the iterate at the origin; report an
    // arbitrary unit direction with its honest margin.
    out.direction.assign(d, 0.0);
    out.direction[0] = 1.0;
  }

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    margin = std::min(margin, static_cast<double>(ds.labels()[i]) *
                                  dot(ds.points().point(i), out.direction));
  }
  out.margin = margin;
  out.separable = margin > 0.0;
  return out;
}

}  // namespace egmgeom
