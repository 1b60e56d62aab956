#pragma once

#include <string>

#include "egmgeom/egm.hpp"
#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// How the dual-gradient Lipschitz constant is obtained.
///
/// Both modes lower-bound the estimate by twice the squared data radius
/// and certify it against the restriction of A A^T to simplex differences
/// with power iteration: the excessive-gap updates need L to dominate the
/// dual curvature along the directions the iterates move, and the
/// data-radius bound alone does not once n outgrows d. kTight spends more
/// iterations on a thinner safety margin; a smaller certified L converges
/// faster.
enum class LipschitzMode { kCertified, kTight };

/// Minimum enclosing ball as a saddle problem: rows of A are -2 x_i,
/// b_i = ||x_i||^2, eta = 1. A is never materialized.
class MebProblem final : public SaddleProblem {
 public:
  explicit MebProblem(const PointSet& ps,
                      LipschitzMode mode = LipschitzMode::kCertified);

  std::size_t dual_dim() const override { return ps_.size(); }
  std::size_t primal_dim() const override { return ps_.dim(); }
  double eta() const override { return 1.0; }
  double lipschitz() const override { return lipschitz_; }
  const std::vector<double>& linear_term() const override { return b_; }

  void apply_A(std::span<const double> c, std::span<double> out) const override;
  void apply_At(std::span<const double> u, std::span<double> out) const override;

  const PointSet& points() const { return ps_; }
  double data_radius_bound() const { return q_; }

 private:
  const PointSet& ps_;
  std::vector<double> b_;
  double q_ = 0.0;
  double lipschitz_ = 0.0;
};

/// J(c) = max_i ||c - x_i||^2.
double meb_primal(const PointSet& ps, std::span<const double> c);

/// D(u) = <u, b> - 1/4 ||A^T u||^2.
double meb_dual(const PointSet& ps, const SimplexVector& u);

/// grad D(u) = b - 1/2 A A^T u.
std::vector<double> meb_dual_gradient(const PointSet& ps, const SimplexVector& u);

struct MebSolveOptions {
  LipschitzMode lipschitz = LipschitzMode::kCertified;
  CheckMode checks = CheckMode::kFull;
  int trace_every = 0;
};

struct MebResult {
  Ball ball;
  long iterations = 0;
  long iteration_cap = 0;
  double gap = 0.0;
  bool converged = false;
  StopReason reason = StopReason::kGapTarget;
  std::string mode;
  double eps = 0.0;
  double lipschitz = 0.0;
  std::vector<TraceRow> trace;
};

/// Drive the duality gap below eps_add: the returned squared radius is
/// within eps_add of the optimum. Radius is the primal value at the final
/// center, so the ball always encloses the data.
MebResult solve_meb_additive(const PointSet& ps, double eps_add,
                             long max_iters = 100000,
                             const MebSolveOptions& opts = {});

/// Scale-invariant guarantee R^2 <= R*^2 (1 + eps_mult), certified through
/// the pair lower bound: additive target eps_mult * P^2 with the iteration
/// cap (Q/P) sqrt(6/eps_mult). Requires n >= 2.
MebResult solve_meb_multiplicative(const PointSet& ps, double eps_mult,
                                   long max_iters = 100000,
                                   const MebSolveOptions& opts = {});

}  // namespace egmgeom
