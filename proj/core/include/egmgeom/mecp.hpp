#pragma once

#include <vector>

#include "egmgeom/egm.hpp"
#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// Minimum enclosing convex polytope as a smoothed saddle problem over the
/// (m*n)-simplex. Dual coordinate (i, j) is flattened to i*n + j. The
/// operators exploit the structure (each scaled normal repeats across the
/// n points), so one product costs O(md + mn) instead of O(mnd).
class MecpProblem final : public SaddleProblem {
 public:
  MecpProblem(const PolytopeShape& shape, const PointSet& ps, double eps,
              double q1);

  std::size_t dual_dim() const override { return shape_.faces() * ps_.size(); }
  std::size_t primal_dim() const override { return ps_.dim(); }
  double eta() const override { return eta_; }
  double lipschitz() const override { return lipschitz_; }
  const std::vector<double>& linear_term() const override { return b_; }
  double q1_radius() const override { return q1_; }

  void apply_A(std::span<const double> c, std::span<double> out) const override;
  void apply_At(std::span<const double> u, std::span<double> out) const override;

  /// max_{i,j} <w~_i, x_j - c> from the cached per-face maxima; O(md).
  double magnification(std::span<const double> c) const;

  long apply_ops() const { return ops_; }

 private:
  const PolytopeShape& shape_;
  const PointSet& ps_;
  std::vector<double> b_;         // b[i*n+j] = <w~_i, x_j>
  std::vector<double> face_max_;  // max_j b[i*n+j]
  double eta_ = 0.0;
  double q1_ = 0.0;
  double lipschitz_ = 0.0;
  mutable long ops_ = 0;  // elementary products spent in the operators
};

/// max_{i,j} <w~_i, x_j - c>, the smallest magnification of the shape
/// centered at c that covers every point.
double mecp_primal(const PolytopeShape& shape, const PointSet& ps,
                   std::span<const double> c);

struct MecpSolveOptions {
  CheckMode checks = CheckMode::kFull;
  int trace_every = 0;
};

struct MecpResult {
  PolytopeFit fit;
  long iterations = 0;
  long iteration_cap = 0;
  double gap = 0.0;
  bool converged = false;
  StopReason reason = StopReason::kGapTarget;
  bool q1_clamped = false;  // the unconstrained center map left the Q1 ball
  double eps = 0.0;
  std::vector<TraceRow> trace;
};

/// Minimize the magnification to within eps by solving the eta-smoothed
/// problem (eta = eps / (2 Q^2)) to eps/2. q1_radius <= 0 selects the
/// data radius.
MecpResult solve_mecp(const PolytopeShape& shape, const PointSet& ps, double eps,
                      double q1_radius = 0.0, long max_iters = 1000000,
                      const MecpSolveOptions& opts = {});

}  // namespace egmgeom
