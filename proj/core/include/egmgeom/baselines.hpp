#pragma once

#include <vector>

#include "egmgeom/diag_qp.hpp"
#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// Exact enclosing ball from support-subset enumeration.
struct OracleBall {
  std::vector<double> center;
  double radius = 0.0;
};

/// Exact minimum enclosing ball for n <= 12, d <= 3: enumerate support
/// subsets of size <= d+1, solve each circumsphere by a dense linear
/// system, keep the smallest one enclosing everything.
OracleBall exact_meb_small(const PointSet& ps);

struct BcResult {
  Ball ball;
  std::vector<std::size_t> coreset;  // farthest points in discovery order
  long iterations = 0;
  bool certified = false;  // stopped on the (1+eps) certificate
};

/// Farthest-point baseline: start at the first point, repeatedly step the
/// center toward the farthest point with weight 1/(k+1). Stops once the
/// enclosing radius is within (1+eps) of the running lower bound (the pair
/// bound joined with the dual value of the averaged weights). max_iters of
/// zero picks a cap of max(1000, 10/eps).
BcResult bc_coreset_meb(const PointSet& ps, double eps_mult, long max_iters = 0);

/// Global optimum of the diagonal QP by exhaustive active-set enumeration
/// (3^n bound patterns), n <= 8. Test oracle; independent of the
/// median-based solver.
std::vector<double> dense_qp_oracle(const DiagQpInstance& inst);

/// Exact min-norm point of conv(S) for n <= 8, d <= 3 by projecting the
/// origin onto the affine hull of every subset and keeping the best
/// projection with nonnegative hull weights.
std::vector<double> minnorm_oracle(const PointSet& ps);

}  // namespace egmgeom
