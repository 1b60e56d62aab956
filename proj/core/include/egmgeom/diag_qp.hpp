#pragma once

#include <span>
#include <vector>

#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// Box-constrained diagonal QP with one linear equality constraint:
///
///   minimize    1/2 sum_i d_sq[i] * (alpha_i - m[i])^2
///   subject to  l[i] <= alpha_i <= u[i],   sum_i sigma[i] * alpha_i = z.
///
/// Requires d_sq[i] > 0 and l[i] < u[i]. Coordinates with sigma[i] == 0
/// decouple from the equality constraint and are solved independently.
struct DiagQpInstance {
  std::vector<double> d_sq;
  std::vector<double> m;
  std::vector<double> l;
  std::vector<double> u;
  std::vector<double> sigma;
  double z = 0.0;

  std::size_t size() const { return d_sq.size(); }
};

/// The instance after the change of variable beta_i = sigma_i * (alpha_i - m_i):
/// minimize 1/2 sum beta_i^2 / inv_dbar2[i] over [lo, hi] with sum beta = rhs.
/// inv_dbar2[i] = sigma_i^2 / d_sq[i] is the slope of the i-th clamp piece.
struct ScaledBoxQp {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> inv_dbar2;
  double rhs = 0.0;
};

/// sum_i clamp(lambda * inv_dbar2[i], lo[i], hi[i]) - rhs.
/// Monotone nondecreasing and piecewise linear in lambda with at most
/// 2n kinks.
double eval_f(double lambda, const ScaledBoxQp& qp);

struct RootFindResult {
  double lambda = 0.0;
  int iterations = 0;  // bracketing loop passes; <= ceil(log2(2n)) + 1
};

/// Root of eval_f by median-of-kinks bracketing. The surviving candidate
/// kink set at least halves every pass; on the final bracket [l, u] the
/// root is the linear interpolation (l f(u) - u f(l)) / (f(u) - f(l)).
RootFindResult root_find_f(const ScaledBoxQp& qp);

/// Lower median (rank ceil(k/2)) by randomized quickselect, expected O(k).
/// The worst case is quadratic, as for any quickselect with random pivots.
double median_select(std::span<const double> values);

struct DiagQpSolution {
  std::vector<double> alpha;
  double lambda = 0.0;
  int root_iterations = 0;
};

/// Exact optimum of the instance. Outputs are clamped into [l, u] exactly
/// and satisfy |sum sigma*alpha - z| <= 1e-9 * max(1, |z|).
DiagQpSolution solve_diag_qp_full(const DiagQpInstance& inst);
std::vector<double> solve_diag_qp(const DiagQpInstance& inst);

/// argmin over the simplex of (scale/2)||v||^2 - <g, v>, i.e. the Euclidean
/// projection of g/scale onto the simplex. Solved through the diagonal QP
/// with d_sq = scale, l = 0, u = 1, sigma = 1, z = 1. The input is shifted
/// by max(g) first; the projection is invariant along the all-ones
/// direction and the shift keeps the recovery arithmetic well scaled when
/// scale is many orders of magnitude below |g|.
SimplexVector project_scaled_simplex(std::span<const double> g, double scale);

}  // namespace egmgeom
