#pragma once

#include <vector>

#include "egmgeom/egm.hpp"
#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// Shortest vector in the convex hull of the points: the witness carries
/// the hull weights, nearest_point = sum_i u_i x_i, distance its norm.
struct PolytopeDistanceResult {
  SimplexVector witness{std::vector<double>{1.0}};
  std::vector<double> nearest_point;
  double distance = 0.0;
  long iterations = 0;
  double gap = 0.0;
  bool converged = false;
  StopReason reason = StopReason::kGapTarget;
  std::vector<TraceRow> trace;
};

struct AppSolveOptions {
  CheckMode checks = CheckMode::kFull;
  int trace_every = 0;
};

/// Distance of conv(S) from the origin. Runs the enclosing-ball machinery
/// with zero linear term; the internal gap target eps/4 puts the squared
/// distance within eps of the optimum.
PolytopeDistanceResult polytope_distance(const PointSet& ps, double eps,
                                         long max_iters = 10000000,
                                         const AppSolveOptions& opts = {});

/// Distance between conv(S+) and conv(S-) through the Minkowski difference.
/// Materializes the n*n' pairwise differences; refuses products above 10^6.
PolytopeDistanceResult polytope_pair_distance(const PointSet& plus,
                                              const PointSet& minus, double eps,
                                              long max_iters = 10000000,
                                              const AppSolveOptions& opts = {});

struct MarginResult {
  std::vector<double> direction;  // unit vector
  double margin = 0.0;            // min_i <y_i z_i, direction>
  long iterations = 0;
  long iteration_cap = 0;
  double gap = 0.0;
  bool converged = false;
  StopReason reason = StopReason::kGapTarget;
  bool separable = false;  // margin > 0 at the returned direction
  std::vector<TraceRow> trace;
};

/// Maximum-margin direction for labeled data: maximize min_i <y_i z_i, c>
/// over the unit sphere. Optimizes over the unit ball (exact for positive
/// margins, where the optimum sits on the sphere) and normalizes the final
/// iterate. Non-separable inputs come back with separable == false.
MarginResult max_margin(const LabeledDataset& ds, double eps,
                        long max_iters = 10000000,
                        const AppSolveOptions& opts = {});

}  // namespace egmgeom
