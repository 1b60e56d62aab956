#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "egmgeom/errors.hpp"

namespace egmgeom {

/// n points in d dimensions, stored row-major in one contiguous buffer.
/// Immutable after construction; all coordinates finite, n >= 1, d >= 1.
class PointSet {
 public:
  PointSet(std::vector<double> coords, std::size_t dim);

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * d_, d_};
  }
  const std::vector<double>& coords() const { return coords_; }

  /// New point set with every coordinate multiplied by alpha.
  PointSet scaled(double alpha) const;

 private:
  std::vector<double> coords_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
};

/// A point of the probability simplex: weights in [0,1] summing to one
/// within kSumTol (absolute).
class SimplexVector {
 public:
  static constexpr double kSumTol = 1e-12;

  explicit SimplexVector(std::vector<double> weights);
  static SimplexVector uniform(std::size_t n);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }

  /// Convex combination (1-t)*a + t*b with entries clamped to [0,1]
  /// to absorb arithmetic noise.
  static SimplexVector blend(const SimplexVector& a, const SimplexVector& b,
                             double t);

 private:
  std::vector<double> w_;
};

/// Euclidean ball. radius == sqrt(radius_sq) within 1e-12 relative.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  double radius_sq = 0.0;

  static Ball from_radius_sq(std::vector<double> center, double radius_sq);
};

/// Fixed polytope shape given by faces <w_i, x - c> <= t_i, t_i > 0.
/// Stores the scaled normals w_i / t_i and their largest norm.
class PolytopeShape {
 public:
  PolytopeShape(std::vector<std::vector<double>> normals,
                std::vector<double> offsets);

  std::size_t faces() const { return m_; }
  std::size_t dim() const { return d_; }
  std::span<const double> normal(std::size_t i) const {
    return {normals_.data() + i * d_, d_};
  }
  double offset(std::size_t i) const { return offsets_[i]; }
  std::span<const double> scaled_normal(std::size_t i) const {
    return {scaled_.data() + i * d_, d_};
  }
  /// max_i ||w_i / t_i||
  double w_bound() const { return w_bound_; }

 private:
  std::vector<double> normals_;
  std::vector<double> offsets_;
  std::vector<double> scaled_;
  std::size_t m_ = 0;
  std::size_t d_ = 0;
  double w_bound_ = 0.0;
};

/// Solution record for the minimum enclosing polytope problem.
struct PolytopeFit {
  std::vector<double> center;
  double magnification = 0.0;
};

/// Points z_i with labels y_i in {+1, -1}.
class LabeledDataset {
 public:
  LabeledDataset(PointSet points, std::vector<int> labels);

  const PointSet& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

 private:
  PointSet points_;
  std::vector<int> labels_;
};

/// Largest point norm: an upper bound on how far the data sits from the
/// origin. Zero only when every point is the origin.
double data_radius(const PointSet& ps);

/// Half the distance of the pair found by the two-pass farthest-point
/// heuristic (start at the first point, walk to the farthest point, then
/// to the point farthest from that). Always a lower bound on the optimal
/// enclosing radius. Requires n >= 2.
double pair_lower_bound(const PointSet& ps);

}  // namespace egmgeom
