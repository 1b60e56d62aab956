#include "egmgeom/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace egmgeom {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidInputError(std::string(what) + " contains a non-finite value");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

}  // namespace

PointSet::PointSet(std::vector<double> coords, std::size_t dim) {
  if (dim == 0) throw InvalidInputError("point dimension must be >= 1");
  if (coords.empty() || coords.size() % dim != 0) {
    throw InvalidInputError("coordinate buffer size is not a multiple of d");
  }
  require_finite(coords, "point set");
  coords_ = std::move(coords);
  d_ = dim;
  n_ = coords_.size() / dim;
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidInputError("point set needs at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) {
      throw InvalidInputError("all points must have the same dimension");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PointSet(std::move(flat), d);
}

PointSet PointSet::scaled(double alpha) const {
  std::vector<double> c(coords_);
  for (double& x : c) x *= alpha;
  return PointSet(std::move(c), d_);
}

SimplexVector::SimplexVector(std::vector<double> weights) {
  if (weights.empty()) throw InvalidInputError("simplex vector must be nonempty");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw InvalidInputError("simplex weight outside [0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw InvalidInputError("simplex weights sum to " + std::to_string(sum) +
                            ", expected 1");
  }
  w_ = std::move(weights);
}

SimplexVector SimplexVector::uniform(std::size_t n) {
  if (n == 0) throw InvalidInputError("simplex dimension must be >= 1");
  return SimplexVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SimplexVector SimplexVector::blend(const SimplexVector& a,
                                   const SimplexVector& b, double t) {
  if (a.size() != b.size()) throw InvalidInputError("simplex size mismatch");
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double v = (1.0 - t) * a[i] + t * b[i];
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    w[i] = v;
  }
  return SimplexVector(std::move(w));
}

Ball Ball::from_radius_sq(std::vector<double> center, double radius_sq) {
  if (radius_sq < 0.0) {
    // Tiny negatives come out of subtractive arithmetic; anything bigger
    // is a caller bug.
    if (radius_sq < -1e-12) throw InvalidInputError("negative squared radius");
    radius_sq = 0.0;
  }
  Ball b;
  b.center = std::move(center);
  b.radius_sq = radius_sq;
  b.radius = std::sqrt(radius_sq);
  return b;
}

PolytopeShape::PolytopeShape(std::vector<std::vector<double>> normals,
                             std::vector<double> offsets) {
  if (normals.empty()) throw InvalidInputError("polytope shape needs m >= 1 faces");
  if (normals.size() != offsets.size()) {
    throw InvalidInputError("normals/offsets length mismatch");
  }
  m_ = normals.size();
  d_ = normals.front().size();
  if (d_ == 0) throw InvalidInputError("face normal dimension must be >= 1");
  normals_.reserve(m_ * d_);
  scaled_.reserve(m_ * d_);
  offsets_ = offsets;
  for (std::size_t i = 0; i < m_; ++i) {
    if (normals[i].size() != d_) {
      throw InvalidInputError("all face normals must have the same dimension");
    }
    if (!std::isfinite(offsets[i]) || offsets[i] <= 0.0) {
      throw InvalidInputError("face offsets must be positive");
    }
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      const double w = normals[i][j];
      if (!std::isfinite(w)) throw InvalidInputError("non-finite face normal");
      normals_.push_back(w);
      const double ws = w / offsets[i];
      scaled_.push_back(ws);
      norm_sq += ws * ws;
    }
    w_bound_ = std::max(w_bound_, std::sqrt(norm_sq));
  }
  if (!(w_bound_ > 0.0)) {
    throw InvalidInputError("polytope shape must have a nonzero face normal");
  }
}

LabeledDataset::LabeledDataset(PointSet points, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.size() != labels_.size()) {
    throw InvalidInputError("points/labels length mismatch");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) {
      throw InvalidInputError("labels must be +1 or -1");
    }
  }
}

double data_radius(const PointSet& ps) {
  double best = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = ps.point(i);
    best = std::max(best, dot(p, p));
  }
  return std::sqrt(best);
}

double pair_lower_bound(const PointSet& ps) {
  if (ps.size() < 2) {
    throw InsufficientPointsError("pair_lower_bound needs at least two points");
  }
  const auto first = ps.point(0);
  std::size_t a = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double d2 = dist_sq(first, ps.point(i));
    if (d2 > best) {
      best = d2;
      a = i;
    }
  }
  const auto pa = ps.point(a);
  best = -1.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    best = std::max(best, dist_sq(pa, ps.point(i)));
  }
  return 0.5 * std::sqrt(best);
}

}  // namespace egmgeom
