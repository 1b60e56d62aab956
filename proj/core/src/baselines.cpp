#include "egmgeom/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace egmgeom {

namespace {

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

// Gaussian elimination with partial pivoting; returns false when the
// system is numerically singular. a is k x k row-major, rhs length k.
bool solve_dense(std::vector<double> a, std::vector<double> rhs,
                 std::vector<double>& x, std::size_t k) {
  double scale = 1e-13;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r * k + col]) > std::abs(a[piv * k + col])) piv = r;
    }
    if (std::abs(a[piv * k + col]) < 1e-12 * scale) return false;
    if (piv != col) {
      for (std::size_t cc = 0; cc < k; ++cc) std::swap(a[piv * k + cc], a[col * k + cc]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / a[col * k + col];
      if (f == 0.0) continue;
      for (std::size_t cc = col; cc < k; ++cc) a[r * k + cc] -= f * a[col * k + cc];
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(k, 0.0);
  for (std::size_t r = k; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t cc = r + 1; cc < k; ++cc) s -= a[r * k + cc] * x[cc];
    x[r] = s / (a[r * k + r]);
  }
  return true;
}

// Visit all subsets of {0..n-1} with 1 <= |subset| <= kmax.
template <typename F>
void for_each_subset(std::size_t n, std::size_t kmax, F&& fn) {
  std::vector<std::size_t> idx;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!idx.empty()) fn(idx);
    if (idx.size() == kmax) return;
    for (std::size_t i = start; i < n; ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

OracleBall exact_meb_small(const PointSet& ps) {
  if (ps.size() > 12 || ps.dim() > 3) {
    throw InvalidInputError("exact_meb_small is limited to n <= 12, d <= 3");
  }
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  OracleBall best;
  best.radius = std::numeric_limits<double>::infinity();

  for_each_subset(n, d + 1, [&](const std::vector<std::size_t>& idx) {
    const std::size_t k = idx.size();
    const auto x0 = ps.point(idx[0]);
    std::vector<double> center(x0.begin(), x0.end());
    if (k > 1) {
      // Circumsphere through the subset: center = x0 + sum lam_i v_i with
      // 2 G lam = (||v_i||^2)_i, v_i = x_i - x0.
      const std::size_t kk = k - 1;
      std::vector<double> v(kk * d);
      std::vector<double> g(kk * kk), rhs(kk), lam;
      for (std::size_t i = 0; i < kk; ++i) {
        const auto xi = ps.point(idx[i + 1]);
        for (std::size_t j = 0; j < d; ++j) v[i * d + j] = xi[j] - x0[j];
      }
      for (std::size_t i = 0; i < kk; ++i) {
        for (std::size_t j = 0; j < kk; ++j) {
          double s = 0.0;
          for (std::size_t t = 0; t < d; ++t) s += v[i * d + t] * v[j * d + t];
          g[i * kk + j] = 2.0 * s;
        }
        rhs[i] = 0.5 * g[i * kk + i];
      }
      if (!solve_dense(std::move(g), std::move(rhs), lam, kk)) return;
      for (std::size_t i = 0; i < kk; ++i) {
        for (std::size_t j = 0; j < d; ++j) center[j] += lam[i] * v[i * d + j];
      }
    }
    double r_sq = 0.0;
    for (std::size_t i : idx) r_sq = std::max(r_sq, dist_sq(center, ps.point(i)));
    const double r = std::sqrt(r_sq);
    if (r >= best.radius) return;
    for (std::size_t i = 0; i < n; ++i) {
      if (dist_sq(center, ps.point(i)) > r_sq * (1.0 + 1e-12) + 1e-12) return;
    }
    best.radius = r;
    best.center = center;
  });
  return best;
}

BcResult bc_coreset_meb(const PointSet& ps, double eps_mult, long max_iters) {
  if (!(eps_mult > 0.0)) throw InvalidInputError("eps must be positive");
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  if (max_iters <= 0) {
    max_iters = std::max<long>(1000, static_cast<long>(std::ceil(10.0 / eps_mult)));
  }

  BcResult res;
  const auto x0 = ps.point(0);
  std::vector<double> c(x0.begin(), x0.end());
  double s = dot(x0, x0);  // running sum of u_i ||x_i||^2
  double lb = n >= 2 ? pair_lower_bound(ps) : 0.0;
  res.coreset.push_back(0);

  double r_enc = 0.0;
  for (long k = 1; k <= max_iters; ++k) {
    res.iterations = k;
    std::size_t far = 0;
    double far_sq = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = dist_sq(c, ps.point(i));
      if (d2 > far_sq) {
        far_sq = d2;
        far = i;
      }
    }
    r_enc = std::sqrt(far_sq);
    // The averaged weights are a dual-feasible point, so sqrt(s - ||c||^2)
    // is a valid lower bound on the optimal radius.
    lb = std::max(lb, std::sqrt(std::max(s - dot(c, c), 0.0)));
    if (r_enc <= (1.0 + eps_mult) * lb) {
      res.certified = true;
      break;
    }
    if (std::find(res.coreset.begin(), res.coreset.end(), far) == res.coreset.end()) {
      res.coreset.push_back(far);
    }
    const double t = 1.0 / static_cast<double>(k + 1);
    const auto p = ps.point(far);
    for (std::size_t j = 0; j < d; ++j) c[j] += t * (p[j] - c[j]);
    s = (1.0 - t) * s + t * dot(p, p);
  }
  res.ball = Ball::from_radius_sq(std::move(c), r_enc * r_enc);
  return res;
}

std::vector<double> dense_qp_oracle(const DiagQpInstance& inst) {
  const std::size_t n = inst.size();
  if (n > 8) throw InvalidInputError("dense_qp_oracle is limited to n <= 8");

  // sigma == 0 coordinates decouple exactly as in the solver.
  std::vector<std::size_t> idx;
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (inst.sigma[i] == 0.0) {
      alpha[i] = std::clamp(inst.m[i], inst.l[i], inst.u[i]);
    } else {
      idx.push_back(i);
    }
  }
  const std::size_t nn = idx.size();

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  std::vector<int> pat(nn, 0);  // 0 = at l, 1 = at u, 2 = free
  const double ztol = 1e-9 * std::max(1.0, std::abs(inst.z));

  std::size_t total = 1;
  for (std::size_t i = 0; i < nn; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < nn; ++i) {
      pat[i] = static_cast<int>(c % 3);
      c /= 3;
    }
    std::vector<double> a(alpha);
    double rhs = inst.z;
    double denom = 0.0;
    double free_m = 0.0;
    for (std::size_t t = 0; t < nn; ++t) {
      const std::size_t i = idx[t];
      if (pat[t] == 0) {
        a[i] = inst.l[i];
        rhs -= inst.sigma[i] * a[i];
      } else if (pat[t] == 1) {
        a[i] = inst.u[i];
        rhs -= inst.sigma[i] * a[i];
      } else {
        denom += inst.sigma[i] * inst.sigma[i] / inst.d_sq[i];
        free_m += inst.sigma[i] * inst.m[i];
      }
    }

    double lambda = 0.0;
    bool ok = true;
    if (denom > 0.0) {
      lambda = (rhs - free_m) / denom;
      for (std::size_t t = 0; t < nn && ok; ++t) {
        const std::size_t i = idx[t];
        if (pat[t] != 2) continue;
        a[i] = inst.m[i] + lambda * inst.sigma[i] / inst.d_sq[i];
        if (a[i] < inst.l[i] - 1e-9 || a[i] > inst.u[i] + 1e-9) ok = false;
        a[i] = std::clamp(a[i], inst.l[i], inst.u[i]);
      }
      if (!ok) continue;
    } else {
      // Everything pinned: the equality must already hold and some lambda
      // must satisfy every bound multiplier sign.
      if (std::abs(rhs) > ztol) continue;
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < nn; ++t) {
        const std::size_t i = idx[t];
        const double edge = pat[t] == 0 ? inst.l[i] : inst.u[i];
        const double bound = inst.d_sq[i] * (edge - inst.m[i]) / inst.sigma[i];
        const bool upper = (pat[t] == 0) == (inst.sigma[i] > 0.0);
        if (upper) {
          hi = std::min(hi, bound);
        } else {
          lo = std::max(lo, bound);
        }
      }
      if (lo > hi + 1e-9) continue;
      lambda = std::clamp(0.0, lo, hi);
    }

    // Multiplier signs at the pinned coordinates.
    for (std::size_t t = 0; t < nn && ok; ++t) {
      const std::size_t i = idx[t];
      const double grad = inst.d_sq[i] * (a[i] - inst.m[i]) - lambda * inst.sigma[i];
      if (pat[t] == 0 && grad < -1e-9) ok = false;  // needs rho+ >= 0
      if (pat[t] == 1 && grad > 1e-9) ok = false;   // needs rho- >= 0
    }
    if (!ok) continue;

    double viol = 0.0;
    for (std::size_t i = 0; i < n; ++i) viol += inst.sigma[i] * a[i];
    if (std::abs(viol - inst.z) > ztol) continue;

    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t2 = a[i] - inst.m[i];
      obj += 0.5 * inst.d_sq[i] * t2 * t2;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best = a;
    }
  }
  if (best.empty()) throw InfeasibleError("oracle found no feasible pattern");
  return best;
}

std::vector<double> minnorm_oracle(const PointSet& ps) {
  if (ps.size() > 8 || ps.dim() > 3) {
    throw InvalidInputError("minnorm_oracle is limited to n <= 8, d <= 3");
  }
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  double best_sq = std::numeric_limits<double>::infinity();
  std::vector<double> best;

  for_each_subset(n, std::min(n, d + 1), [&](const std::vector<std::size_t>& idx) {
    const std::size_t k = idx.size();
    std::vector<double> lam;
    if (k == 1) {
      lam = {1.0};
    } else {
      // minimize ||sum lam_i x_i||^2 over sum lam = 1 via the bordered
      // Gram system [2G, 1; 1^T, 0].
      const std::size_t kk = k + 1;
      std::vector<double> a(kk * kk, 0.0), rhs(kk, 0.0), sol;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          a[i * kk + j] = 2.0 * dot(ps.point(idx[i]), ps.point(idx[j]));
        }
        a[i * kk + k] = 1.0;
        a[k * kk + i] = 1.0;
      }
      rhs[k] = 1.0;
      if (!solve_dense(std::move(a), std::move(rhs), sol, kk)) return;
      lam.assign(sol.begin(), sol.begin() + k);
    }
    for (double w : lam) {
      if (w < -1e-10) return;  // projection leaves the hull of the subset
    }
    std::vector<double> p(d, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto x = ps.point(idx[i]);
      for (std::size_t j = 0; j < d; ++j) p[j] += lam[i] * x[j];
    }
    const double nsq = dot(p, p);
    if (nsq < best_sq) {
      best_sq = nsq;
      best = std::move(p);
    }
  });
  return best;
}

}  // namespace egmgeom
