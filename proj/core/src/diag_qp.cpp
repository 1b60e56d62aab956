#include "egmgeom/diag_qp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace egmgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

// Single-word pivot source; construction is free, which matters because a
// fresh one is made per selection call.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

// In-place lower-median selection (rank ceil(k/2), i.e. 0-based (k-1)/2).
double quickselect_lower_median(std::vector<double>& v) {
  std::size_t lo = 0;
  std::size_t hi = v.size();
  std::size_t want = (v.size() - 1) / 2;
  // Pivot source is local to the call; seeded from the size so repeated
  // runs stay reproducible.
  SplitMix64 rng{0x9e3779b97f4a7c15ull ^ v.size()};
  while (hi - lo > 1) {
    const double pivot = v[lo + rng.next() % (hi - lo)];
    std::size_t lt = lo;   // values < pivot go before lt
    std::size_t eq = lo;   // values == pivot in [lt, eq)
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = v[i];
      if (x < pivot) {
        std::swap(v[i], v[eq]);
        std::swap(v[eq], v[lt]);
        ++lt;
        ++eq;
      } else if (x == pivot) {
        std::swap(v[i], v[eq]);
        ++eq;
      }
    }
    if (want < lt) {
      hi = lt;
    } else if (want < eq) {
      return pivot;
    } else {
      lo = eq;
    }
  }
  return v[lo];
}

struct ActiveVar {
  double kink_lo;  // dbar2 * lo = lo / inv_dbar2
  double kink_hi;
  double lo;
  double hi;
  double slope;  // inv_dbar2
};

}  // namespace

double eval_f(double lambda, const ScaledBoxQp& qp) {
  if (!std::isfinite(lambda)) throw InvalidInputError("eval_f: non-finite lambda");
  double s = -qp.rhs;
  for (std::size_t i = 0; i < qp.lo.size(); ++i) {
    s += clamp(lambda * qp.inv_dbar2[i], qp.lo[i], qp.hi[i]);
  }
  return s;
}

double median_select(std::span<const double> values) {
  if (values.empty()) throw InvalidInputError("median of empty set");
  std::vector<double> scratch(values.begin(), values.end());
  return quickselect_lower_median(scratch);
}

RootFindResult root_find_f(const ScaledBoxQp& qp) {
  const std::size_t n = qp.lo.size();
  RootFindResult res;
  if (n == 0) {
    res.lambda = 0.0;
    return res;
  }

  // Hot path of every projection; scratch survives across calls.
  thread_local std::vector<ActiveVar> active;
  active.clear();
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double slope = qp.inv_dbar2[i];
    active.push_back({qp.lo[i] / slope, qp.hi[i] / slope, qp.lo[i], qp.hi[i], slope});
  }

  // Bracket [brk_lo, brk_hi] always contains the root; contributions of
  // variables whose behaviour is fixed on the whole bracket are folded
  // into base_offset / base_slope so one f evaluation costs O(|active|).
  double brk_lo = -kInf, brk_hi = kInf;
  double f_lo = 0.0, f_hi = 0.0;
  double base_offset = -qp.rhs;
  double base_slope = 0.0;

  thread_local std::vector<double> kinks;
  kinks.clear();
  kinks.reserve(2 * n);
  auto collect_kinks = [&] {
    kinks.clear();
    for (const ActiveVar& a : active) {
      if (a.kink_lo > brk_lo && a.kink_lo < brk_hi) kinks.push_back(a.kink_lo);
      if (a.kink_hi > brk_lo && a.kink_hi < brk_hi) kinks.push_back(a.kink_hi);
    }
  };
  auto eval_active = [&](double lambda) {
    double s = base_offset + base_slope * lambda;
    for (const ActiveVar& a : active) {
      s += clamp(lambda * a.slope, a.lo, a.hi);
    }
    return s;
  };

  collect_kinks();
  std::size_t prev_size = kinks.size() + 1;
  while (!kinks.empty()) {
    if (kinks.size() >= prev_size) {
      throw NumericalFailureError("kink set failed to shrink");
    }
    prev_size = kinks.size();
    ++res.iterations;
    const double mid = quickselect_lower_median(kinks);
    const double fm = eval_active(mid);
    if (fm >= 0.0) {
      brk_hi = mid;
      f_hi = fm;
    } else {
      brk_lo = mid;
      f_lo = fm;
    }
    // Retire variables that are saturated or fully linear on the bracket.
    std::size_t kept = 0;
    for (const ActiveVar& a : active) {
      if (a.kink_hi <= brk_lo) {
        base_offset += a.hi;
      } else if (a.kink_lo >= brk_hi) {
        base_offset += a.lo;
      } else if (a.kink_lo <= brk_lo && a.kink_hi >= brk_hi) {
        base_slope += a.slope;
      } else {
        active[kept++] = a;
      }
    }
    active.resize(kept);
    collect_kinks();
  }

  if (brk_lo == -kInf && brk_hi == kInf) {
    // No kink was strictly inside the initial bracket: every variable is a
    // single point interval, impossible given lo < hi. Defensive only.
    throw NumericalFailureError("root_find_f: empty kink set on nonempty QP");
  }
  if (brk_lo == -kInf) {
    // f was nonnegative at every probe; the root sits at the lowest kink.
    res.lambda = brk_hi;
    return res;
  }
  if (brk_hi == kInf) {
    res.lambda = brk_lo;
    return res;
  }
  const double denom = f_hi - f_lo;
  if (denom <= 0.0) {
    // f is flat on the bracket; both values must straddle zero.
    res.lambda = brk_lo;
    return res;
  }
  res.lambda = clamp((brk_lo * f_hi - brk_hi * f_lo) / denom, brk_lo, brk_hi);
  return res;
}

DiagQpSolution solve_diag_qp_full(const DiagQpInstance& inst) {
  const std::size_t n = inst.size();
  if (n == 0) throw InvalidInputError("empty QP instance");
  if (inst.m.size() != n || inst.l.size() != n || inst.u.size() != n ||
      inst.sigma.size() != n) {
    throw InvalidInputError("QP field lengths disagree");
  }
  if (!std::isfinite(inst.z)) throw InvalidInputError("non-finite z");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(inst.d_sq[i]) || !std::isfinite(inst.m[i]) ||
        !std::isfinite(inst.l[i]) || !std::isfinite(inst.u[i]) ||
        !std::isfinite(inst.sigma[i])) {
      throw InvalidInputError("non-finite QP coefficient");
    }
    if (inst.d_sq[i] <= 0.0) throw InvalidInputError("d_sq must be positive");
    if (!(inst.l[i] < inst.u[i])) throw InvalidInputError("need l < u");
  }

  // Feasibility window of sum sigma*alpha over the box.
  double zmin = 0.0, zmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (inst.sigma[i] > 0.0) {
      zmin += inst.sigma[i] * inst.l[i];
      zmax += inst.sigma[i] * inst.u[i];
    } else {
      zmin += inst.sigma[i] * inst.u[i];
      zmax += inst.sigma[i] * inst.l[i];
    }
  }
  const double feas_tol =
      1e-9 * std::max({1.0, std::abs(zmin), std::abs(zmax), std::abs(inst.z)});
  if (inst.z < zmin - feas_tol || inst.z > zmax + feas_tol) {
    throw InfeasibleError("equality target outside the reachable interval [" +
                          std::to_string(zmin) + ", " + std::to_string(zmax) + "]");
  }
  const double z = clamp(inst.z, zmin, zmax);

  DiagQpSolution sol;
  sol.alpha.resize(n);

  // sigma == 0 coordinates decouple; the rest transform to the box-sum QP.
  ScaledBoxQp qp;
  std::vector<std::size_t> idx;
  qp.rhs = z;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = inst.sigma[i];
    if (s == 0.0) {
      sol.alpha[i] = clamp(inst.m[i], inst.l[i], inst.u[i]);
      continue;
    }
    idx.push_back(i);
    const double a = s * (inst.l[i] - inst.m[i]);
    const double b = s * (inst.u[i] - inst.m[i]);
    qp.lo.push_back(std::min(a, b));
    qp.hi.push_back(std::max(a, b));
    qp.inv_dbar2.push_back(s * s / inst.d_sq[i]);
    qp.rhs -= s * inst.m[i];
  }

  if (!idx.empty()) {
    const RootFindResult root = root_find_f(qp);
    sol.lambda = root.lambda;
    sol.root_iterations = root.iterations;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const std::size_t i = idx[t];
      const double beta = clamp(sol.lambda * qp.inv_dbar2[t], qp.lo[t], qp.hi[t]);
      sol.alpha[i] = clamp(inst.m[i] + beta / inst.sigma[i], inst.l[i], inst.u[i]);
    }
  }
  return sol;
}

std::vector<double> solve_diag_qp(const DiagQpInstance& inst) {
  return solve_diag_qp_full(inst).alpha;
}

SimplexVector project_scaled_simplex(std::span<const double> g, double scale) {
  if (g.empty()) throw InvalidInputError("projection of empty vector");
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw InvalidInputError("projection scale must be positive");
  }
  double gmax = -kInf;
  for (double x : g) {
    if (!std::isfinite(x)) throw InvalidInputError("non-finite projection input");
    gmax = std::max(gmax, x);
  }

  // The projection is clamp(g/scale - theta, 0, 1) with theta chosen so the
  // sum is one, and theta >= max(g)/scale - 1 always. Coordinates with
  // g_i/scale < max(g)/scale - 1 are therefore exact zeros; dropping them
  // keeps every remaining quantity within one unit of zero, so the
  // transformed solve never mixes magnitudes even when scale is tiny
  // relative to the spread of g.
  const std::size_t n = g.size();
  thread_local std::vector<std::size_t> kept;
  thread_local std::vector<double> shifted;  // (g_i - gmax) / scale, in [-1, 0]
  thread_local ScaledBoxQp qp;
  kept.clear();
  shifted.clear();
  qp.lo.clear();
  qp.hi.clear();
  qp.inv_dbar2.clear();
  double shift_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = (g[i] - gmax) / scale;
    if (y < -1.0) continue;
    kept.push_back(i);
    shifted.push_back(y);
    shift_sum += y;
    qp.lo.push_back(-y);        // beta = alpha - y over [-y, 1 - y]
    qp.hi.push_back(1.0 - y);
    qp.inv_dbar2.push_back(1.0);  // uniform curvature divides out
  }
  qp.rhs = 1.0 - shift_sum;

  const RootFindResult root = root_find_f(qp);
  std::vector<double> w(n, 0.0);
  for (std::size_t t = 0; t < kept.size(); ++t) {
    w[kept[t]] = clamp(shifted[t] + root.lambda, 0.0, 1.0);
  }

  // Close any residual in the sum by spending it against the coordinates
  // with headroom; a few ulp at most after the filtering above.
  for (int pass = 0; pass < 16; ++pass) {
    double sum = 0.0;
    for (double x : w) sum += x;
    double r = 1.0 - sum;
    if (std::abs(r) <= 0.5 * SimplexVector::kSumTol) break;
    for (std::size_t t = 0; t < kept.size() && r != 0.0; ++t) {
      double& x = w[kept[t]];
      const double room = r > 0.0 ? 1.0 - x : -x;
      const double step = r > 0.0 ? std::min(r, room) : std::max(r, room);
      x += step;
      r -= step;
    }
  }
  return SimplexVector(std::move(w));
}

}  // namespace egmgeom
