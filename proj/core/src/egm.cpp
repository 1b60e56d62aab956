#include "egmgeom/egm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <string>

namespace egmgeom {

namespace {

constexpr double kGapViolationTol = 1e-8;
constexpr double kWeakDualityTol = 1e-8;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

bool debug_log_enabled() {
  static const bool on = [] {
    const char* v = std::getenv("EGMGEOM_LOG");
    return v != nullptr && std::strcmp(v, "debug") == 0;
  }();
  return on;
}

void clamp_simplex_entries(std::vector<double>& w) {
  for (double& x : w) {
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
  }
}

// Per-iteration machinery on plain buffers; SimplexVector is only built at
// the API boundary. Holds every scratch vector so long runs do not allocate.
class Stepper {
 public:
  explicit Stepper(const SaddleProblem& p)
      : p_(p),
        n_(p.dual_dim()),
        d_(p.primal_dim()),
        inv_n_(1.0 / static_cast<double>(p.dual_dim())),
        c_(d_, 0.0),
        u_(n_, inv_n_),
        g_(n_),
        grad_(n_),
        gamma_(n_),
        beta_(n_),
        atu_(d_),
        cb_(d_) {}

  long k() const { return k_; }
  double mu() const { return mu_; }
  double primal() const { return primal_; }
  double dual() const { return dual_; }
  double gap() const { return primal_ - dual_; }
  double smoothed_primal() const { return smoothed_; }
  bool clamp_seen() const { return clamp_seen_; }
  const std::vector<double>& c() const { return c_; }
  const std::vector<double>& u() const { return u_; }

  void seed_from(const EgmState& s) {
    k_ = s.k;
    mu_ = s.mu;
    c_ = s.c;
    u_ = s.u.weights();
    refresh();
  }

  void init() {
    k_ = 1;
    mu_ = mu_schedule(p_.lipschitz(), 1);
    std::fill(u_.begin(), u_.end(), inv_n_);  // prox center
    compute_c_of(u_, c_);                     // c_1 = c(u_0)
    compute_v_of(u_, beta_);                  // u_1 = V(u_0)
    u_.swap(beta_);
    refresh();
  }

  void advance() {
    const double tau = 2.0 / static_cast<double>(k_ + 3);
    // beta = (1 - tau) u + tau gamma, with gamma = u_mu(c) from refresh()
    for (std::size_t i = 0; i < n_; ++i) {
      double v = (1.0 - tau) * u_[i] + tau * gamma_[i];
      if (v < 0.0) v = 0.0;
      if (v > 1.0) v = 1.0;
      beta_[i] = v;
    }
    compute_c_of(beta_, cb_);
    for (std::size_t j = 0; j < d_; ++j) {
      c_[j] = (1.0 - tau) * c_[j] + tau * cb_[j];
    }
    compute_v_of(beta_, grad_);  // result lands in grad_
    u_.swap(grad_);
    k_ += 1;
    mu_ = mu_schedule(p_.lipschitz(), k_);
    refresh();
  }

  void check_invariants() const {
    const double tol = kGapViolationTol * (1.0 + std::abs(dual_));
    if (debug_log_enabled()) {
      std::fprintf(stderr,
                   "egmgeom: k=%ld J=%.12g D=%.12g gap=%.6g mu=%.6g Jmu-D=%.6g\n",
                   k_, primal_, dual_, gap(), mu_, smoothed_ - dual_);
    }
    if (smoothed_ > dual_ + tol) {
      throw GapViolationError(
          "excessive-gap invariant violated at k=" + std::to_string(k_) +
          ": J_mu=" + std::to_string(smoothed_) + " > D=" + std::to_string(dual_) +
          " (L too small or internal bug)");
    }
    if (gap() < -kWeakDualityTol * (1.0 + std::abs(dual_))) {
      throw GapViolationError("weak duality violated at k=" + std::to_string(k_));
    }
  }

  EgmState snapshot() const {
    EgmState s;
    s.k = k_;
    s.c = c_;
    std::vector<double> w = u_;
    clamp_simplex_entries(w);
    s.u = SimplexVector(std::move(w));
    s.mu = mu_;
    s.primal = primal_;
    s.dual = dual_;
    s.gap = gap();
    s.smoothed_primal = smoothed_;
    return s;
  }

  // --- shared closed forms, also used by the free functions ---

  void compute_c_of(std::span<const double> u, std::vector<double>& out) {
    p_.apply_At(u, atu_);
    out.resize(d_);
    const double inv = -1.0 / (2.0 * p_.eta());
    for (std::size_t j = 0; j < d_; ++j) out[j] = atu_[j] * inv;
    const double q = p_.q1_radius();
    if (q > 0.0) {
      const double nn = std::sqrt(norm_sq(out));
      if (nn > q) {
        const double s = q / nn;
        for (double& x : out) x *= s;
        clamp_seen_ = true;
      }
    }
  }

  // g = A c + b into g_, returns the primal value
  double compute_primal(std::span<const double> c) {
    p_.apply_A(c, g_);
    const auto& b = p_.linear_term();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      g_[i] += b[i];
      mx = std::max(mx, g_[i]);
    }
    return p_.eta() * norm_sq(c) + mx;
  }

  double compute_dual(std::span<const double> u) {
    p_.apply_At(u, atu_);
    const double s_sq = norm_sq(atu_);
    const double ub = dot(u, p_.linear_term());
    const double q = p_.q1_radius();
    if (q > 0.0) {
      const double s = std::sqrt(s_sq);
      if (s > 2.0 * p_.eta() * q) {
        // Fenchel term of eta ||.||^2 restricted to the Q1 ball.
        return ub - (q * s - p_.eta() * q * q);
      }
    }
    return ub - s_sq / (4.0 * p_.eta());
  }

  // gamma = argmax of the mu-smoothed linear term given g_ = A c + b
  void compute_gamma(double mu) {
    const double ms = mu * kProxModulus;
    const double shift = ms * inv_n_;
    for (std::size_t i = 0; i < n_; ++i) grad_[i] = g_[i] + shift;
    const SimplexVector gamma = project_scaled_simplex(grad_, ms);
    std::copy(gamma.weights().begin(), gamma.weights().end(), gamma_.begin());
  }

  double smoothed_from_gamma(std::span<const double> c, double mu) const {
    double lin = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      lin += g_[i] * gamma_[i];
      const double t = gamma_[i] - inv_n_;
      dist += t * t;
    }
    return p_.eta() * norm_sq(c) + lin - 0.5 * mu * kProxModulus * dist;
  }

  // V(u): gradient-mapping step, grad D(u) = b + A c(u)
  void compute_v_of(std::span<const double> u, std::vector<double>& out) {
    compute_c_of(u, cb_);
    p_.apply_A(cb_, grad_);
    const auto& b = p_.linear_term();
    const double L = p_.lipschitz();
    for (std::size_t i = 0; i < n_; ++i) {
      grad_[i] = L * u[i] + grad_[i] + b[i];
    }
    const SimplexVector v = project_scaled_simplex(grad_, L);
    out.resize(n_);
    std::copy(v.weights().begin(), v.weights().end(), out.begin());
  }

 private:
  void refresh() {
    primal_ = compute_primal(c_);  // fills g_
    dual_ = compute_dual(u_);
    compute_gamma(mu_);
    smoothed_ = smoothed_from_gamma(c_, mu_);
  }

  const SaddleProblem& p_;
  std::size_t n_;
  std::size_t d_;
  double inv_n_;
  long k_ = 0;
  double mu_ = 0.0;
  double primal_ = 0.0;
  double dual_ = 0.0;
  double smoothed_ = 0.0;
  bool clamp_seen_ = false;
  std::vector<double> c_;
  std::vector<double> u_;
  std::vector<double> g_;
  std::vector<double> grad_;
  std::vector<double> gamma_;
  std::vector<double> beta_;
  std::vector<double> atu_;
  std::vector<double> cb_;
};

}  // namespace

SimplexVector prox_center(std::size_t n) { return SimplexVector::uniform(n); }

double prox_diameter(std::size_t n) {
  if (n == 0) throw InvalidInputError("prox_diameter of empty simplex");
  // ||e_j - u0||^2 = 1 - 1/n at any vertex, and vertices are the maximizers.
  return 0.5 * kProxModulus * (1.0 - 1.0 / static_cast<double>(n));
}

double mu_schedule(double lipschitz, long k) {
  return 6.0 * lipschitz /
         (kProxModulus * static_cast<double>(k + 1) * static_cast<double>(k + 2));
}

std::vector<double> map_c(const SaddleProblem& p, const SimplexVector& u,
                          bool* clamped) {
  Stepper st(p);
  std::vector<double> out;
  st.compute_c_of(u.weights(), out);
  if (clamped) *clamped = st.clamp_seen();
  return out;
}

SimplexVector map_u_mu(const SaddleProblem& p, std::span<const double> c,
                       double mu) {
  if (!(mu > 0.0)) throw InvalidInputError("map_u_mu needs mu > 0");
  const double ms = mu * kProxModulus;
  std::vector<double> g(p.dual_dim());
  p.apply_A(c, g);
  const auto& b = p.linear_term();
  const double shift = ms / static_cast<double>(p.dual_dim());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += b[i] + shift;
  return project_scaled_simplex(g, ms);
}

SimplexVector map_V(const SaddleProblem& p, const SimplexVector& u) {
  Stepper st(p);
  std::vector<double> out;
  st.compute_v_of(u.weights(), out);
  clamp_simplex_entries(out);
  return SimplexVector(std::move(out));
}

double primal_value(const SaddleProblem& p, std::span<const double> c) {
  Stepper st(p);
  return st.compute_primal(c);
}

double dual_value(const SaddleProblem& p, const SimplexVector& u) {
  Stepper st(p);
  return st.compute_dual(u.weights());
}

double smoothed_primal_value(const SaddleProblem& p, std::span<const double> c,
                             double mu) {
  Stepper st(p);
  st.compute_primal(c);
  st.compute_gamma(mu);
  return st.smoothed_from_gamma(c, mu);
}

EgmState egm_init(const SaddleProblem& p) {
  Stepper st(p);
  st.init();
  st.check_invariants();
  return st.snapshot();
}

EgmState egm_step(const SaddleProblem& p, const EgmState& s) {
  Stepper st(p);
  st.seed_from(s);
  st.advance();
  st.check_invariants();
  return st.snapshot();
}

RunResult run(const SaddleProblem& p, const StoppingRule& stop,
              const RunOptions& opts) {
  Stepper st(p);
  st.init();
  st.check_invariants();

  RunResult res;
  const int check_stride = opts.checks == CheckMode::kSampled ? 16 : 1;
  auto note = [&] {
    if (opts.trace_every > 0 &&
        (st.k() % opts.trace_every == 0 || st.k() == 1)) {
      res.trace.push_back({st.k(), st.primal(), st.dual(), st.gap(), st.mu()});
    }
  };
  note();

  while (true) {
    if (st.gap() <= stop.gap_target) {
      res.converged = true;
      res.reason = StopReason::kGapTarget;
      break;
    }
    if (stop.iteration_cap > 0 && st.k() >= stop.iteration_cap) {
      res.reason = StopReason::kIterationCap;
      break;
    }
    if (stop.max_iters > 0 && st.k() >= stop.max_iters) {
      res.reason = StopReason::kMaxIters;
      break;
    }
    st.advance();
    if (st.k() % check_stride == 0) st.check_invariants();
    note();
  }

  if (opts.trace_every > 0 &&
      (res.trace.empty() || res.trace.back().k != st.k())) {
    res.trace.push_back({st.k(), st.primal(), st.dual(), st.gap(), st.mu()});
  }
  res.state = st.snapshot();
  res.iterations = st.k();
  res.converged = st.gap() <= stop.gap_target;
  res.q1_clamp_engaged = st.clamp_seen();
  return res;
}

void verify_adjoint(const SaddleProblem& p) {
  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> c(p.primal_dim());
  std::vector<double> u(p.dual_dim());
  std::vector<double> ac(p.dual_dim());
  std::vector<double> atu(p.primal_dim());
  for (int probe = 0; probe < 3; ++probe) {
    for (double& x : c) x = unif(rng);
    for (double& x : u) x = unif(rng);
    p.apply_A(c, ac);
    p.apply_At(u, atu);
    const double lhs = dot(ac, u);
    const double rhs = dot(c, atu);
    if (std::abs(lhs - rhs) > 1e-10 * (1.0 + std::abs(lhs))) {
      throw InvalidInputError("apply_A/apply_At are not adjoint");
    }
  }
}

double power_iteration_sq_norm(const SaddleProblem& p, int iterations) {
  // The dual iterates only ever differ along zero-sum directions (simplex
  // differences), so the Lipschitz requirement is the top eigenvalue of
  // A A^T restricted to that subspace: project out the all-ones component
  // every pass.
  const std::size_t n = p.dual_dim();
  std::vector<double> u(n);
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= (i + 1) * 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    u[i] = static_cast<double>(h >> 11) / 9007199254740992.0 - 0.5;
  }
  std::vector<double> y(p.primal_dim());
  const double inv_n = 1.0 / static_cast<double>(n);
  double lambda = 0.0;
  for (int t = 0; t < iterations; ++t) {
    double mean = 0.0;
    for (double x : u) mean += x;
    mean *= inv_n;
    for (double& x : u) x -= mean;
    const double nn = std::sqrt(norm_sq(u));
    if (nn == 0.0) return 0.0;
    for (double& x : u) x /= nn;
    p.apply_At(u, y);
    lambda = norm_sq(y);  // u^T A A^T u for unit zero-sum u
    p.apply_A(y, u);
  }
  return lambda;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open '" + path + "' for writing");
  out << "k,J,D,gap,mu\n";
  char buf[160];
  for (const TraceRow& r : trace) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g\n", r.k, r.primal,
                  r.dual, r.gap, r.mu);
    out << buf;
  }
}

}  // namespace egmgeom
