#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "egmgeom/diag_qp.hpp"
#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// Saddle problem min_c { eta ||c||^2 + max_{u in simplex} <A c + b, u> },
/// optionally with c restricted to a centered ball of radius q1_radius.
/// Concrete problems expose A only through matrix-vector products and must
/// certify that `lipschitz` dominates the curvature of the dual objective
/// along simplex differences, i.e. L >= ||A A^T||_0 / (2 eta) where the
/// norm is taken over zero-sum vectors.
class SaddleProblem {
 public:
  virtual ~SaddleProblem() = default;

  virtual std::size_t dual_dim() const = 0;
  virtual std::size_t primal_dim() const = 0;
  virtual double eta() const = 0;
  virtual double lipschitz() const = 0;
  virtual const std::vector<double>& linear_term() const = 0;
  /// <= 0 means the primal domain is all of R^d.
  virtual double q1_radius() const { return 0.0; }

  virtual void apply_A(std::span<const double> c, std::span<double> out) const = 0;
  virtual void apply_At(std::span<const double> u, std::span<double> out) const = 0;
};

/// Prox strong-convexity modulus. Free in the analysis and cancelling in
/// every bound; fixed to one here.
inline constexpr double kProxModulus = 1.0;

/// One solver iterate with its cached objective values.
struct EgmState {
  long k = 0;
  std::vector<double> c;
  SimplexVector u{std::vector<double>{1.0}};
  double mu = 0.0;
  double primal = 0.0;           // J(c)
  double dual = 0.0;             // D(u)
  double gap = 0.0;              // J(c) - D(u)
  double smoothed_primal = 0.0;  // J_mu(c)
};

enum class CheckMode {
  kFull,     // verify the excessive-gap invariant every iteration
  kSampled,  // verify every 16th iteration (benchmarking)
};

struct StoppingRule {
  double gap_target = 0.0;
  long iteration_cap = 0;  // a-priori bound; <= 0 disables
  long max_iters = 0;      // hard limit; <= 0 disables
};

enum class StopReason { kGapTarget, kIterationCap, kMaxIters };

struct TraceRow {
  long k;
  double primal;
  double dual;
  double gap;
  double mu;
};

struct RunOptions {
  CheckMode checks = CheckMode::kFull;
  int trace_every = 0;  // 0: no trace; t: record every t-th iteration
};

struct RunResult {
  EgmState state;
  bool converged = false;
  StopReason reason = StopReason::kGapTarget;
  long iterations = 0;
  bool q1_clamp_engaged = false;
  std::vector<TraceRow> trace;
};

/// Uniform simplex vector; the prox center u0.
SimplexVector prox_center(std::size_t n);

/// max over the simplex of (sigma/2)||u - u0||^2, attained at a vertex.
double prox_diameter(std::size_t n);

/// mu_k = 6 L / (sigma (k+1)(k+2)); closed form of the recursive update.
double mu_schedule(double lipschitz, long k);

/// argmin over Q1 of <A c, u> + eta ||c||^2: the closed form -A^T u / (2 eta),
/// radially projected onto the Q1 ball when one is set. `clamped`, if given,
/// reports whether the projection engaged.
std::vector<double> map_c(const SaddleProblem& p, const SimplexVector& u,
                          bool* clamped = nullptr);

/// argmax over the simplex of <A c + b, u> - mu d(u); the mu-smoothed
/// dual response, computed as a scaled simplex projection.
SimplexVector map_u_mu(const SaddleProblem& p, std::span<const double> c,
                       double mu);

/// Gradient-mapping step: argmin over the simplex of
/// (L/2)||v - u||^2 - <grad D(u), v - u>.
SimplexVector map_V(const SaddleProblem& p, const SimplexVector& u);

double primal_value(const SaddleProblem& p, std::span<const double> c);
double dual_value(const SaddleProblem& p, const SimplexVector& u);
double smoothed_primal_value(const SaddleProblem& p, std::span<const double> c,
                             double mu);

/// Initial iterate (k = 1) satisfying the excessive-gap invariant.
EgmState egm_init(const SaddleProblem& p);

/// One excessive-gap update; increments k and refreshes the cached values.
/// Throws GapViolationError if the invariant fails beyond tolerance.
EgmState egm_step(const SaddleProblem& p, const EgmState& s);

/// Iterate until the duality gap meets the target, the a-priori iteration
/// bound is reached, or max_iters runs out (flagged not-converged).
RunResult run(const SaddleProblem& p, const StoppingRule& stop,
              const RunOptions& opts = {});

/// Random-probe adjointness check of apply_A/apply_At; throws on mismatch.
void verify_adjoint(const SaddleProblem& p);

/// Largest eigenvalue of A A^T restricted to zero-sum vectors (the simplex
/// differences the dual iterates actually move along), by power iteration
/// through the problem's operators. Deterministic start vector.
double power_iteration_sq_norm(const SaddleProblem& p, int iterations);

/// Write "k,J,D,gap,mu" rows to a CSV file.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

}  // namespace egmgeom
