#include "doctest.h"

#include <cmath>

#include "egmgeom/baselines.hpp"
#include "egmgeom/egm.hpp"
#include "egmgeom/meb.hpp"
#include "test_support.hpp"

using namespace egmgeom;

namespace {

// A = 0 with a fixed linear term; isolates the prox machinery.
class ZeroProblem final : public SaddleProblem {
 public:
  ZeroProblem(std::vector<double> b, double lipschitz)
      : b_(std::move(b)), lipschitz_(lipschitz) {}
  std::size_t dual_dim() const override { return b_.size(); }
  std::size_t primal_dim() const override { return 1; }
  double eta() const override { return 1.0; }
  double lipschitz() const override { return lipschitz_; }
  const std::vector<double>& linear_term() const override { return b_; }
  void apply_A(std::span<const double>, std::span<double> out) const override {
    for (double& x : out) x = 0.0;
  }
  void apply_At(std::span<const double>, std::span<double> out) const override {
    for (double& x : out) x = 0.0;
  }

 private:
  std::vector<double> b_;
  double lipschitz_;
};

// Forwards to an inner problem but reports a different Lipschitz constant.
class LipschitzOverride final : public SaddleProblem {
 public:
  LipschitzOverride(const SaddleProblem& inner, double lipschitz)
      : inner_(inner), lipschitz_(lipschitz) {}
  std::size_t dual_dim() const override { return inner_.dual_dim(); }
  std::size_t primal_dim() const override { return inner_.primal_dim(); }
  double eta() const override { return inner_.eta(); }
  double lipschitz() const override { return lipschitz_; }
  const std::vector<double>& linear_term() const override {
    return inner_.linear_term();
  }
  double q1_radius() const override { return inner_.q1_radius(); }
  void apply_A(std::span<const double> c, std::span<double> out) const override {
    inner_.apply_A(c, out);
  }
  void apply_At(std::span<const double> u, std::span<double> out) const override {
    inner_.apply_At(u, out);
  }

 private:
  const SaddleProblem& inner_;
  double lipschitz_;
};

class BrokenAdjoint final : public SaddleProblem {
 public:
  std::size_t dual_dim() const override { return 2; }
  std::size_t primal_dim() const override { return 2; }
  double eta() const override { return 1.0; }
  double lipschitz() const override { return 1.0; }
  const std::vector<double>& linear_term() const override { return b_; }
  void apply_A(std::span<const double> c, std::span<double> out) const override {
    out[0] = c[0];
    out[1] = c[1];
  }
  void apply_At(std::span<const double> u, std::span<double> out) const override {
    out[0] = -u[0];  // wrong sign
    out[1] = u[1];
  }

 private:
  std::vector<double> b_{0.0, 0.0};
};

PointSet two_point_instance() { return PointSet({-1.0, 0.0, 1.0, 0.0}, 2); }

}  // namespace

TEST_SUITE_BEGIN("egm");

TEST_CASE("prox center and prox diameter") {
  CHECK(prox_center(1).weights() == std::vector<double>{1.0});
  const SimplexVector u4 = prox_center(4);
  for (int i = 0; i < 4; ++i) CHECK(u4[i] == doctest::Approx(0.25));

  for (std::size_t n : {1ul, 2ul, 5ul, 40ul}) {
    const SimplexVector u0 = prox_center(n);
    // d(u0) = 0 by construction; the max over the simplex sits at a vertex
    double vertex_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = (i == j ? 1.0 : 0.0) - u0[i];
        s += t * t;
      }
      vertex_max = std::max(vertex_max, 0.5 * kProxModulus * s);
    }
    CHECK(prox_diameter(n) == doctest::Approx(vertex_max).epsilon(1e-12));
    CHECK(prox_diameter(n) <= 0.5 * kProxModulus + 1e-15);
  }
}

TEST_CASE("mu schedule closed form vs recursion") {
  const double L = 3.7;
  CHECK(mu_schedule(L, 1) == doctest::Approx(L).epsilon(1e-15));
  for (long k = 1; k < 50; ++k) {
    const double tau = 2.0 / static_cast<double>(k + 3);
    CHECK(mu_schedule(L, k + 1) ==
          doctest::Approx((1.0 - tau) * mu_schedule(L, k)).epsilon(1e-14));
  }
}

TEST_CASE("map_c closed forms") {
  const PointSet ps = testing::gaussian_points(6, 3, 21);
  const MebProblem prob(ps);

  // u = e_j gives back the point itself
  std::vector<double> ej(6, 0.0);
  ej[2] = 1.0;
  const auto c = map_c(prob, SimplexVector(ej));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(c[j] == doctest::Approx(ps.point(2)[j]).epsilon(1e-14));
  }

  const PointSet pair = two_point_instance();
  const MebProblem pair_prob(pair);
  const auto mid = map_c(pair_prob, SimplexVector::uniform(2));
  CHECK(mid[0] == doctest::Approx(0.0));
  CHECK(mid[1] == doctest::Approx(0.0));
}

TEST_CASE("map_c against a dense oracle and stationarity") {
  const PointSet ps = testing::gaussian_points(8, 4, 22);
  const MebProblem prob(ps);
  const SimplexVector u = testing::random_simplex(8, 3);

  std::vector<double> want(4, 0.0);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      want[j] += u[i] * ps.point(i)[j];  // -1/2 A^T u with A = -2X
    }
  }
  const auto c = map_c(prob, u);
  CHECK(testing::linf(c, want) <= 1e-12);

  // gradient of <Ac,u> + eta ||c||^2 vanishes at the output
  std::vector<double> atu(4);
  prob.apply_At(u.weights(), atu);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(atu[j] + 2.0 * prob.eta() * c[j]) <= 1e-10);
  }
}

TEST_CASE("map_u_mu prox limits") {
  // constant coupling term: the prox center wins at any mu
  const PointSet same = PointSet({2.0, 1.0, 2.0, 1.0, 2.0, 1.0}, 2);
  const MebProblem prob(same);
  const std::vector<double> c{0.3, -0.4};
  const SimplexVector g1 = map_u_mu(prob, c, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(g1[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }

  // huge mu: output approaches the prox center
  const PointSet ps = testing::gaussian_points(5, 2, 23);
  const MebProblem p2(ps);
  const SimplexVector g2 = map_u_mu(p2, std::vector<double>{1.0, -2.0}, 1e9);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(std::abs(g2[i] - 0.2) <= 1e-6);
  }
}

TEST_CASE("map_u_mu matches the exhaustive oracle") {
  const PointSet ps = testing::gaussian_points(5, 3, 24);
  const MebProblem prob(ps);
  const std::vector<double> c{0.5, 0.1, -0.2};
  const double mu = 0.8;

  std::vector<double> g(5);
  prob.apply_A(c, g);
  for (std::size_t i = 0; i < 5; ++i) {
    g[i] += prob.linear_term()[i] + mu * kProxModulus * 0.2;
  }
  DiagQpInstance inst;
  inst.d_sq.assign(5, mu * kProxModulus);
  inst.m.resize(5);
  for (std::size_t i = 0; i < 5; ++i) inst.m[i] = g[i] / (mu * kProxModulus);
  inst.l.assign(5, 0.0);
  inst.u.assign(5, 1.0);
  inst.sigma.assign(5, 1.0);
  inst.z = 1.0;
  const auto want = dense_qp_oracle(inst);
  const SimplexVector got = map_u_mu(prob, c, mu);
  CHECK(testing::linf(got.weights(), want) <= 1e-9);
}

TEST_CASE("map_V fixed points and limits") {
  // zero dual gradient: V(u) = u
  const ZeroProblem zero({0.0, 0.0, 0.0}, 2.0);
  const SimplexVector u = testing::random_simplex(3, 5);
  const SimplexVector v = map_V(zero, u);
  CHECK(testing::linf(v.weights(), u.weights()) <= 1e-12);

  // huge L: V(u) -> u
  const PointSet ps = testing::gaussian_points(6, 2, 25);
  const MebProblem prob(ps);
  const LipschitzOverride frozen(prob, 1e12);
  const SimplexVector u2 = testing::random_simplex(6, 6);
  const SimplexVector v2 = map_V(frozen, u2);
  CHECK(testing::linf(v2.weights(), u2.weights()) <= 1e-6);
}

TEST_CASE("map_V matches the exhaustive oracle") {
  const PointSet ps = testing::gaussian_points(6, 2, 26);
  const MebProblem prob(ps);
  const SimplexVector u = testing::random_simplex(6, 7);
  const double L = prob.lipschitz();

  const auto grad = meb_dual_gradient(ps, u);
  DiagQpInstance inst;
  inst.d_sq.assign(6, L);
  inst.m.resize(6);
  for (std::size_t i = 0; i < 6; ++i) inst.m[i] = (L * u[i] + grad[i]) / L;
  inst.l.assign(6, 0.0);
  inst.u.assign(6, 1.0);
  inst.sigma.assign(6, 1.0);
  inst.z = 1.0;
  const auto want = dense_qp_oracle(inst);
  const SimplexVector got = map_V(prob, u);
  CHECK(testing::linf(got.weights(), want) <= 1e-8);
}

TEST_CASE("egm_init on the two-point instance") {
  const PointSet pair = two_point_instance();
  const MebProblem prob(pair);
  const EgmState s = egm_init(prob);
  CHECK(s.k == 1);
  CHECK(s.c[0] == doctest::Approx(0.0));
  CHECK(s.c[1] == doctest::Approx(0.0));
  CHECK(s.mu == doctest::Approx(prob.lipschitz() / kProxModulus));
  CHECK(s.mu == doctest::Approx(mu_schedule(prob.lipschitz(), 1)));
  CHECK(s.gap == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("egm_init invariant holds on random instances") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const long n = 2 + static_cast<long>(seed % 12);
    const long d = 1 + static_cast<long>(seed % 5);
    const PointSet ps = testing::gaussian_points(n, d, 300 + seed);
    const MebProblem prob(ps);
    const EgmState s = egm_init(prob);  // throws on violation
    CHECK(s.smoothed_primal <= s.dual + 1e-8 * (1.0 + std::abs(s.dual)));
  }
}

TEST_CASE("egm_step schedule algebra") {
  const PointSet ps = testing::gaussian_points(7, 3, 33);
  const MebProblem prob(ps);
  const double L = prob.lipschitz();
  EgmState s = egm_init(prob);
  s = egm_step(prob, s);
  CHECK(s.k == 2);
  CHECK(s.mu == doctest::Approx(0.5 * L).epsilon(1e-14));  // tau_1 = 1/2
  s = egm_step(prob, s);
  CHECK(s.k == 3);
  CHECK(s.mu == doctest::Approx(6.0 * L / 20.0).epsilon(1e-14));  // tau_2 = 0.4
}

TEST_CASE("two hundred steps keep every engine invariant") {
  const PointSet ps = testing::gaussian_points(25, 3, 77);
  const MebProblem prob(ps);
  const double L = prob.lipschitz();
  const double dcal = prox_diameter(ps.size());
  EgmState s = egm_init(prob);
  for (int t = 0; t < 200; ++t) {
    s = egm_step(prob, s);  // throws on excessive-gap violation
    const double k = static_cast<double>(s.k);
    // closed form of the annealing schedule, tight relative tolerance
    CHECK(s.mu == doctest::Approx(6.0 * L / (k + 1.0) / (k + 2.0)).epsilon(1e-12));
    // duality gap bound with the problem's own constants
    CHECK(s.gap <= 6.0 * L * dcal / (kProxModulus * (k + 1.0) * (k + 2.0)) + 1e-8);
    // smoothing sandwich
    CHECK(s.smoothed_primal <= s.primal + 1e-8);
    CHECK(s.primal <= s.smoothed_primal + s.mu * dcal + 1e-8);
    // weak duality
    CHECK(s.gap >= -1e-8 * (1.0 + std::abs(s.dual)));
    // tau-mu inequality used in the convergence proof
    const double tau_prev = 2.0 / (k + 2.0);
    CHECK(s.mu >= tau_prev * tau_prev * L / kProxModulus - 1e-12 * L);
  }
}

TEST_CASE("run reaches the analytic optimum on the pair instance") {
  const PointSet pair = two_point_instance();
  const MebProblem prob(pair);
  StoppingRule rule{1e-6, 1000, 100000};
  const RunResult r = run(prob, rule);
  CHECK(r.converged);
  CHECK(std::abs(r.state.c[0]) <= 1e-3);
  CHECK(std::abs(r.state.c[1]) <= 1e-3);
  CHECK(r.state.primal == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("run respects caps, max_iters and trace thinning") {
  const PointSet ps = testing::gaussian_points(40, 4, 55);
  const MebProblem prob(ps);

  StoppingRule capped{0.0, 17, 0};
  RunOptions opts;
  opts.trace_every = 5;
  const RunResult r1 = run(prob, capped, opts);
  CHECK(r1.iterations == 17);
  CHECK(r1.reason == StopReason::kIterationCap);
  CHECK_FALSE(r1.converged);
  REQUIRE(!r1.trace.empty());
  CHECK(r1.trace.front().k == 1);
  CHECK(r1.trace.back().k == 17);
  for (const TraceRow& row : r1.trace) {
    CHECK((row.k == 1 || row.k % 5 == 0 || row.k == 17));
  }

  StoppingRule truncated{0.0, 0, 3};
  const RunResult r2 = run(prob, truncated);
  CHECK(r2.iterations == 3);
  CHECK(r2.reason == StopReason::kMaxIters);
  CHECK_FALSE(r2.converged);
}

TEST_CASE("a too small Lipschitz constant raises gap-violation") {
  const PointSet ps = testing::gaussian_points(55, 2, 1234);
  const MebProblem prob(ps);
  const LipschitzOverride weak(prob, prob.lipschitz() / 50.0);
  StoppingRule rule{1e-9, 0, 5000};
  CHECK_THROWS_AS(run(weak, rule), GapViolationError);
}

TEST_CASE("adjointness probe") {
  CHECK_THROWS_AS(verify_adjoint(BrokenAdjoint{}), InvalidInputError);
  const PointSet ps = testing::gaussian_points(9, 3, 8);
  CHECK_NOTHROW(verify_adjoint(MebProblem(ps)));
}

TEST_CASE("power iteration finds the top eigenvalue") {
  // antipodal pair: A A^T = [[4,-4],[-4,4]], top eigenvalue 8
  const PointSet pair = two_point_instance();
  const MebProblem prob(pair);
  CHECK(power_iteration_sq_norm(prob, 60) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_SUITE_END();
