#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "egmgeom/baselines.hpp"
#include "egmgeom/diag_qp.hpp"
#include "test_support.hpp"

using namespace egmgeom;

namespace {

double qp_objective(const DiagQpInstance& inst, const std::vector<double>& a) {
  double obj = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double t = a[i] - inst.m[i];
    obj += 0.5 * inst.d_sq[i] * t * t;
  }
  return obj;
}

int kink_iteration_bound(std::size_t n) {
  return static_cast<int>(std::ceil(std::log2(2.0 * static_cast<double>(n)))) + 1;
}

}  // namespace

TEST_SUITE_BEGIN("diag_qp");

TEST_CASE("symmetric two-variable instance") {
  DiagQpInstance inst{{1, 1}, {0, 0}, {0, 0}, {1, 1}, {1, 1}, 1.0};
  const auto a = solve_diag_qp(inst);
  CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("interior-at-bounds instance") {
  // lambda* = 0 leaves beta = 0, alpha = m = (1, 0): feasible at the bounds.
  DiagQpInstance inst{{1, 1}, {1, 0}, {0, 0}, {1, 1}, {1, 1}, 1.0};
  const auto a = solve_diag_qp(inst);
  CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eval_f saturation and hand check") {
  ScaledBoxQp qp;
  qp.lo = {-1.0, -2.0, 0.5};
  qp.hi = {2.0, 1.0, 3.0};
  qp.inv_dbar2 = {1.0, 0.5, 2.0};
  qp.rhs = 1.0;
  // far below every kink: all pieces at lo
  CHECK(eval_f(-1e9, qp) == doctest::Approx(-1.0 - 2.0 + 0.5 - 1.0));
  // far above: all pieces at hi
  CHECK(eval_f(1e9, qp) == doctest::Approx(2.0 + 1.0 + 3.0 - 1.0));
  // mid regime, term by term: clamp(0.6,..)+clamp(0.3,..)+clamp(1.2,..)
  CHECK(eval_f(0.6, qp) == doctest::Approx(0.6 + 0.3 + 1.2 - 1.0));
}

TEST_CASE("eval_f is monotone nondecreasing") {
  const DiagQpInstance inst = testing::random_qp(7, 123);
  ScaledBoxQp qp;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (inst.sigma[i] == 0.0) continue;
    const double a = inst.sigma[i] * (inst.l[i] - inst.m[i]);
    const double b = inst.sigma[i] * (inst.u[i] - inst.m[i]);
    qp.lo.push_back(std::min(a, b));
    qp.hi.push_back(std::max(a, b));
    qp.inv_dbar2.push_back(inst.sigma[i] * inst.sigma[i] / inst.d_sq[i]);
  }
  qp.rhs = 0.0;
  double prev = -1e300;
  for (int t = 0; t < 100; ++t) {
    const double lam = -6.0 + 0.12 * t;
    const double v = eval_f(lam, qp);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("root_find_f single linear piece") {
  // no kink crossing: f(lambda) = lambda * sum(inv) - rhs on the bracket
  ScaledBoxQp qp;
  qp.lo = {-10.0, -10.0};
  qp.hi = {10.0, 10.0};
  qp.inv_dbar2 = {1.0, 3.0};
  qp.rhs = 2.0;
  const auto r = root_find_f(qp);
  CHECK(r.lambda == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(eval_f(r.lambda, qp)) <= 1e-9 * (1.0 + std::abs(qp.rhs)));
}

TEST_CASE("root_find_f saturates at a kink") {
  ScaledBoxQp qp;
  qp.lo = {0.0};
  qp.hi = {1.0};
  qp.inv_dbar2 = {1.0};
  qp.rhs = 1.0;
  const auto r = root_find_f(qp);
  CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("median_select conventions") {
  CHECK(median_select(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK(median_select(std::vector<double>{4, 1, 3, 2}) == 2.0);  // lower median
  CHECK(median_select(std::vector<double>{5}) == 5.0);
  CHECK_THROWS_AS(median_select(std::vector<double>{}), InvalidInputError);
}

TEST_CASE("median_select against sort") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-5, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(1 + rng() % 40);
    for (double& x : v) x = t % 3 == 0 ? std::round(unif(rng)) : unif(rng);
    std::vector<double> s(v);
    std::sort(s.begin(), s.end());
    CHECK(median_select(v) == s[(s.size() - 1) / 2]);
  }
}

TEST_CASE("projection basics") {
  const SimplexVector u = project_scaled_simplex(std::vector<double>{2, 2, 2, 2},
                                                 8.0);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25).epsilon(1e-12));
  const SimplexVector v =
      project_scaled_simplex(std::vector<double>{10, 0, 0}, 1.0);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(project_scaled_simplex(std::vector<double>{1.0}, 0.0),
                  InvalidInputError);
}

TEST_CASE("projection matches the oracle") {
  std::mt19937_64 rng(100);
  std::uniform_real_distribution<double> unif(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<double> g(n);
    for (double& x : g) x = unif(rng);
    const double scale = 0.1 + 2.0 * std::abs(unif(rng));
    DiagQpInstance inst;
    inst.d_sq.assign(n, scale);
    inst.m.resize(n);
    for (std::size_t i = 0; i < n; ++i) inst.m[i] = g[i] / scale;
    inst.l.assign(n, 0.0);
    inst.u.assign(n, 1.0);
    inst.sigma.assign(n, 1.0);
    inst.z = 1.0;
    const auto want = dense_qp_oracle(inst);
    const SimplexVector got = project_scaled_simplex(g, scale);
    CHECK(testing::linf(got.weights(), want) <= 1e-9);
  }
}

TEST_CASE("projection survives extreme scale ratios") {
  // scale far below the spread of g: the limit projection is the argmax
  // vertex, and the output must still be an exact simplex point.
  const std::vector<double> g{0.3, 1.7, -0.4, 0.9};
  const SimplexVector u = project_scaled_simplex(g, 1e-12);
  CHECK(u[1] == doctest::Approx(1.0).epsilon(1e-9));
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i];
  CHECK(std::abs(sum - 1.0) <= SimplexVector::kSumTol);
}

TEST_CASE("solver matches the exhaustive oracle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const DiagQpInstance inst = testing::random_qp(n, seed * 31 + 1);
    const auto got = solve_diag_qp_full(inst);
    const auto want = dense_qp_oracle(inst);
    CAPTURE(seed);
    CHECK(testing::linf(got.alpha, want) <= 1e-9);
    CHECK(got.root_iterations <= kink_iteration_bound(n));

    // box exact, equality within tolerance
    double dotz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(got.alpha[i] >= inst.l[i]);
      CHECK(got.alpha[i] <= inst.u[i]);
      dotz += inst.sigma[i] * got.alpha[i];
    }
    CHECK(std::abs(dotz - inst.z) <= 1e-9 * std::max(1.0, std::abs(inst.z)));
  }
}

TEST_CASE("KKT multipliers are signed and complementary") {
  for (std::uint64_t seed = 1; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const DiagQpInstance inst = testing::random_qp(n, seed * 77);
    const auto sol = solve_diag_qp_full(inst);
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.sigma[i] == 0.0) continue;
      const double s = inst.sigma[i];
      const double lo = s > 0 ? s * (inst.l[i] - inst.m[i]) : s * (inst.u[i] - inst.m[i]);
      const double hi = s > 0 ? s * (inst.u[i] - inst.m[i]) : s * (inst.l[i] - inst.m[i]);
      const double dbar2 = inst.d_sq[i] / (s * s);
      const double beta = s * (sol.alpha[i] - inst.m[i]);
      const double rho_plus = std::max(dbar2 * lo - sol.lambda, 0.0);
      const double rho_minus = std::max(sol.lambda - dbar2 * hi, 0.0);
      CHECK(rho_plus >= 0.0);
      CHECK(rho_minus >= 0.0);
      CHECK(std::abs(rho_plus * (beta - lo)) <= 1e-8 * (1.0 + std::abs(beta)));
      CHECK(std::abs(rho_minus * (beta - hi)) <= 1e-8 * (1.0 + std::abs(beta)));
      if (rho_plus == 0.0 && rho_minus == 0.0) {
        // interior piece: stationarity beta = lambda / dbar2
        CHECK(beta == doctest::Approx(sol.lambda / dbar2).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("objective optimality along feasible segments") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::uint64_t seed : {5ull, 17ull, 40ull}) {
    const std::size_t n = 4 + seed % 3;
    const DiagQpInstance inst = testing::random_qp(n, seed);
    const auto a = solve_diag_qp(inst);
    const double base = qp_objective(inst, a);
    int tried = 0;
    for (int t = 0; t < 5000 && tried < 1000; ++t) {
      // feasible direction: move a pair without breaking the equality
      const std::size_t i = rng() % n;
      const std::size_t j = rng() % n;
      if (i == j || inst.sigma[i] == 0.0 || inst.sigma[j] == 0.0) continue;
      std::vector<double> v(a);
      const double wi = inst.sigma[j];
      const double wj = -inst.sigma[i];
      double tmax = 1e18;
      auto cap = [&](std::size_t k, double w) {
        if (w > 0) tmax = std::min(tmax, (inst.u[k] - v[k]) / w);
        if (w < 0) tmax = std::min(tmax, (inst.l[k] - v[k]) / w);
      };
      cap(i, wi);
      cap(j, wj);
      if (!(tmax > 0.0) || tmax > 1e17) continue;
      const double step = unif(rng) * tmax;
      v[i] += step * wi;
      v[j] += step * wj;
      ++tried;
      CHECK(base <= qp_objective(inst, v) + 1e-9);
    }
    CHECK(tried >= 500);
  }
}

TEST_CASE("invalid inputs are rejected") {
  DiagQpInstance inst = testing::random_qp(3, 2);
  inst.d_sq[0] = 0.0;
  CHECK_THROWS_AS(solve_diag_qp(inst), InvalidInputError);
  inst = testing::random_qp(3, 2);
  inst.l[1] = inst.u[1];
  CHECK_THROWS_AS(solve_diag_qp(inst), InvalidInputError);
  inst = testing::random_qp(3, 2);
  inst.m[2] = std::nan("");
  CHECK_THROWS_AS(solve_diag_qp(inst), InvalidInputError);
}

TEST_CASE("infeasible target is signalled") {
  DiagQpInstance inst{{1, 1}, {0, 0}, {0, 0}, {1, 1}, {1, 1}, 5.0};
  CHECK_THROWS_AS(solve_diag_qp(inst), InfeasibleError);
  inst.z = -1.0;
  CHECK_THROWS_AS(solve_diag_qp(inst), InfeasibleError);
}

TEST_CASE("sigma zero coordinates decouple") {
  DiagQpInstance inst{{2, 1, 1}, {5.0, 0, 0}, {0, 0, 0}, {1, 1, 1}, {0, 1, 1}, 1.0};
  const auto a = solve_diag_qp(inst);
  CHECK(a[0] == 1.0);  // clamp(m0) = clamp(5) = u0
  CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(a[2] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_SUITE_END();
