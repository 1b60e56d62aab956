#include "egmgeom/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "egmgeom/applications.hpp"
#include "egmgeom/baselines.hpp"
#include "egmgeom/bench.hpp"
#include "egmgeom/csv_io.hpp"
#include "egmgeom/meb.hpp"
#include "egmgeom/mecp.hpp"

namespace egmgeom {

namespace {

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

int run_gen(long n, long d, std::uint64_t seed, const std::string& output) {
  write_points_csv(output, gen_gaussian(n, d, seed));
  std::printf("wrote %ld x %ld gaussian points to %s\n", n, d, output.c_str());
  return 0;
}

int run_meb(const std::string& input, double eps, const std::string& mode,
            long max_iters, bool tight_l, const std::string& trace_path,
            const std::string& output) {
  const PointSet ps = read_points_csv(input);
  MebSolveOptions opts;
  if (tight_l) opts.lipschitz = LipschitzMode::kTight;
  if (!trace_path.empty()) opts.trace_every = 1;

  MebResult res;
  if (mode == "add") {
    res = solve_meb_additive(ps, eps, max_iters, opts);
  } else if (mode == "mult") {
    res = solve_meb_multiplicative(ps, eps, max_iters, opts);
  } else {
    throw InvalidInputError("--mode must be add or mult");
  }

  if (!trace_path.empty()) write_trace_csv(trace_path, res.trace);
  nlohmann::json j;
  j["center"] = res.ball.center;
  j["radius"] = res.ball.radius;
  j["radius_sq"] = res.ball.radius_sq;
  j["iterations"] = res.iterations;
  j["gap"] = res.gap;
  j["converged"] = res.converged;
  j["mode"] = res.mode;
  j["eps"] = res.eps;
  write_json(output, j);
  std::printf("meb: n=%zu d=%zu mode=%s iters=%ld radius=%.12g gap=%.3e%s\n",
              ps.size(), ps.dim(), res.mode.c_str(), res.iterations,
              res.ball.radius, res.gap,
              res.converged           ? ""
              : res.reason == StopReason::kIterationCap
                  ? " (stopped at the a-priori cap; gap above target)"
                  : " (not converged: max-iters)");
  return res.converged || res.reason == StopReason::kIterationCap ? 0 : 1;
}

int run_mecp(const std::string& input, const std::string& shape_path, double eps,
             double q1, long max_iters, const std::string& trace_path,
             const std::string& output) {
  const PointSet ps = read_points_csv(input);
  const PolytopeShape shape = read_shape_csv(shape_path);
  MecpSolveOptions opts;
  if (!trace_path.empty()) opts.trace_every = 1;
  const MecpResult res = solve_mecp(shape, ps, eps, q1, max_iters, opts);

  if (!trace_path.empty()) write_trace_csv(trace_path, res.trace);
  nlohmann::json j;
  j["center"] = res.fit.center;
  j["magnification"] = res.fit.magnification;
  j["iterations"] = res.iterations;
  j["gap"] = res.gap;
  j["converged"] = res.converged;
  j["q1_clamped"] = res.q1_clamped;
  j["eps"] = res.eps;
  write_json(output, j);
  std::printf("mecp: m=%zu n=%zu iters=%ld magnification=%.12g gap=%.3e%s%s\n",
              shape.faces(), ps.size(), res.iterations, res.fit.magnification,
              res.gap, res.q1_clamped ? " (Q1 projection engaged)" : "",
              res.converged ? "" : " (not converged)");
  return res.converged || res.reason == StopReason::kIterationCap ? 0 : 1;
}

int run_polydist(const std::string& input, double eps, long max_iters,
                 const std::string& trace_path, const std::string& output) {
  const PointSet ps = read_points_csv(input);
  AppSolveOptions opts;
  if (!trace_path.empty()) opts.trace_every = 1;
  const PolytopeDistanceResult res = polytope_distance(ps, eps, max_iters, opts);

  if (!trace_path.empty()) write_trace_csv(trace_path, res.trace);
  nlohmann::json j;
  j["distance"] = res.distance;
  j["nearest_point"] = res.nearest_point;
  j["weights"] = res.witness.weights();
  j["iterations"] = res.iterations;
  j["gap"] = res.gap;
  j["converged"] = res.converged;
  j["eps"] = eps;
  write_json(output, j);
  std::printf("polydist: n=%zu d=%zu iters=%ld distance=%.12g%s\n", ps.size(),
              ps.dim(), res.iterations, res.distance,
              res.converged ? "" : " (not converged)");
  return res.converged || res.reason == StopReason::kIterationCap ? 0 : 1;
}

int run_margin(const std::string& input, double eps, long max_iters,
               const std::string& trace_path, const std::string& output) {
  const LabeledDataset ds = read_labeled_csv(input);
  AppSolveOptions opts;
  if (!trace_path.empty()) opts.trace_every = 1;
  const MarginResult res = max_margin(ds, eps, max_iters, opts);

  if (!trace_path.empty()) write_trace_csv(trace_path, res.trace);
  nlohmann::json j;
  j["direction"] = res.direction;
  j["margin"] = res.margin;
  j["iterations"] = res.iterations;
  j["gap"] = res.gap;
  j["converged"] = res.converged;
  j["separable"] = res.separable;
  j["eps"] = eps;
  write_json(output, j);
  std::printf("margin: m=%zu iters=%ld margin=%.12g separable=%s%s\n", ds.size(),
              res.iterations, res.margin, res.separable ? "yes" : "no",
              res.converged ? "" : " (not converged)");
  return res.converged || res.reason == StopReason::kIterationCap ? 0 : 1;
}

int run_bench_cmd(const std::string& grid, const std::string& solvers,
                  double eps, int replicates, std::uint64_t seed, int threads,
                  const std::string& output, const std::string& meta) {
  BenchConfig cfg;
  if (grid == "table1") {
    cfg.grid = table1_grid();
  } else if (grid == "desk") {
    cfg.grid = desk_grid();
  } else {
    throw InvalidInputError("--grid must be table1 or desk");
  }
  cfg.eps_mult = eps;
  cfg.replicates = replicates;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.run_ours = solvers.find("ours") != std::string::npos;
  cfg.run_bc = solvers.find("bc") != std::string::npos;

  const auto records = run_bench(cfg);
  if (!output.empty()) write_bench_csv(output, records);
  if (!meta.empty()) write_bench_metadata_json(meta, cfg);
  std::printf("solver        n     d   mean_iters   mean_time_s     mean_gap\n");
  for (const auto& r : records) {
    std::printf("%-6s %8ld %5ld %12.1f %13.4f %12.3e%s\n", r.solver.c_str(), r.n,
                r.d, r.mean_iters, r.mean_time_s, r.mean_gap,
                r.failures ? " (failures!)" : "");
  }
  return 0;
}

int run_qp_check(int n, int trials, std::uint64_t seed) {
  if (n < 1 || n > 8) throw InvalidInputError("--n must be in [1, 8]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    DiagQpInstance inst;
    inst.d_sq.resize(n);
    inst.m.resize(n);
    inst.l.resize(n);
    inst.u.resize(n);
    inst.sigma.resize(n);
    for (int i = 0; i < n; ++i) {
      inst.d_sq[i] = unit(rng) * 3.0;
      inst.m[i] = unif(rng);
      const double a = unif(rng), b = unif(rng);
      inst.l[i] = std::min(a, b) - 0.05;
      inst.u[i] = std::max(a, b) + 0.05;
      inst.sigma[i] = (t % 4 == 0 && i == 0) ? 0.0 : unif(rng);
    }
    double zmin = 0.0, zmax = 0.0;
    for (int i = 0; i < n; ++i) {
      if (inst.sigma[i] > 0) {
        zmin += inst.sigma[i] * inst.l[i];
        zmax += inst.sigma[i] * inst.u[i];
      } else {
        zmin += inst.sigma[i] * inst.u[i];
        zmax += inst.sigma[i] * inst.l[i];
      }
    }
    const double theta = unit(rng);
    inst.z = zmin + theta * (zmax - zmin);
    const auto got = solve_diag_qp(inst);
    const auto want = dense_qp_oracle(inst);
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  std::printf("qp-check: n=%d trials=%d max deviation vs oracle = %.3e\n", n,
              trials, worst);
  return worst <= 1e-9 ? 0 : 1;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
  CLI::App app{"Enclosing-ball and enclosing-polytope solvers (smoothed "
               "first-order methods with duality-gap certificates)"};
  app.require_subcommand(1);

  // gen
  long gen_n = 100, gen_d = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate gaussian points as CSV");
  gen->add_option("--n", gen_n, "number of points")->required();
  gen->add_option("--d", gen_d, "dimension")->required();
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--output", gen_out, "output CSV path")->required();

  // meb
  std::string meb_in, meb_mode = "mult", meb_trace, meb_out;
  double meb_eps = 1e-3;
  long meb_iters = 100000;
  bool meb_tight = false;
  auto* meb = app.add_subcommand("meb", "Minimum enclosing ball");
  meb->add_option("--input", meb_in, "points CSV")->required();
  meb->add_option("--eps", meb_eps, "tolerance");
  meb->add_option("--mode", meb_mode, "add | mult");
  meb->add_option("--max-iters", meb_iters, "hard iteration limit");
  meb->add_flag("--tight-l", meb_tight, "thinner certified Lipschitz margin");
  meb->add_option("--trace", meb_trace, "per-iteration trace CSV");
  meb->add_option("--output", meb_out, "result JSON path");

  // mecp
  std::string mecp_in, mecp_shape, mecp_trace, mecp_out;
  double mecp_eps = 1e-3, mecp_q1 = 0.0;
  long mecp_iters = 1000000;
  auto* mecp = app.add_subcommand("mecp", "Minimum enclosing convex polytope");
  mecp->add_option("--input", mecp_in, "points CSV")->required();
  mecp->add_option("--shape", mecp_shape, "shape CSV (normals then offset)")
      ->required();
  mecp->add_option("--eps", mecp_eps, "tolerance");
  mecp->add_option("--q1", mecp_q1, "primal ball radius (default: data radius)");
  mecp->add_option("--max-iters", mecp_iters, "hard iteration limit");
  mecp->add_option("--trace", mecp_trace, "per-iteration trace CSV");
  mecp->add_option("--output", mecp_out, "result JSON path");

  // polydist
  std::string pd_in, pd_trace, pd_out;
  double pd_eps = 1e-6;
  long pd_iters = 10000000;
  auto* pd = app.add_subcommand("polydist", "Distance of conv(S) from the origin");
  pd->add_option("--input", pd_in, "points CSV")->required();
  pd->add_option("--eps", pd_eps, "tolerance on squared distance");
  pd->add_option("--max-iters", pd_iters, "hard iteration limit");
  pd->add_option("--trace", pd_trace, "per-iteration trace CSV");
  pd->add_option("--output", pd_out, "result JSON path");

  // margin
  std::string mg_in, mg_trace, mg_out;
  double mg_eps = 1e-3;
  long mg_iters = 10000000;
  auto* mg = app.add_subcommand("margin", "Maximum-margin direction");
  mg->add_option("--input", mg_in, "labeled CSV (+1/-1 last column)")->required();
  mg->add_option("--eps", mg_eps, "tolerance");
  mg->add_option("--max-iters", mg_iters, "hard iteration limit");
  mg->add_option("--trace", mg_trace, "per-iteration trace CSV");
  mg->add_option("--output", mg_out, "result JSON path");

  // bench
  std::string bn_grid = "table1", bn_solvers = "ours,bc", bn_out, bn_meta;
  double bn_eps = 1e-3;
  int bn_reps = 5, bn_threads = 1;
  std::uint64_t bn_seed = 0;
  auto* bn = app.add_subcommand("bench", "Grid benchmark (ours vs farthest-point baseline)");
  bn->add_option("--grid", bn_grid, "table1 | desk");
  bn->add_option("--solvers", bn_solvers, "comma list from {ours, bc}");
  bn->add_option("--eps", bn_eps, "multiplicative tolerance");
  bn->add_option("--replicates", bn_reps, "datasets per cell");
  bn->add_option("--seed", bn_seed, "base rng seed");
  bn->add_option("--threads", bn_threads, "parallel replicate solves");
  bn->add_option("--output", bn_out, "summary CSV path");
  bn->add_option("--json", bn_meta, "metadata JSON path");

  // qp-check
  int qp_n = 6, qp_trials = 200;
  std::uint64_t qp_seed = 0;
  auto* qp = app.add_subcommand("qp-check", "Fuzz the QP kernel against the exhaustive oracle");
  qp->add_option("--n", qp_n, "variables per instance (<= 8)");
  qp->add_option("--trials", qp_trials, "number of random instances");
  qp->add_option("--seed", qp_seed, "rng seed");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return run_gen(gen_n, gen_d, gen_seed, gen_out);
    if (meb->parsed())
      return run_meb(meb_in, meb_eps, meb_mode, meb_iters, meb_tight, meb_trace,
                     meb_out);
    if (mecp->parsed())
      return run_mecp(mecp_in, mecp_shape, mecp_eps, mecp_q1, mecp_iters,
                      mecp_trace, mecp_out);
    if (pd->parsed()) return run_polydist(pd_in, pd_eps, pd_iters, pd_trace, pd_out);
    if (mg->parsed()) return run_margin(mg_in, mg_eps, mg_iters, mg_trace, mg_out);
    if (bn->parsed())
      return run_bench_cmd(bn_grid, bn_solvers, bn_eps, bn_reps, bn_seed,
                           bn_threads, bn_out, bn_meta);
    if (qp->parsed()) return run_qp_check(qp_n, qp_trials, qp_seed);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const GapViolationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace egmgeom
