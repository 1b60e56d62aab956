#include "egmgeom/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

#include "egmgeom/baselines.hpp"
#include "egmgeom/meb.hpp"

#include "json.hpp"

namespace egmgeom {

PointSet gen_gaussian(long n, long d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInputError("need n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  const auto uniform01 = [&rng] {
    // 53-bit mantissa draw in [0, 1).
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  double spare = 0.0;
  bool have_spare = false;
  for (double& x : coords) {
    if (have_spare) {
      x = spare;
      have_spare = false;
      continue;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    x = r * std::cos(2.0 * M_PI * u2);
    spare = r * std::sin(2.0 * M_PI * u2);
    have_spare = true;
  }
  return PointSet(std::move(coords), static_cast<std::size_t>(d));
}

std::vector<std::pair<long, long>> table1_grid() {
  return {{500, 10},   {1000, 10},  {5000, 20},   {10000, 20},
          {30000, 30}, {50000, 50}, {100000, 100}};
}

std::vector<std::pair<long, long>> desk_grid() {
  return {{500, 10}, {1000, 10}, {5000, 20}};
}

namespace {

struct SolveSample {
  double iters = 0.0;
  double time_s = 0.0;
  double gap = 0.0;
  bool failed = false;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0x517cc1b727220a95ull * (b + 1);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  return h;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  if (cfg.replicates < 1) throw InvalidInputError("replicate count must be >= 1");
  if (cfg.grid.empty()) throw InvalidInputError("empty benchmark grid");

  struct Task {
    std::size_t cell;
    bool ours;
    int replicate;
  };
  std::vector<std::string> solvers;
  if (cfg.run_ours) solvers.push_back("ours");
  if (cfg.run_bc) solvers.push_back("bc");
  if (solvers.empty()) throw InvalidInputError("no solvers selected");

  std::vector<Task> tasks;
  for (std::size_t cell = 0; cell < cfg.grid.size(); ++cell) {
    for (const auto& solver : solvers) {
      for (int rep = 0; rep < cfg.replicates; ++rep) {
        tasks.push_back({cell, solver == "ours", rep});
      }
    }
  }
  std::vector<SolveSample> samples(tasks.size());

  auto run_task = [&](const Task& t) {
    const auto [n, d] = cfg.grid[t.cell];
    SolveSample out;
    try {
      const PointSet ps =
          gen_gaussian(n, d, mix_seed(cfg.seed, t.cell, t.replicate));
      const auto t0 = std::chrono::steady_clock::now();
      if (t.ours) {
        MebSolveOptions opts;
        opts.checks = CheckMode::kSampled;
        const MebResult r = solve_meb_multiplicative(ps, cfg.eps_mult, 0, opts);
        out.iters = static_cast<double>(r.iterations);
        out.gap = r.gap;
      } else {
        const BcResult r = bc_coreset_meb(ps, cfg.eps_mult);
        out.iters = static_cast<double>(r.iterations);
        const double lb = r.ball.radius / (1.0 + cfg.eps_mult);
        out.gap = r.ball.radius_sq - lb * lb;
      }
      const auto t1 = std::chrono::steady_clock::now();
      out.time_s = std::chrono::duration<double>(t1 - t0).count();
    } catch (const Error&) {
      out.failed = true;
    }
    return out;
  };

  const int workers = std::max(1, cfg.threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) samples[i] = run_task(tasks[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          samples[i] = run_task(tasks[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<BenchRecord> records;
  for (std::size_t cell = 0; cell < cfg.grid.size(); ++cell) {
    for (const auto& solver : solvers) {
      BenchRecord rec;
      rec.solver = solver;
      rec.n = cfg.grid[cell].first;
      rec.d = cfg.grid[cell].second;
      rec.eps = cfg.eps_mult;
      int good = 0;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].cell != cell || tasks[i].ours != (solver == "ours")) continue;
        if (samples[i].failed) {
          rec.failures += 1;
          continue;
        }
        rec.mean_iters += samples[i].iters;
        rec.mean_time_s += samples[i].time_s;
        rec.mean_gap += samples[i].gap;
        ++good;
      }
      if (good > 0) {
        rec.mean_iters /= good;
        rec.mean_time_s /= good;
        rec.mean_gap /= good;
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

void write_bench_csv(const std::string& path,
                     const std::vector<BenchRecord>& records) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open '" + path + "' for writing");
  out << "solver,n,d,eps,mean_iters,mean_time_s,mean_gap\n";
  char buf[200];
  for (const BenchRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%ld,%ld,%.17g,%.17g,%.17g,%.17g\n",
                  r.solver.c_str(), r.n, r.d, r.eps, r.mean_iters, r.mean_time_s,
                  r.mean_gap);
    out << buf;
  }
}

void write_bench_metadata_json(const std::string& path, const BenchConfig& cfg) {
  nlohmann::json j;
  j["eps_mult"] = cfg.eps_mult;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["data"] = {{"distribution", "gaussian"},
               {"mean", "zero"},
               {"covariance", "identity"}};
  j["pair_bound"] = "two_pass_farthest_point";
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& [n, d] : cfg.grid) grid.push_back({{"n", n}, {"d", d}});
  j["grid"] = grid;
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace egmgeom
