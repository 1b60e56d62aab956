#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "egmgeom/geometry.hpp"

namespace egmgeom {

/// Experiment grid configuration. Defaults mirror the benchmark protocol:
/// 5 replicates per cell at eps = 1e-3 over the standard n >> d grid.
struct BenchConfig {
  std::vector<std::pair<long, long>> grid;  // (n, d) cells
  double eps_mult = 1e-3;
  int replicates = 5;
  std::uint64_t seed = 0;
  bool run_ours = true;
  bool run_bc = true;
  int threads = 1;
};

struct BenchRecord {
  std::string solver;  // "ours" or "bc"
  long n = 0;
  long d = 0;
  double eps = 0.0;
  double mean_iters = 0.0;
  double mean_time_s = 0.0;
  double mean_gap = 0.0;
  int failures = 0;  // solves that threw; excluded from the means
};

/// i.i.d. standard-normal coordinates, deterministic for a fixed seed
/// (own Box-Muller over a mt19937_64 stream, so the stream does not depend
/// on the platform's distribution implementation).
PointSet gen_gaussian(long n, long d, std::uint64_t seed);

/// The full n >> d benchmark grid.
std::vector<std::pair<long, long>> table1_grid();

/// The three desk-scale rows used by the acceptance suite.
std::vector<std::pair<long, long>> desk_grid();

/// Run the grid. One record per (solver, cell); replicate solves may run
/// in parallel across `threads` workers, aggregation order is fixed.
/// For "ours" the gap column is the final duality gap; for "bc" it is the
/// certificate width r^2 - lb^2.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

void write_bench_csv(const std::string& path,
                     const std::vector<BenchRecord>& records);

/// Machine-readable sidecar with the config and data-generation choices.
void write_bench_metadata_json(const std::string& path, const BenchConfig& cfg);

}  // namespace egmgeom
