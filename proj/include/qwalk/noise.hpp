#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace qwalk {

/// Time-independent couplings drawn uniformly from [c0 - delta/2, c0 + delta/2].
struct StaticNoise {
  double c0 = 1.0;
  double delta = 0.0;
};

/// Couplings nu * Q(t) with Q a +-1 random telegraph signal of flip rate gamma.
struct TelegraphNoise {
  double nu = 1.0;
  double gamma = 0.0;
};

using NoiseModel = std::variant<StaticNoise, TelegraphNoise>;

/// Throws InputError when parameters are out of range or non-finite.
void validate_noise(const NoiseModel& model);

/// Common: both particles see the same realization on every edge.
/// Independent: each particle has its own processes.
enum class EnvironmentTopology { Common, Independent };

std::string_view to_string(EnvironmentTopology topo);

using RandomStream = std::mt19937_64;

/// Private stream for one Monte Carlo run, derived from (master_seed,
/// run_index) by SplitMix64 finalization.
RandomStream run_stream(std::uint64_t master_seed, std::uint64_t run_index);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(RandomStream& rng);

struct StaticCouplings {
  std::vector<double> a;
  std::vector<double> b;
};

StaticCouplings sample_static_couplings(const StaticNoise& model,
                                        std::size_t n_sites,
                                        EnvironmentTopology topo,
                                        RandomStream& rng);

struct TelegraphProcess {
  int initial_sign = 1;
  std::vector<double> flip_times;  // strictly increasing, inside (0, horizon)

  /// Sign after all flips at times <= t.
  int sign_at(double t) const;
};

/// One record per process. Ordering: edge j of the ring is process j; with an
/// independent environment particle B's edge j is process N + j.
struct TelegraphTrajectory {
  double horizon = 0.0;
  std::vector<TelegraphProcess> processes;
};

/// Number of telegraph processes needed for a ring of n_sites sites.
std::size_t telegraph_process_count(std::size_t n_sites,
                                    EnvironmentTopology topo);

/// Stationary start (+-1 equiprobable) and exponential waiting times drawn by
/// inverse CDF; flips at or beyond the horizon are dropped.
TelegraphTrajectory sample_rtn_trajectory(const TelegraphNoise& model,
                                          std::size_t n_processes,
                                          double horizon, RandomStream& rng);

struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> couplings_a;
  std::vector<double> couplings_b;
};

/// Piecewise-constant coupling schedule tiling [0, grid.back()].
struct Schedule {
  std::vector<Segment> segments;
};

/// Cuts [0, grid.back()] at every grid time and, for telegraph noise, every
/// flip time. Exactly one of `static_couplings` / `trajectory` must be given,
/// matching the model kind. The grid must start at 0 and increase strictly.
Schedule build_schedule(const std::optional<StaticCouplings>& static_couplings,
                        const std::optional<TelegraphTrajectory>& trajectory,
                        const NoiseModel& model, EnvironmentTopology topo,
                        std::span<const double> grid);

}  // namespace qwalk
