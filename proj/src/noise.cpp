#include "qwalk/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

void validate_noise(const NoiseModel& model) {
  if (const auto* s = std::get_if<StaticNoise>(&model)) {
    if (!std::isfinite(s->c0) || s->c0 <= 0.0)
      throw InputError("static noise: c0 must be > 0");
    if (!std::isfinite(s->delta) || s->delta < 0.0)
      throw InputError("static noise: delta must be >= 0");
  } else {
    const auto& t = std::get<TelegraphNoise>(model);
    if (!std::isfinite(t.nu) || t.nu <= 0.0)
      throw InputError("telegraph noise: nu must be > 0");
    if (!std::isfinite(t.gamma) || t.gamma < 0.0)
      throw InputError("telegraph noise: gamma must be >= 0");
  }
}

std::string_view to_string(EnvironmentTopology topo) {
  return topo == EnvironmentTopology::Common ? "common" : "independent";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream run_stream(std::uint64_t master_seed, std::uint64_t run_index) {
  const std::uint64_t key = splitmix64(splitmix64(master_seed) ^ run_index);
  std::seed_seq seq{static_cast<std::uint32_t>(key),
                    static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(run_index),
                    static_cast<std::uint32_t>(run_index >> 32)};
  return RandomStream(seq);
}

double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

StaticCouplings sample_static_couplings(const StaticNoise& model,
                                        std::size_t n_sites,
                                        EnvironmentTopology topo,
                                        RandomStream& rng) {
  validate_noise(NoiseModel{model});
  auto draw = [&] {
    std::vector<double> c(n_sites);
    for (double& v : c) v = model.c0 + model.delta * (uniform01(rng) - 0.5);
    return c;
  };
  StaticCouplings out;
  out.a = draw();
  out.b = topo == EnvironmentTopology::Common ? out.a : draw();
  return out;
}

int TelegraphProcess::sign_at(double t) const {
  const auto flips = std::upper_bound(flip_times.begin(), flip_times.end(), t) -
                     flip_times.begin();
  return (flips % 2 == 0) ? initial_sign : -initial_sign;
}

std::size_t telegraph_process_count(std::size_t n_sites,
                                    EnvironmentTopology topo) {
  return topo == EnvironmentTopology::Common ? n_sites : 2 * n_sites;
}

TelegraphTrajectory sample_rtn_trajectory(const TelegraphNoise& model,
                                          std::size_t n_processes,
                                          double horizon, RandomStream& rng) {
  validate_noise(NoiseModel{model});
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InputError("telegraph trajectory horizon must be > 0");
  TelegraphTrajectory traj{horizon, std::vector<TelegraphProcess>(n_processes)};
  for (auto& proc : traj.processes) {
    proc.initial_sign = uniform01(rng) < 0.5 ? 1 : -1;
    if (model.gamma == 0.0) continue;
    double t = 0.0;
    while (true) {
      // 1 - u lies in (0, 1], so the log is finite
      t += -std::log1p(-uniform01(rng)) / model.gamma;
      if (t >= horizon) break;
      if (proc.flip_times.empty() || t > proc.flip_times.back())
        proc.flip_times.push_back(t);
    }
  }
  return traj;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw InputError("output grid needs at least two times");
  if (grid.front() != 0.0) throw InputError("output grid must start at t = 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0)
      throw InputError("output grid contains a negative or non-finite time");
    if (!(grid[k] > grid[k - 1]))
      throw InputError("output grid must be strictly increasing");
  }
}

}  // namespace

Schedule build_schedule(const std::optional<StaticCouplings>& static_couplings,
                        const std::optional<TelegraphTrajectory>& trajectory,
                        const NoiseModel& model, EnvironmentTopology topo,
                        std::span<const double> grid) {
  validate_noise(model);
  check_grid(grid);
  if (static_couplings.has_value() == trajectory.has_value())
    throw InputError("build_schedule needs exactly one noise realization");
  const double t_end = grid.back();

  Schedule schedule;
  if (std::holds_alternative<StaticNoise>(model)) {
    if (!static_couplings)
      throw InputError("static noise model needs static couplings");
    if (static_couplings->a.size() != static_couplings->b.size())
      throw InputError("static couplings for A and B differ in length");
    for (std::size_t k = 1; k < grid.size(); ++k)
      schedule.segments.push_back(
          {grid[k - 1], grid[k], static_couplings->a, static_couplings->b});
    return schedule;
  }

  if (!trajectory) throw InputError("telegraph noise model needs a trajectory");
  const double nu = std::get<TelegraphNoise>(model).nu;
  const auto& procs = trajectory->processes;
  const bool common = topo == EnvironmentTopology::Common;
  if (procs.empty() || (!common && procs.size() % 2 != 0))
    throw InputError("trajectory process count does not match topology");
  if (trajectory->horizon < t_end)
    throw InputError("trajectory horizon ends before the output grid");
  const std::size_t n_sites = common ? procs.size() : procs.size() / 2;

  std::vector<double> cuts(grid.begin(), grid.end());
  for (const auto& p : procs)
    for (double f : p.flip_times)
      if (f < t_end) cuts.push_back(f);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  schedule.segments.reserve(cuts.size() - 1);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    // flips sit on segment boundaries, so the sign at the start is the
    // sign throughout
    const double t0 = cuts[k - 1];
    Segment seg{t0, cuts[k], std::vector<double>(n_sites),
                std::vector<double>(n_sites)};
    for (std::size_t j = 0; j < n_sites; ++j) {
      seg.couplings_a[j] = nu * procs[j].sign_at(t0);
      seg.couplings_b[j] =
          common ? seg.couplings_a[j] : nu * procs[n_sites + j].sign_at(t0);
    }
    schedule.segments.push_back(std::move(seg));
  }
  return schedule;
}

}  // namespace qwalk
