#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/noise.hpp"

namespace qwalk {

/// Everything needed to reproduce one ensemble experiment.
struct ScenarioConfig {
  std::size_t n_sites = 2;
  NoiseModel noise = StaticNoise{1.0, 1.0};
  EnvironmentTopology topology = EnvironmentTopology::Common;
  /// tau_e / tau_c for telegraph noise; gamma = nu / ratio.
  std::optional<double> ratio;
  /// Uniform on-site energy beta_j.
  double onsite_energy = 0.0;
  double t_max = 20.0;
  std::size_t n_grid = 200;
  std::size_t n_runs = 2000;
  std::size_t n_batches = 20;
  std::uint64_t master_seed = 1;
  bool dedup_edges = false;
  std::string output_path = ".";

  /// Throws InputError naming the offending field.
  void validate() const;

  /// n_grid uniform times on [0, t_max].
  std::vector<double> grid() const;
};

}  // namespace qwalk
