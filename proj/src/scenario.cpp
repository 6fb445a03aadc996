#include "qwalk/scenario.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw InputError("invalid " + field + ": " + why);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(n_sites >= 2, "sites", "must be >= 2");
  require(n_sites * n_sites <= 4096, "sites",
          "two-particle dimension exceeds 4096");
  validate_noise(noise);
  if (std::holds_alternative<TelegraphNoise>(noise)) {
    if (ratio) {
      require(std::isfinite(*ratio) && *ratio > 0.0, "ratio", "must be > 0");
      const auto& tel = std::get<TelegraphNoise>(noise);
      require(std::abs(tel.gamma - tel.nu / *ratio) <= 1e-12 * tel.gamma,
              "gamma", "inconsistent with ratio (gamma must equal nu/ratio)");
    }
  } else {
    require(!ratio, "ratio", "only applies to telegraph noise");
  }
  require(std::isfinite(onsite_energy), "beta", "must be finite");
  require(std::isfinite(t_max) && t_max > 0.0, "tmax", "must be > 0");
  require(n_grid >= 2, "grid", "must be >= 2");
  require(n_batches >= 2, "batches", "must be >= 2");
  require(n_runs >= n_batches, "runs", "must be >= batches");
  require(n_runs % n_batches == 0, "runs", "must be divisible by batches");
}

std::vector<double> ScenarioConfig::grid() const {
  std::vector<double> g(n_grid);
  for (std::size_t k = 0; k < n_grid; ++k)
    g[k] = t_max * static_cast<double>(k) / static_cast<double>(n_grid - 1);
  g.back() = t_max;
  return g;
}

}  // namespace qwalk
