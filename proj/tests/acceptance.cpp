// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qwalk/cli.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/measures.hpp"
#include "qwalk/model.hpp"
#include "qwalk/noise.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig preset_config(const std::string& name, std::size_t n_sites) {
  return build_config({{{"preset", name}, {"sites", std::to_string(n_sites)}}});
}

// Partial transpose written out entry by entry, independent of the library's.
ComplexMatrix brute_partial_transpose(const ComplexMatrix& rho, std::size_t n) {
  ComplexMatrix pt(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) pt(k * n + j, i * n + l) = rho(i * n + j, k * n + l);
  return pt;
}

double brute_negativity(const ComplexMatrix& rho, std::size_t n) {
  double s = 0.0;
  for (double v : hermitian_eigenvalues(brute_partial_transpose(rho, n))) s += std::abs(v);
  return s - 1.0;
}

// ---------------------------------------------------------------- C1

void criterion_1() {
  const auto bell = ComplexMatrix::outer(maximally_entangled_state(2).amplitudes);
  const auto me4 = ComplexMatrix::outer(maximally_entangled_state(4).amplitudes);
  auto werner = bell * 0.6;
  werner += ComplexMatrix::identity(4) * 0.1;

  const double n2 = negativity(bell, 2);
  const double n4 = negativity(me4, 4);
  const double nw = negativity(werner, 2);
  const double nw_oracle = brute_negativity(werner, 2);
  const double s_pure = von_neumann_entropy(bell);
  const double s_mixed = von_neumann_entropy(ComplexMatrix::identity(16) * (1.0 / 16));

  const bool ok = std::abs(n2 - 1.0) <= 1e-9 && std::abs(n4 - 3.0) <= 1e-9 &&
                  std::abs(nw - 0.4) <= 1e-9 && std::abs(nw_oracle - 0.4) <= 1e-9 &&
                  std::abs(s_pure) <= 1e-9 && std::abs(s_mixed - std::log(16.0)) <= 1e-9;
  report("C1", "measure oracles", ok,
         fmt("N(Phi+,2)=%.12f N(Phi+,4)=%.12f N(Werner 0.6)=%.12f (oracle %.12f) "
             "S(pure)=%.1e S(I/16)-ln16=%.1e",
             n2, n4, nw, nw_oracle, s_pure, s_mixed - std::log(16.0)));
}

// ---------------------------------------------------------------- C2

void criterion_2() {
  ScenarioConfig cfg;
  cfg.n_sites = 2;
  cfg.noise = StaticNoise{1.0, 0.0};
  cfg.t_max = 20.0;
  cfg.n_grid = 200;
  cfg.n_runs = 2000;
  cfg.n_batches = 20;
  const auto start = std::chrono::steady_clock::now();
  const auto s = measure_series(ensemble_average(cfg), 2);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double neg_err = 0.0, ent_err = 0.0;
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    neg_err = std::max(neg_err, std::abs(s.negativity[k] - 1.0));
    ent_err = std::max(ent_err, std::abs(s.entropy[k]));
  }
  report("C2", "local-unitary invariance", neg_err <= 1e-8 && ent_err <= 1e-9 && secs < 5.0,
         fmt("max|N-1|=%.2e max|S|=%.2e over %zu points in %.2f s", neg_err, ent_err,
             s.grid.size(), secs));
}

// ---------------------------------------------------------------- C3

void criterion_3() {
  const double delta = 0.5;
  const std::size_t draws = 1'000'000;
  auto rng = run_stream(20240601, 0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    const double c = sample_static_couplings({1.0, delta}, 1, EnvironmentTopology::Common, rng).a[0];
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / draws;
  const double var = (sum2 - draws * mean * mean) / (draws - 1);
  const double expected_var = delta * delta / 12.0;
  const double sigma_var =
      std::sqrt((std::pow(delta, 4) / 80.0 - expected_var * expected_var) / draws);
  const double z_var = (var - expected_var) / sigma_var;

  const double gamma = 1.0;
  const double lags[] = {0.1, 0.5, 1.0};
  const std::size_t trajectories = 100'000;
  double corr[3] = {0, 0, 0};
  auto rng2 = run_stream(20240602, 0);
  for (std::size_t k = 0; k < trajectories; ++k) {
    const auto tr = sample_rtn_trajectory({1.0, gamma}, 1, 1.0 / gamma + 1.0, rng2);
    const auto& p = tr.processes[0];
    for (int i = 0; i < 3; ++i) corr[i] += p.sign_at(lags[i] / gamma) * p.sign_at(0.0);
  }
  bool ok = std::abs(z_var) < 3.0;
  std::string detail = fmt("var=%.6f (Delta^2/12=%.6f, z=%.2f)", var, expected_var, z_var);
  for (int i = 0; i < 3; ++i) {
    const double expected = std::exp(-2.0 * gamma * lags[i] / gamma);
    const double c = corr[i] / trajectories;
    const double se = std::sqrt((1.0 - expected * expected) / trajectories);
    const double z = (c - expected) / se;
    ok = ok && std::abs(z) < 3.0;
    detail += fmt("; <QQ>(%.1f/g)=%.4f (e^-2gt=%.4f, z=%.2f)", lags[i], c, expected, z);
  }
  report("C3", "noise statistics", ok, detail);
}

// ---------------------------------------------------------------- runs for C4-C8

struct ValidityTally {
  double trace = 0.0;
  double herm = 0.0;
  double min_eig = 1.0;
  double entropy_excess = -1e300;  // max of S - 2 ln N
  std::size_t matrices = 0;
};

struct PresetRun {
  std::string preset;
  std::size_t n_sites;
  MeasureSeries series;
};

PresetRun run_and_check(const std::string& preset, std::size_t n, ValidityTally& tally) {
  const auto cfg = preset_config(preset, n);
  const auto ens = ensemble_average(cfg);
  for (const auto& rho : ens.average) {
    const auto d = diagnose(rho);
    tally.trace = std::max(tally.trace, d.trace_error);
    tally.herm = std::max(tally.herm, d.hermiticity_error);
    tally.min_eig = std::min(tally.min_eig, d.min_eigenvalue);
    ++tally.matrices;
  }
  PresetRun run{preset, n, measure_series(ens, n)};
  for (double s : run.series.entropy)
    tally.entropy_excess = std::max(tally.entropy_excess, s - 2.0 * std::log(double(n)));
  std::printf("  ran %s N=%zu\n", preset.c_str(), n);
  std::fflush(stdout);
  return run;
}

void criterion_4(const ValidityTally& t) {
  const bool ok = t.trace <= 1e-10 && t.herm <= 1e-10 && t.min_eig >= -1e-9 &&
                  t.entropy_excess <= 1e-9;
  report("C4", "state validity", ok,
         fmt("%zu averaged matrices: max|Tr-1|=%.1e max herm=%.1e min eig=%.1e "
             "max(S-2lnN)=%.3f",
             t.matrices, t.trace, t.herm, t.min_eig, t.entropy_excess));
}

void criterion_5(const MeasureSeries& s) {
  const auto& neg = s.negativity;
  std::size_t first = neg.size();
  for (std::size_t k = 0; k < neg.size(); ++k)
    if (neg[k] < 0.02) {
      first = k;
      break;
    }
  std::size_t revivals = 0;
  double worst = 0.0;
  for (std::size_t k = first; k < neg.size(); ++k) {
    worst = std::max(worst, neg[k]);
    if (neg[k] > 0.02 + 3.0 * s.negativity_stderr[k]) ++revivals;
  }
  std::size_t drops = 0;
  for (std::size_t k = 0; k + 1 < s.entropy.size(); ++k) {
    const double tol = 3.0 * std::max(s.entropy_stderr[k], s.entropy_stderr[k + 1]);
    if (s.entropy[k + 1] < s.entropy[k] - tol) ++drops;
  }
  const bool reached = first < neg.size();
  report("C5", "Markov regime has no revival", reached && revivals == 0 && drops == 0,
         reached ? fmt("negativity < 0.02 from t=%.2f, max afterwards %.4f, %zu revivals; "
                       "%zu significant entropy drops",
                       s.grid[first], worst, revivals, drops)
                 : std::string("negativity never drops below 0.02"));
}

std::vector<std::size_t> local_extrema(const std::vector<double>& v, bool maxima) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const bool ext = maxima ? (v[k] > v[k - 1] && v[k] >= v[k + 1])
                            : (v[k] < v[k - 1] && v[k] <= v[k + 1]);
    if (ext) out.push_back(k);
  }
  return out;
}

void criterion_6(const MeasureSeries& s) {
  const auto& neg = s.negativity;
  // ESD window: >= 3 consecutive points below 0.01, then a later value >= 0.05
  bool esd = false;
  double esd_at = 0.0, revival = 0.0;
  std::size_t longest = 0, run = 0;
  for (std::size_t k = 0; k < neg.size(); ++k) {
    run = neg[k] < 0.01 ? run + 1 : 0;
    longest = std::max(longest, run);
    if (run >= 3 && !esd) {
      for (std::size_t j = k + 1; j < neg.size(); ++j)
        if (neg[j] >= 0.05) {
          esd = true;
          esd_at = s.grid[k + 1 - run];
          revival = neg[j];
          break;
        }
    }
  }
  double min_neg = 1e9;
  std::size_t min_at = 0;
  for (std::size_t k = 0; k < neg.size(); ++k)
    if (neg[k] < min_neg) min_neg = neg[k], min_at = k;

  // entropy: a local maximum followed by a local minimum more than 3 stderr lower
  bool ent = false;
  double best_prom = 0.0;
  const auto maxima = local_extrema(s.entropy, true);
  const auto minima = local_extrema(s.entropy, false);
  for (auto i : maxima)
    for (auto j : minima) {
      if (j <= i) continue;
      const double prom = s.entropy[i] - s.entropy[j];
      const double se = std::max(s.entropy_stderr[i], s.entropy_stderr[j]);
      if (prom > 3.0 * se) ent = true;
      if (se > 0) best_prom = std::max(best_prom, prom / se);
    }

  std::string detail =
      esd ? fmt("ESD window from t=%.2f, revival to %.4f", esd_at, revival)
          : fmt("no ESD window (longest run below 0.01: %zu points; min negativity %.4f at "
                "t=%.2f, stderr there %.4f)",
                longest, min_neg, s.grid[min_at], s.negativity_stderr[min_at]);
  detail += fmt("; entropy max-then-min prominence up to %.1f stderr", best_prom);
  report("C6", "non-Markov ESD and revival", esd && ent, detail);
}

void criterion_7(const MeasureSeries& s) {
  const auto ent_min = local_extrema(s.entropy, false);
  const auto neg_max = local_extrema(s.negativity, true);
  std::size_t matched = 0;
  for (auto k : ent_min) {
    for (auto j : neg_max)
      if ((j > k ? j - k : k - j) <= 2) {
        ++matched;
        break;
      }
  }
  report("C7", "entropy minima at negativity maxima",
         !ent_min.empty() && matched == ent_min.size(),
         fmt("%zu of %zu entropy minima within 2 steps of one of %zu negativity maxima",
             matched, ent_min.size(), neg_max.size()));
}

struct LateEntropy {
  double mean;
  double stderr_mean;
};

LateEntropy late_entropy(const MeasureSeries& s) {
  const std::size_t n = s.grid.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double m = 0.0, se = 0.0;
  for (std::size_t k = n - tail; k < n; ++k) {
    m += s.entropy[k];
    se += s.entropy_stderr[k];
  }
  return {m / tail, se / tail};
}

void criterion_8(const std::map<std::pair<std::string, std::size_t>, PresetRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const char* preset : {"fig1-static", "fig2-markov"}) {
    const auto s2 = late_entropy(runs.at({preset, 2}).series);
    const auto s4 = late_entropy(runs.at({preset, 4}).series);
    const auto s6 = late_entropy(runs.at({preset, 6}).series);
    const double m24 = 3.0 * std::hypot(s2.stderr_mean, s4.stderr_mean);
    const double m46 = 3.0 * std::hypot(s4.stderr_mean, s6.stderr_mean);
    ok = ok && s4.mean - s2.mean > m24 && s6.mean - s4.mean > m46;
    detail += fmt("%s%s S2=%.4f S4=%.4f S6=%.4f (3se %.4f/%.4f)", detail.empty() ? "" : "; ",
                  preset, s2.mean, s4.mean, s6.mean, m24, m46);
  }
  report("C8", "saturation grows with N", ok, detail);
}

// ---------------------------------------------------------------- C9, C10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_9(const fs::path& scratch) {
  bool ok = true;
  std::string detail;
  for (const auto& p : presets()) {
    auto cfg = preset_config(p.name, 2);
    std::string first;
    for (std::size_t workers : {1u, 0u, 4u}) {
      cfg.output_path = (scratch / (p.name + "_w" + std::to_string(workers))).string();
      const auto out = run_scenario(cfg, workers, p.name);
      const auto csv = slurp(out.series_path);
      if (workers == 1) first = csv;
      else ok = ok && csv == first;
    }
    detail += (detail.empty() ? "" : ", ") + p.name;
  }
  report("C9", "deterministic output", ok,
         "series.csv identical for 1, auto and 4 workers: " + detail);
}

void criterion_10(const fs::path& scratch) {
  auto cfg = preset_config("fig3-nonmarkov", 6);
  cfg.output_path = (scratch / "perf").string();
  const auto out = run_scenario(cfg, 4, "fig3-nonmarkov");
  report("C10", "performance", out.runtime_seconds < 600.0,
         fmt("fig3-nonmarkov N=6 R=2000 on 4 workers (%u hardware threads): %.1f s",
             std::thread::hardware_concurrency(), out.runtime_seconds));
}

}  // namespace

int main() {
  const auto scratch = fs::temp_directory_path() / "qwalk_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  criterion_1();
  criterion_2();
  criterion_3();

  ValidityTally tally;
  std::map<std::pair<std::string, std::size_t>, PresetRun> runs;
  const std::pair<const char*, std::size_t> plan[] = {
      {"fig1-static", 2},   {"fig1-static", 4}, {"fig1-static", 6}, {"fig2-markov", 2},
      {"fig2-markov", 4},   {"fig2-markov", 6}, {"fig3-nonmarkov", 2},
      {"fig3-nonmarkov", 4}, {"fig3-nonmarkov", 6}};
  for (const auto& [preset, n] : plan) runs.emplace(std::pair{std::string(preset), n},
                                                   run_and_check(preset, n, tally));

  criterion_4(tally);
  criterion_5(runs.at({"fig2-markov", 2}).series);
  criterion_6(runs.at({"fig3-nonmarkov", 2}).series);
  criterion_7(runs.at({"fig3-nonmarkov", 2}).series);
  criterion_8(runs);
  criterion_9(scratch);
  criterion_10(scratch);

  fs::remove_all(scratch);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
