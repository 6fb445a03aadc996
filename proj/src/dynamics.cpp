#include "qwalk/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/noise.hpp"

namespace qwalk {

SpectralPropagator::SpectralPropagator(const ComplexMatrix& h)
    : rows_(h.dim()) {
  auto eig = hermitian_eig(h);
  eigenvalues_ = std::move(eig.eigenvalues);
  rows_ = eig.eigenvectors.transpose();
}

std::vector<cplx> SpectralPropagator::to_eigenbasis(
    std::span<const cplx> psi) const {
  if (psi.size() != rows_.dim())
    throw InputError("state dimension does not match the Hamiltonian");
  const auto& k = kernels::active();
  std::vector<cplx> coeffs(psi.size());
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    coeffs[m] = k.conj_dot(rows_.row(m).data(), psi.data(), psi.size());
  return coeffs;
}

std::vector<cplx> SpectralPropagator::evolve(std::span<const cplx> coeffs,
                                             double t) const {
  const auto& k = kernels::active();
  std::vector<cplx> psi(coeffs.size());
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    k.axpy(coeffs[m] * std::polar(1.0, -eigenvalues_[m] * t),
           rows_.row(m).data(), psi.data(), psi.size());
  return psi;
}

TwoParticleState propagate_segment(const ComplexMatrix& h, double dt,
                                   const TwoParticleState& psi) {
  if (!(dt >= 0.0) || !std::isfinite(dt))
    throw InputError("propagate_segment: dt must be finite and >= 0");
  if (h.dim() != psi.amplitudes.size())
    throw InputError("propagate_segment: Hamiltonian is " +
                     std::to_string(h.dim()) + "-dimensional, state has " +
                     std::to_string(psi.amplitudes.size()) + " amplitudes");
  const SpectralPropagator prop(h);
  return {psi.n_sites, prop.evolve(prop.to_eigenbasis(psi.amplitudes), dt)};
}

KroneckerPropagator::KroneckerPropagator(const ComplexMatrix& h_a,
                                         const ComplexMatrix& h_b)
    : n_(h_a.dim()), va_(h_a.dim()), vb_(h_b.dim()) {
  if (h_a.dim() != h_b.dim())
    throw InputError("KroneckerPropagator: H_A and H_B differ in dimension");
  auto ea = hermitian_eig(h_a);
  auto eb = hermitian_eig(h_b);
  lambda_a_ = std::move(ea.eigenvalues);
  lambda_b_ = std::move(eb.eigenvalues);
  va_ = std::move(ea.eigenvectors);
  vb_ = std::move(eb.eigenvectors);
  scratch_.resize(n_ * n_);
}

std::vector<cplx> KroneckerPropagator::to_eigenbasis(
    std::span<const cplx> psi) const {
  if (psi.size() != n_ * n_)
    throw InputError("state dimension does not match the Hamiltonian");
  const auto& k = kernels::active();
  // t1 = V_A^dagger Psi
  std::vector<cplx> t1(n_ * n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t i = 0; i < n_; ++i)
      k.axpy(std::conj(va_(i, a)), psi.data() + i * n_, t1.data() + a * n_, n_);
  // C = t1 conj(V_B)
  std::vector<cplx> c(n_ * n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t j = 0; j < n_; ++j) {
      const cplx f = t1[a * n_ + j];
      cplx* dst = c.data() + a * n_;
      for (std::size_t b = 0; b < n_; ++b) dst[b] += f * std::conj(vb_(j, b));
    }
  return c;
}

void KroneckerPropagator::evolve(std::span<const cplx> coeffs, double t,
                                 std::span<cplx> out) const {
  // t2 = V_A (phases o C)
  std::fill(scratch_.begin(), scratch_.end(), cplx{});
  for (std::size_t a = 0; a < n_; ++a) {
    const cplx pa = std::polar(1.0, -lambda_a_[a] * t);
    for (std::size_t b = 0; b < n_; ++b) {
      const cplx d = coeffs[a * n_ + b] * pa *
                     std::polar(1.0, -lambda_b_[b] * t);
      for (std::size_t i = 0; i < n_; ++i)
        scratch_[i * n_ + b] += va_(i, a) * d;
    }
  }
  // out = t2 V_B^T, row i = sum_b t2[i][b] * (column b of V_B)
  std::fill(out.begin(), out.end(), cplx{});
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t b = 0; b < n_; ++b) {
      const cplx f = scratch_[i * n_ + b];
      cplx* dst = out.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) dst[j] += f * vb_(j, b);
    }
}

namespace {

struct SegmentHamiltonians {
  ComplexMatrix h_a;
  ComplexMatrix h_b;
};

SegmentHamiltonians segment_hamiltonians(const ScenarioConfig& config,
                                         const Segment& seg) {
  RingSpec spec{config.n_sites,
                std::vector<double>(config.n_sites, config.onsite_energy),
                seg.couplings_a, config.dedup_edges};
  auto h_a = single_particle_hamiltonian(spec);
  spec.couplings = seg.couplings_b;
  return {std::move(h_a), single_particle_hamiltonian(spec)};
}

Schedule realize_schedule(const ScenarioConfig& config, std::size_t run_index,
                          std::span<const double> grid) {
  auto rng = run_stream(config.master_seed, run_index);
  if (const auto* s = std::get_if<StaticNoise>(&config.noise)) {
    auto couplings =
        sample_static_couplings(*s, config.n_sites, config.topology, rng);
    return build_schedule(couplings, std::nullopt, config.noise,
                          config.topology, grid);
  }
  const auto& tel = std::get<TelegraphNoise>(config.noise);
  auto traj = sample_rtn_trajectory(
      tel, telegraph_process_count(config.n_sites, config.topology),
      config.t_max, rng);
  return build_schedule(std::nullopt, traj, config.noise, config.topology,
                        grid);
}

// Calls emit(k, psi) for every grid index k in increasing order.
template <typename Emit>
void walk_schedule(const ScenarioConfig& config, const Schedule& schedule,
                   std::span<const double> grid, Emit&& emit) {
  const std::size_t n = config.n_sites;
  const auto initial = maximally_entangled_state(n);
  std::vector<cplx> psi = initial.amplitudes;
  emit(std::size_t{0}, std::span<const cplx>(psi));

  std::optional<KroneckerPropagator> prop;
  std::vector<cplx> coeffs;
  double t_ref = 0.0;
  const Segment* last = nullptr;
  std::size_t next_grid = 1;

  for (const auto& seg : schedule.segments) {
    const bool same = last && last->couplings_a == seg.couplings_a &&
                      last->couplings_b == seg.couplings_b;
    if (!same) {
      if (prop) prop->evolve(coeffs, seg.t_start - t_ref, psi);
      auto hs = segment_hamiltonians(config, seg);
      prop.emplace(hs.h_a, hs.h_b);
      coeffs = prop->to_eigenbasis(psi);
      t_ref = seg.t_start;
    }
    last = &seg;
    if (next_grid < grid.size() && seg.t_end == grid[next_grid]) {
      prop->evolve(coeffs, seg.t_end - t_ref, psi);
      emit(next_grid, std::span<const cplx>(psi));
      ++next_grid;
    }
  }
  if (next_grid != grid.size())
    throw InputError("schedule does not end on the last grid time");
}

template <typename Emit>
void walk_trajectory(const ScenarioConfig& config, std::size_t run_index,
                     std::span<const double> grid, Emit&& emit) {
  walk_schedule(config, realize_schedule(config, run_index, grid), grid,
                std::forward<Emit>(emit));
}

}  // namespace

std::vector<std::vector<cplx>> evolve_schedule(const ScenarioConfig& config,
                                               const Schedule& schedule) {
  config.validate();
  const auto grid = config.grid();
  std::vector<std::vector<cplx>> states(grid.size());
  walk_schedule(config, schedule, grid,
                [&](std::size_t k, std::span<const cplx> psi) {
                  states[k].assign(psi.begin(), psi.end());
                });
  return states;
}

std::vector<std::vector<cplx>> trajectory_states(const ScenarioConfig& config,
                                                 std::size_t run_index) {
  config.validate();
  const auto grid = config.grid();
  std::vector<std::vector<cplx>> states(grid.size());
  try {
    walk_trajectory(config, run_index, grid,
                    [&](std::size_t k, std::span<const cplx> psi) {
                      states[k].assign(psi.begin(), psi.end());
                    });
  } catch (const std::exception& e) {
    throw RunError("run " + std::to_string(run_index) + ": " + e.what(),
                   run_index);
  }
  return states;
}

std::vector<ComplexMatrix> run_single_trajectory(const ScenarioConfig& config,
                                                 std::size_t run_index) {
  std::vector<ComplexMatrix> out;
  for (const auto& psi : trajectory_states(config, run_index))
    out.push_back(ComplexMatrix::outer(psi));
  return out;
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("QWALK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
      throw InputError("QWALK_THREADS must be a non-negative integer");
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleResult ensemble_average(const ScenarioConfig& config,
                                std::size_t workers) {
  config.validate();
  const auto grid = config.grid();
  const std::size_t dim = config.n_sites * config.n_sites;
  const std::size_t n_batches = config.n_batches;
  const std::size_t per_batch = config.n_runs / n_batches;
  if (workers == 0) workers = default_worker_count();
  workers = std::min(workers, n_batches);

  EnsembleResult result;
  result.grid = grid;
  result.n_runs = config.n_runs;
  result.n_batches = n_batches;
  result.batch_average.assign(
      n_batches, std::vector<ComplexMatrix>(grid.size(), ComplexMatrix(dim)));

  std::atomic<std::size_t> next_batch{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t first_failed_run = std::numeric_limits<std::size_t>::max();
  std::exception_ptr first_error;

  auto worker = [&] {
    const auto& k = kernels::active();
    while (!failed.load()) {
      const std::size_t b = next_batch.fetch_add(1);
      if (b >= n_batches) return;
      auto& acc = result.batch_average[b];
      for (std::size_t r = b * per_batch; r < (b + 1) * per_batch; ++r) {
        try {
          walk_trajectory(config, r, grid,
                          [&](std::size_t g, std::span<const cplx> psi) {
                            k.rank1_update(acc[g].data().data(), psi.data(),
                                           dim, 1.0);
                          });
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          if (r < first_failed_run) {
            first_failed_run = r;
            first_error = std::make_exception_ptr(
                RunError("run " + std::to_string(r) + ": " + e.what(), r));
          }
          failed.store(true);
          return;
        }
      }
      for (auto& m : acc) m *= 1.0 / static_cast<double>(per_batch);
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  result.average.assign(grid.size(), ComplexMatrix(dim));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t b = 0; b < n_batches; ++b)
      result.average[g] += result.batch_average[b][g];
    result.average[g] *= 1.0 / static_cast<double>(n_batches);
  }
  return result;
}

DensityDiagnostics diagnose(const ComplexMatrix& rho) {
  const double norm = rho.frobenius_norm();
  const double skew = frobenius_distance(rho, rho.adjoint());
  // eigenvalues of the Hermitian part; the skew part is reported separately
  const auto values = hermitian_eigenvalues(rho, 1.0);
  return {std::abs(rho.trace() - 1.0), norm > 0.0 ? skew / norm : skew,
          values.front()};
}

}  // namespace qwalk
