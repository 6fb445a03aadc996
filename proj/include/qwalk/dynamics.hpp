#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/model.hpp"
#include "qwalk/noise.hpp"
#include "qwalk/scenario.hpp"

namespace qwalk {

/// exp(-i H dt) psi via the eigendecomposition of H (hbar = 1).
TwoParticleState propagate_segment(const ComplexMatrix& h, double dt,
                                   const TwoParticleState& psi);

/// Spectral form of exp(-i H t) for a fixed Hermitian H. Holds the
/// eigenvectors as rows so both transforms run over contiguous memory.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const ComplexMatrix& h);

  /// V^dagger psi
  std::vector<cplx> to_eigenbasis(std::span<const cplx> psi) const;
  /// V diag(exp(-i lambda t)) coeffs
  std::vector<cplx> evolve(std::span<const cplx> coeffs, double t) const;

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  std::vector<double> eigenvalues_;
  ComplexMatrix rows_;
};

/// exp(-i (h_A (x) I + I (x) h_B) t) using only the single-particle
/// eigensystems. A two-particle vector is treated as an N x N matrix Psi
/// with Psi[i][j] = psi[i*N + j].
class KroneckerPropagator {
 public:
  KroneckerPropagator(const ComplexMatrix& h_a, const ComplexMatrix& h_b);

  /// C = V_A^dagger Psi conj(V_B)
  std::vector<cplx> to_eigenbasis(std::span<const cplx> psi) const;
  /// V_A (C o exp(-i (lambda_A,i + lambda_B,j) t)) V_B^T, written to `out`.
  void evolve(std::span<const cplx> coeffs, double t,
              std::span<cplx> out) const;

 private:
  std::size_t n_;
  std::vector<double> lambda_a_, lambda_b_;
  ComplexMatrix va_, vb_;
  // scratch for evolve; one propagator per worker
  mutable std::vector<cplx> scratch_;
};

/// Evolves the maximally entangled state through a given schedule, which
/// must be cut at every time of config.grid(). Only the ring geometry
/// (sites, on-site energy, dedup_edges) and the grid are taken from config.
/// Consecutive segments with equal couplings share one eigendecomposition.
std::vector<std::vector<cplx>> evolve_schedule(const ScenarioConfig& config,
                                               const Schedule& schedule);

/// Pure states |psi_r(t_k)> of run `run_index` on every grid time.
std::vector<std::vector<cplx>> trajectory_states(const ScenarioConfig& config,
                                                 std::size_t run_index);

/// Projectors |psi_r(t_k)><psi_r(t_k)| on every grid time.
std::vector<ComplexMatrix> run_single_trajectory(const ScenarioConfig& config,
                                                 std::size_t run_index);

struct EnsembleResult {
  std::vector<double> grid;
  /// <rho(t_k)> over all runs
  std::vector<ComplexMatrix> average;
  std::size_t n_runs = 0;
  std::size_t n_batches = 0;
  /// batch_average[b][k]: average over runs b*R/B ... (b+1)*R/B - 1
  std::vector<std::vector<ComplexMatrix>> batch_average;
};

/// Worker count from QWALK_THREADS (0 or unset = hardware concurrency).
std::size_t default_worker_count();

/// Noise-averaged density matrices. Runs are grouped into n_batches
/// contiguous batches; each batch is summed in run order and the batches are
/// combined in batch order, so the result does not depend on `workers`
/// (0 = default_worker_count()). A failing run aborts the ensemble with a
/// RunError carrying that run's index.
EnsembleResult ensemble_average(const ScenarioConfig& config,
                                std::size_t workers = 0);

struct DensityDiagnostics {
  double trace_error;       // |Tr rho - 1|
  double hermiticity_error; // ||rho - rho^dagger||_F / ||rho||_F
  double min_eigenvalue;
};

DensityDiagnostics diagnose(const ComplexMatrix& rho);

}  // namespace qwalk
