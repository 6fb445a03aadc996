#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/dynamics.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk {

enum class Subsystem { A, B };

/// Eigenvalues in [-kPositivityTol, 0) count as zero; anything lower is a
/// positivity violation.
inline constexpr double kPositivityTol = 1e-9;

/// Transpose over one particle. With row i*N + j and column k*N + l,
/// transposing A maps entry ((i,j),(k,l)) to ((k,j),(i,l)).
ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t n_sites,
                                Subsystem subsystem = Subsystem::A);

/// Sum of |eigenvalues| of the partial transpose minus one, clamped at zero
/// when the result lies within kPositivityTol below it.
double negativity(const ComplexMatrix& rho, std::size_t n_sites,
                  Subsystem subsystem = Subsystem::A);

/// -Tr(rho ln rho). Throws PositivityError on an eigenvalue below
/// -kPositivityTol.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Tr(rho^2)
double purity(const ComplexMatrix& rho);

struct MeasureSeries {
  std::vector<double> grid;
  std::vector<double> entropy;
  std::vector<double> entropy_stderr;
  std::vector<double> negativity;
  std::vector<double> negativity_stderr;
  std::vector<double> purity;
  /// N > 2: a non-zero negativity certifies entanglement but zero does not
  /// rule it out.
  bool negativity_sufficient_only = false;
};

/// Evaluates the measures on every averaged matrix. Standard errors are the
/// sample standard deviation of the measure over the batch averages divided
/// by sqrt(n_batches). Grid times are spread over `workers` threads
/// (0 = default_worker_count()); the result does not depend on it.
MeasureSeries measure_series(const EnsembleResult& result, std::size_t n_sites,
                             std::size_t workers = 0);

}  // namespace qwalk
