#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk::testing {

inline std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  return ComplexMatrix(n, random_vector(n * n, rng));
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const auto a = random_matrix(n, rng);
  auto h = a + a.adjoint();
  h *= 0.5;
  return h;
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  return hermitian_eig(random_hermitian(n, rng)).eigenvectors;
}

/// Random mixed state: A A^dagger / Tr.
inline ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  const auto a = random_matrix(n, rng);
  auto rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline std::vector<cplx> normalized(std::vector<cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  for (auto& z : v) z /= std::sqrt(s);
  return v;
}

}  // namespace qwalk::testing
