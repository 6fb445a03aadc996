#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk {

/// Tight-binding ring of n_sites sites. couplings[j] is the hopping amplitude
/// on edge (j, j+1 mod N); edge N-1 closes the ring onto site 0.
struct RingSpec {
  std::size_t n_sites = 0;
  std::vector<double> beta;
  std::vector<double> couplings;
  /// For N = 2 both edges join sites 0 and 1 and their amplitudes add. With
  /// dedup_edges set only couplings[0] is used. No effect for N > 2.
  bool dedup_edges = false;

  /// Uniform ring: beta = 0, every coupling equal to c.
  static RingSpec uniform(std::size_t n_sites, double c);

  /// Throws InputError on N < 2, wrong vector lengths or non-finite values.
  void validate() const;
};

/// Two-particle amplitudes; index i*N + j means particle A on site i and
/// particle B on site j.
struct TwoParticleState {
  std::size_t n_sites = 0;
  std::vector<cplx> amplitudes;

  double norm() const;
};

/// H[j][j] = beta_j, H[j][j+1] = H[j+1][j] = -c_j with indices mod N.
ComplexMatrix single_particle_hamiltonian(const RingSpec& spec);

/// H_A (x) I + I (x) H_B.
ComplexMatrix two_particle_hamiltonian(const ComplexMatrix& h_a,
                                       const ComplexMatrix& h_b);

/// (1/sqrt(N)) sum_i |i>_A |i>_B
TwoParticleState maximally_entangled_state(std::size_t n_sites);

}  // namespace qwalk
