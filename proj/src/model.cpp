#include "qwalk/model.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

RingSpec RingSpec::uniform(std::size_t n_sites, double c) {
  return RingSpec{n_sites, std::vector<double>(n_sites, 0.0),
                  std::vector<double>(n_sites, c), false};
}

void RingSpec::validate() const {
  if (n_sites < 2)
    throw InputError("ring needs at least 2 sites, got " +
                     std::to_string(n_sites));
  if (beta.size() != n_sites || couplings.size() != n_sites)
    throw InputError("ring of " + std::to_string(n_sites) +
                     " sites needs beta and couplings of that length");
  for (double v : beta)
    if (!std::isfinite(v)) throw InputError("non-finite on-site energy");
  for (double v : couplings)
    if (!std::isfinite(v)) throw InputError("non-finite coupling");
}

double TwoParticleState::norm() const {
  double s = 0.0;
  for (const cplx& z : amplitudes) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix single_particle_hamiltonian(const RingSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_sites;
  ComplexMatrix h(n);
  for (std::size_t j = 0; j < n; ++j) h(j, j) = spec.beta[j];
  const std::size_t edges = (n == 2 && spec.dedup_edges) ? 1 : n;
  for (std::size_t j = 0; j < edges; ++j) {
    const std::size_t next = (j + 1) % n;
    h(next, j) -= spec.couplings[j];
    h(j, next) -= spec.couplings[j];
  }
  return h;
}

ComplexMatrix two_particle_hamiltonian(const ComplexMatrix& h_a,
                                       const ComplexMatrix& h_b) {
  if (h_a.dim() != h_b.dim())
    throw InputError("two_particle_hamiltonian: H_A is " +
                     std::to_string(h_a.dim()) + "x" +
                     std::to_string(h_a.dim()) + " but H_B is " +
                     std::to_string(h_b.dim()) + "x" +
                     std::to_string(h_b.dim()));
  const auto id = ComplexMatrix::identity(h_a.dim());
  return kron(h_a, id) + kron(id, h_b);
}

TwoParticleState maximally_entangled_state(std::size_t n_sites) {
  if (n_sites < 2)
    throw InputError("maximally_entangled_state needs N >= 2, got " +
                     std::to_string(n_sites));
  TwoParticleState psi{n_sites, std::vector<cplx>(n_sites * n_sites)};
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_sites));
  for (std::size_t i = 0; i < n_sites; ++i) psi.amplitudes[i * n_sites + i] = amp;
  return psi;
}

}  // namespace qwalk
