#include "qwalk/kernels.hpp"

namespace qwalk::kernels {
namespace {

// Complex products are spelled out so the reference path does not depend on
// the library's NaN/Inf-recovering operator*.
inline cplx mul(cplx u, cplx v) {
  return {u.real() * v.real() - u.imag() * v.imag(),
          u.real() * v.imag() + u.imag() * v.real()};
}

inline cplx conj_mul(cplx u, cplx v) {
  return {u.real() * v.real() + u.imag() * v.imag(),
          u.real() * v.imag() - u.imag() * v.real()};
}

void rotate_pair_scalar(cplx* x, cplx* y, std::size_t n, const PairMap& m) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = mul(m.a, xi) + mul(m.b, yi);
    y[i] = mul(m.c, xi) + mul(m.d, yi);
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += mul(alpha, x[i]);
}

cplx conj_dot_scalar(const cplx* x, const cplx* y, std::size_t n) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc += conj_mul(x[i], y[i]);
  return acc;
}

void rank1_update_scalar(cplx* rho, const cplx* psi, std::size_t n,
                         double weight) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx wi = weight * psi[i];
    cplx* row = rho + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] += conj_mul(psi[j], wi);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", rotate_pair_scalar, axpy_scalar,
                                 conj_dot_scalar, rank1_update_scalar};
  return table;
}

}  // namespace qwalk::kernels
