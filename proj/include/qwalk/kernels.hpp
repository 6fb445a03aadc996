#pragma once

// Complex-double inner loops used by the eigensolver, the propagator and the
// ensemble accumulator. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2+FMA variant. The variant is chosen once at runtime
// from CPUID; QWALK_SIMD=scalar|avx2 overrides the choice.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qwalk::kernels {

using cplx = std::complex<double>;

/// Coefficients of the 2x2 map (x, y) <- (a x + b y, c x + d y).
struct PairMap {
  cplx a, b, c, d;
};

struct KernelTable {
  std::string_view name;

  /// Applies a PairMap elementwise to two length-n vectors, in place.
  void (*rotate_pair)(cplx* x, cplx* y, std::size_t n, const PairMap& m);

  /// y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);

  /// Returns sum_i conj(x_i) * y_i.
  cplx (*conj_dot)(const cplx* x, const cplx* y, std::size_t n);

  /// rho (row-major n x n) += weight * psi psi^dagger
  void (*rank1_update)(cplx* rho, const cplx* psi, std::size_t n,
                       double weight);
};

const KernelTable& scalar_table();

/// Null when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Kernel table used by the library. Resolved on first call.
const KernelTable& active();

}  // namespace qwalk::kernels
