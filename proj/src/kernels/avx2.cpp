#include "qwalk/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define QWALK_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#else
#define QWALK_HAVE_AVX2_KERNELS 0
#endif

namespace qwalk::kernels {

#if QWALK_HAVE_AVX2_KERNELS

// The file is built without -mavx2; each function opts in through the target
// attribute so that nothing compiled here leaks AVX code into shared inline
// definitions. Two complex doubles per __m256d, interleaved (re, im).
#define QWALK_AVX2 __attribute__((target("avx2,fma")))

namespace {

QWALK_AVX2 inline __m256d swap_re_im(__m256d v) {
  return _mm256_permute_pd(v, 0b0101);
}

// v * (re + i im) for two interleaved complex values
QWALK_AVX2 inline __m256d cmul_scalar(__m256d v, __m256d re, __m256d im) {
  return _mm256_fmaddsub_pd(v, re, _mm256_mul_pd(swap_re_im(v), im));
}

QWALK_AVX2 void rotate_pair_avx2(cplx* x, cplx* y, std::size_t n,
                                 const PairMap& m) {
  auto* xd = reinterpret_cast<double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(m.a.real()), ai = _mm256_set1_pd(m.a.imag());
  const __m256d br = _mm256_set1_pd(m.b.real()), bi = _mm256_set1_pd(m.b.imag());
  const __m256d cr = _mm256_set1_pd(m.c.real()), ci = _mm256_set1_pd(m.c.imag());
  const __m256d dr = _mm256_set1_pd(m.d.real()), di = _mm256_set1_pd(m.d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d nx =
        _mm256_add_pd(cmul_scalar(xv, ar, ai), cmul_scalar(yv, br, bi));
    const __m256d ny =
        _mm256_add_pd(cmul_scalar(xv, cr, ci), cmul_scalar(yv, dr, di));
    _mm256_storeu_pd(xd + 2 * i, nx);
    _mm256_storeu_pd(yd + 2 * i, ny);
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    xd[2 * i] = m.a.real() * xr - m.a.imag() * xi + m.b.real() * yr -
                m.b.imag() * yi;
    xd[2 * i + 1] = m.a.real() * xi + m.a.imag() * xr + m.b.real() * yi +
                    m.b.imag() * yr;
    yd[2 * i] = m.c.real() * xr - m.c.imag() * xi + m.d.real() * yr -
                m.d.imag() * yi;
    yd[2 * i + 1] = m.c.real() * xi + m.c.imag() * xr + m.d.real() * yi +
                    m.d.imag() * yr;
  }
}

QWALK_AVX2 void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d re = _mm256_set1_pd(alpha.real());
  const __m256d im = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_scalar(xv, re, im)));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    yd[2 * i] += alpha.real() * xr - alpha.imag() * xi;
    yd[2 * i + 1] += alpha.real() * xi + alpha.imag() * xr;
  }
}

QWALK_AVX2 cplx conj_dot_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  // lanes: [xr*yr, xi*yi] and [xr*yi, xi*yr]
  __m256d same = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    same = _mm256_fmadd_pd(xv, yv, same);
    cross = _mm256_fmadd_pd(xv, swap_re_im(yv), cross);
  }
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, same);
  _mm256_store_pd(c, cross);
  double re = (s[0] + s[1]) + (s[2] + s[3]);
  double im = (c[0] - c[1]) + (c[2] - c[3]);
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    const double yr = yd[2 * i], yi = yd[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

QWALK_AVX2 void rank1_update_avx2(cplx* rho, const cplx* psi, std::size_t n,
                                  double weight) {
  const auto* pd = reinterpret_cast<const double*>(psi);
  auto* rd = reinterpret_cast<double*>(rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = weight * pd[2 * i];
    const double wi = weight * pd[2 * i + 1];
    // conj(p) * w = [pr wr + pi wi, pr wi - pi wr]
    const __m256d wr_alt = _mm256_setr_pd(wr, -wr, wr, -wr);
    const __m256d wi_v = _mm256_set1_pd(wi);
    double* row = rd + 2 * i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const __m256d p = _mm256_loadu_pd(pd + 2 * j);
      const __m256d term =
          _mm256_fmadd_pd(p, wr_alt, _mm256_mul_pd(swap_re_im(p), wi_v));
      _mm256_storeu_pd(row + 2 * j,
                       _mm256_add_pd(_mm256_loadu_pd(row + 2 * j), term));
    }
    for (; j < n; ++j) {
      const double pr = pd[2 * j], pi = pd[2 * j + 1];
      row[2 * j] += pr * wr + pi * wi;
      row[2 * j + 1] += pr * wi - pi * wr;
    }
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{"avx2", rotate_pair_avx2, axpy_avx2,
                                 conj_dot_avx2, rank1_update_avx2};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace qwalk::kernels
