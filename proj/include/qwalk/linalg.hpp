#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;

/// Largest matrix dimension kron() will produce unless told otherwise.
inline constexpr std::size_t kDefaultMaxDim = 4096;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  /// dim x dim zero matrix; throws InputError when dim == 0.
  explicit ComplexMatrix(std::size_t dim);

  /// Row-major entries; throws InputError unless entries.size() == dim * dim.
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// Projector |psi><psi|.
  static ComplexMatrix outer(std::span<const cplx> psi);

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t row, std::size_t col) {
    return data_[row * dim_ + col];
  }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * dim_, dim_}; }
  std::span<const cplx> row(std::size_t r) const {
    return {data_.data() + r * dim_, dim_};
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs += rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs -= rhs;
  }
  friend ComplexMatrix operator*(ComplexMatrix lhs, cplx scale) {
    return lhs *= scale;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs,
                                 const ComplexMatrix& rhs);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<cplx> data_;
};

/// Matrix-vector product.
std::vector<cplx> apply(const ComplexMatrix& m, std::span<const cplx> x);

/// Eigenvalues ascending; eigenvectors are the columns of a unitary matrix,
/// in matching order.
struct HermitianEigenResult {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Default relative Hermiticity tolerance accepted by the eigensolvers.
inline constexpr double kHermitianTol = 1e-8;

/// Cyclic complex Jacobi decomposition of a Hermitian matrix. The input is
/// symmetrized as (M + M^dagger)/2 before iterating.
///
/// Throws InputError on non-finite entries or when
/// ||M - M^dagger||_F > tol * ||M||_F, and ConvergenceError (carrying the
/// remaining off-diagonal norm) if the sweep cap is reached.
HermitianEigenResult hermitian_eig(const ComplexMatrix& m,
                                   double tol = kHermitianTol);

/// Same as hermitian_eig without accumulating eigenvectors.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                          double tol = kHermitianTol);

/// Kronecker product; entry (i*dimB + k, j*dimB + l) = A(i,j) * B(k,l).
/// Throws CapacityError when the result would exceed max_dim.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t max_dim = kDefaultMaxDim);

/// ||A - B||_F; throws InputError on dimension mismatch.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qwalk
