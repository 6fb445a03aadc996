#include "qwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw InputError("matrix dimension must be at least 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw InputError("matrix dimension must be at least 1");
  if (data_.size() != dim * dim)
    throw InputError("expected " + std::to_string(dim * dim) +
                     " entries, got " + std::to_string(data_.size()));
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> psi) {
  ComplexMatrix m(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j)
      m(i, j) = psi[i] * std::conj(psi[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw InputError("matrix dimension mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw InputError("matrix dimension mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (cplx& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw InputError("matrix dimension mismatch in *");
  const std::size_t n = lhs.dim_;
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

std::vector<cplx> apply(const ComplexMatrix& m, std::span<const cplx> x) {
  if (x.size() != m.dim()) throw InputError("vector length mismatch in apply");
  std::vector<cplx> y(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < m.dim(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.dim(); ++p)
    for (std::size_t q = 0; q < a.dim(); ++q)
      if (p != q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

ComplexMatrix symmetrized(const ComplexMatrix& m, double tol) {
  if (!m.all_finite()) throw InputError("hermitian_eig: non-finite entry");
  const double norm = m.frobenius_norm();
  const double skew = frobenius_distance(m, m.adjoint());
  if (skew > tol * norm)
    throw InputError("hermitian_eig: matrix is not Hermitian (||M - M^+||_F = " +
                     std::to_string(skew) + ")");
  ComplexMatrix h(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    h(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.dim(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

// Diagonalizes `a` in place. When `rows` is non-null it accumulates V^T:
// row k of *rows ends up holding eigenvector k (unsorted).
void jacobi(ComplexMatrix& a, ComplexMatrix* rows) {
  const auto& k = kernels::active();
  const std::size_t n = a.dim();
  const double norm = a.frobenius_norm();
  if (n == 1 || norm == 0.0) return;
  const double target =
      std::numeric_limits<double>::epsilon() * norm * static_cast<double>(n);
  const double negligible = 1e-3 * target / static_cast<double>(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx g = a(p, q);
        const double mag = std::abs(g);
        if (mag <= negligible) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cplx phase = g / mag;  // e^{i phi}
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double theta = (beta - alpha) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // rows p, q <- J^dagger rows; J = diag(1, e^{-i phi}) * R(c, s)
        k.rotate_pair(a.row(p).data(), a.row(q).data(), n,
                      {c, -s * phase, s, c * phase});
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          a(r, p) = std::conj(a(p, r));
          a(r, q) = std::conj(a(q, r));
        }
        a(p, p) = alpha - t * mag;
        a(q, q) = beta + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        if (rows) {
          const cplx conj_phase = std::conj(phase);
          k.rotate_pair(rows->row(p).data(), rows->row(q).data(), n,
                        {c, -s * conj_phase, s, c * conj_phase});
        }
      }
    }
  }
  const double residual = off_diagonal_norm(a);
  if (residual > target)
    throw ConvergenceError("hermitian_eig: no convergence after " +
                               std::to_string(kMaxSweeps) +
                               " sweeps, off-diagonal norm " +
                               std::to_string(residual),
                           residual);
}

std::vector<std::size_t> ascending_order(const ComplexMatrix& a) {
  std::vector<std::size_t> order(a.dim());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  return order;
}

}  // namespace

HermitianEigenResult hermitian_eig(const ComplexMatrix& m, double tol) {
  ComplexMatrix a = symmetrized(m, tol);
  ComplexMatrix rows = ComplexMatrix::identity(m.dim());
  jacobi(a, &rows);

  const auto order = ascending_order(a);
  HermitianEigenResult out{std::vector<double>(m.dim()), ComplexMatrix(m.dim())};
  for (std::size_t col = 0; col < order.size(); ++col) {
    out.eigenvalues[col] = a(order[col], order[col]).real();
    for (std::size_t r = 0; r < m.dim(); ++r)
      out.eigenvectors(r, col) = rows(order[col], r);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
  ComplexMatrix a = symmetrized(m, tol);
  jacobi(a, nullptr);
  std::vector<double> values(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) values[i] = a(i, i).real();
  std::sort(values.begin(), values.end());
  return values;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t max_dim) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  if (da > max_dim / db)
    throw CapacityError("kron: result dimension " + std::to_string(da) + "*" +
                        std::to_string(db) + " exceeds maximum " +
                        std::to_string(max_dim));
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
          out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim())
    throw InputError("frobenius_distance: dimension mismatch (" +
                     std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()) + ")");
  double s = 0.0;
  const auto da = a.data();
  const auto dbv = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += std::norm(da[i] - dbv[i]);
  return std::sqrt(s);
}

}  // namespace qwalk
