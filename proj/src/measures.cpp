#include "qwalk/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "qwalk/errors.hpp"

namespace qwalk {

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t n_sites,
                                Subsystem subsystem) {
  if (n_sites == 0 || rho.dim() != n_sites * n_sites)
    throw InputError("partial_transpose: dimension " +
                     std::to_string(rho.dim()) + " is not " +
                     std::to_string(n_sites) + "^2");
  const std::size_t n = n_sites;
  ComplexMatrix out(rho.dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const cplx v = rho(i * n + j, k * n + l);
          if (subsystem == Subsystem::A)
            out(k * n + j, i * n + l) = v;
          else
            out(i * n + l, k * n + j) = v;
        }
  return out;
}

double negativity(const ComplexMatrix& rho, std::size_t n_sites,
                  Subsystem subsystem) {
  const auto values = hermitian_eigenvalues(partial_transpose(rho, n_sites, subsystem));
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  const double neg = sum - 1.0;
  return (neg < 0.0 && neg >= -kPositivityTol) ? 0.0 : neg;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  const auto values = hermitian_eigenvalues(rho);
  if (values.front() < -kPositivityTol)
    throw PositivityError("density matrix has eigenvalue " +
                              std::to_string(values.front()),
                          values.front());
  double s = 0.0;
  for (double v : values)
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

double purity(const ComplexMatrix& rho) {
  // Tr(rho^2) = sum_ij rho_ij rho_ji
  double re = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j)
      re += (rho(i, j) * rho(j, i)).real();
  return re;
}

namespace {

double stderr_of(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

MeasureSeries measure_series(const EnsembleResult& result, std::size_t n_sites,
                             std::size_t workers) {
  const std::size_t n_grid = result.grid.size();
  if (result.average.size() != n_grid)
    throw InputError("measure_series: averages do not match the grid");
  if (result.n_batches < 2 || result.batch_average.size() != result.n_batches)
    throw InputError("measure_series: need at least two batch averages");

  MeasureSeries series;
  series.grid = result.grid;
  series.entropy.resize(n_grid);
  series.entropy_stderr.resize(n_grid);
  series.negativity.resize(n_grid);
  series.negativity_stderr.resize(n_grid);
  series.purity.resize(n_grid);
  series.negativity_sufficient_only = n_sites > 2;

  auto evaluate = [&](std::size_t k) {
    const auto& rho = result.average[k];
    series.entropy[k] = von_neumann_entropy(rho);
    series.negativity[k] = negativity(rho, n_sites);
    series.purity[k] = purity(rho);
    std::vector<double> s_b(result.n_batches), n_b(result.n_batches);
    for (std::size_t b = 0; b < result.n_batches; ++b) {
      s_b[b] = von_neumann_entropy(result.batch_average[b][k]);
      n_b[b] = negativity(result.batch_average[b][k], n_sites);
    }
    series.entropy_stderr[k] = stderr_of(s_b);
    series.negativity_stderr[k] = stderr_of(n_b);
  };

  if (workers == 0) workers = default_worker_count();
  workers = std::max<std::size_t>(1, std::min(workers, n_grid));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < n_grid; k = next.fetch_add(1)) {
      try {
        evaluate(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_grid);
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return series;
}

}  // namespace qwalk
