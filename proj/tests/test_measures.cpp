#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "qwalk/errors.hpp"
#include "qwalk/measures.hpp"
#include "qwalk/model.hpp"
#include "test_support.hpp"

using namespace qwalk;

namespace {

ComplexMatrix bell_projector() {
  return ComplexMatrix::outer(maximally_entangled_state(2).amplitudes);
}

ComplexMatrix werner(double p) {
  auto rho = bell_projector() * p;
  rho += ComplexMatrix::identity(4) * ((1.0 - p) / 4.0);
  return rho;
}

// Brute-force oracle: index-by-index partial transpose over A followed by
// Eigen's self-adjoint solver.
double oracle_negativity(const ComplexMatrix& rho, std::size_t n) {
  const std::size_t d = n * n;
  Eigen::MatrixXcd pt(d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) pt(k * n + j, i * n + l) = rho(i * n + j, k * n + l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt);
  return es.eigenvalues().cwiseAbs().sum() - 1.0;
}

ComplexMatrix product_state(std::size_t n, std::mt19937_64& rng) {
  return kron(testing::random_density(n, rng), testing::random_density(n, rng));
}

}  // namespace

TEST_CASE("partial transpose: product state") {
  std::mt19937_64 rng(1);
  const auto ra = testing::random_density(3, rng);
  const auto rb = testing::random_density(3, rng);
  const auto pt = partial_transpose(kron(ra, rb), 3, Subsystem::A);
  CHECK(frobenius_distance(pt, kron(ra.transpose(), rb)) < 1e-15);
  const auto ptb = partial_transpose(kron(ra, rb), 3, Subsystem::B);
  CHECK(frobenius_distance(ptb, kron(ra, rb.transpose())) < 1e-15);
}

TEST_CASE("partial transpose: Bell projector spectrum") {
  const auto ev = hermitian_eigenvalues(partial_transpose(bell_projector(), 2));
  CHECK(ev[0] == doctest::Approx(-0.5).epsilon(1e-14));
  for (int i = 1; i < 4; ++i) CHECK(ev[i] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("partial transpose: involution, trace and Hermiticity") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {2u, 3u, 4u}) {
    const auto rho = testing::random_density(n * n, rng);
    for (auto s : {Subsystem::A, Subsystem::B}) {
      const auto pt = partial_transpose(rho, n, s);
      CHECK(partial_transpose(pt, n, s) == rho);
      CHECK(std::abs(pt.trace() - rho.trace()) < 1e-15);
      CHECK(frobenius_distance(pt, pt.adjoint()) < 1e-15);
    }
  }
  CHECK_THROWS_AS(partial_transpose(ComplexMatrix::identity(5), 2), InputError);
  CHECK_THROWS_AS(partial_transpose(ComplexMatrix::identity(4), 3), InputError);
}

TEST_CASE("negativity: oracle values") {
  CHECK(std::abs(negativity(bell_projector(), 2) - 1.0) < 1e-9);
  const auto psi4 = maximally_entangled_state(4);
  CHECK(std::abs(negativity(ComplexMatrix::outer(psi4.amplitudes), 4) - 3.0) < 1e-9);
  CHECK(std::abs(negativity(werner(0.6), 2) - 0.4) < 1e-9);
  CHECK(std::abs(oracle_negativity(werner(0.6), 2) - 0.4) < 1e-12);
  // separable below p = 1/3
  CHECK(negativity(werner(0.3), 2) == 0.0);
}

TEST_CASE("negativity: agrees with the brute-force oracle and is A/B symmetric") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2u, 3u, 4u}) {
    for (int rep = 0; rep < 4; ++rep) {
      // mix toward the maximally entangled state so some samples are entangled
      auto rho = testing::random_density(n * n, rng) * 0.5;
      rho += ComplexMatrix::outer(maximally_entangled_state(n).amplitudes) * 0.5;
      const double na = negativity(rho, n, Subsystem::A);
      const double nb = negativity(rho, n, Subsystem::B);
      CHECK(std::abs(na - nb) < 1e-10);
      CHECK(std::abs(na - oracle_negativity(rho, n)) < 1e-10);
      CHECK(na > 0.0);
    }
  }
}

TEST_CASE("negativity vanishes on product states and their mixtures") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {2u, 3u}) {
    const auto p1 = product_state(n, rng);
    const auto p2 = product_state(n, rng);
    CHECK(negativity(p1, n) < 1e-9);
    auto mix = p1 * 0.5;
    mix += p2 * 0.5;
    CHECK(negativity(mix, n) < 1e-9);
  }
}

TEST_CASE("entropy examples") {
  CHECK(std::abs(von_neumann_entropy(bell_projector())) < 1e-9);
  CHECK(std::abs(von_neumann_entropy(ComplexMatrix::identity(16) * (1.0 / 16)) - std::log(16.0)) <
        1e-9);
  const double half[] = {0.5, 0.5, 0.0, 0.0};
  CHECK(von_neumann_entropy(ComplexMatrix::diagonal(half)) == doctest::Approx(std::log(2.0)));
  const double tiny[] = {0.5, 0.5, -5e-10, 5e-10};
  CHECK(von_neumann_entropy(ComplexMatrix::diagonal(tiny)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("entropy rejects significantly negative eigenvalues") {
  const double bad[] = {0.6, 0.5, -0.1, 0.0};
  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::diagonal(bad)), PositivityError);
  try {
    von_neumann_entropy(ComplexMatrix::diagonal(bad));
  } catch (const PositivityError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-0.1));
  }
}

TEST_CASE("entropy is unitarily invariant and bounded by ln d") {
  std::mt19937_64 rng(5);
  for (std::size_t d : {4u, 9u, 16u}) {
    const auto rho = testing::random_density(d, rng);
    const auto u = testing::random_unitary(d, rng);
    const double s = von_neumann_entropy(rho);
    CHECK(std::abs(von_neumann_entropy(u * rho * u.adjoint()) - s) < 1e-9);
    CHECK(s >= 0.0);
    CHECK(s < std::log(static_cast<double>(d)));
    // nearly maximally mixed gets close to the bound
    auto near = ComplexMatrix::identity(d) * (0.999 / d);
    near += rho * 0.001;
    CHECK(std::log(static_cast<double>(d)) - von_neumann_entropy(near) < 1e-5);
  }
}

TEST_CASE("purity examples") {
  CHECK(purity(bell_projector()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(purity(ComplexMatrix::identity(9) * (1.0 / 9)) == doctest::Approx(1.0 / 9));
  const double d[] = {0.75, 0.25};
  CHECK(purity(ComplexMatrix::diagonal(d)) == 0.625);
}

TEST_CASE("measure_series: zero noise stays maximally entangled") {
  ScenarioConfig cfg;
  cfg.n_sites = 2;
  cfg.noise = StaticNoise{1.0, 0.0};
  cfg.t_max = 10.0;
  cfg.n_grid = 50;
  cfg.n_runs = 20;
  cfg.n_batches = 4;
  const auto s = measure_series(ensemble_average(cfg), 2);
  CHECK(!s.negativity_sufficient_only);
  CHECK(s.grid.size() == 50);
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(std::abs(s.entropy[k]) < 1e-9);
    CHECK(std::abs(s.negativity[k] - 1.0) < 1e-8);
    CHECK(std::abs(s.purity[k] - 1.0) < 1e-9);
    CHECK(s.entropy_stderr[k] < 1e-8);
    CHECK(s.negativity_stderr[k] < 1e-8);
  }
}

TEST_CASE("measure_series: initial values and flag for N > 2") {
  ScenarioConfig cfg;
  cfg.n_sites = 3;
  cfg.noise = TelegraphNoise{1.0, 0.5};
  cfg.t_max = 4.0;
  cfg.n_grid = 9;
  cfg.n_runs = 40;
  cfg.n_batches = 4;
  const auto s = measure_series(ensemble_average(cfg), 3);
  CHECK(s.negativity_sufficient_only);
  CHECK(std::abs(s.entropy[0]) < 1e-9);
  CHECK(std::abs(s.negativity[0] - 2.0) < 1e-9);
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    CHECK(s.entropy[k] <= 2.0 * std::log(3.0) + 1e-9);
    CHECK(s.negativity[k] >= -1e-9);
    CHECK(s.purity[k] >= 1.0 / 9 - 1e-9);
    CHECK(s.purity[k] <= 1.0 + 1e-9);
  }
}

TEST_CASE("measure_series: batch standard error definition") {
  ScenarioConfig cfg;
  cfg.noise = StaticNoise{1.0, 1.0};
  cfg.t_max = 3.0;
  cfg.n_grid = 4;
  cfg.n_runs = 60;
  cfg.n_batches = 6;
  const auto r = ensemble_average(cfg);
  const auto s = measure_series(r, 2, 3);
  for (std::size_t k = 0; k < 4; ++k) {
    double m = 0.0, m2 = 0.0;
    for (const auto& b : r.batch_average) {
      const double e = von_neumann_entropy(b[k]);
      m += e;
      m2 += e * e;
    }
    m /= 6;
    const double sd = std::sqrt(std::max(0.0, (m2 - 6 * m * m) / 5));
    CHECK(s.entropy_stderr[k] == doctest::Approx(sd / std::sqrt(6.0)).epsilon(1e-9));
  }
  const auto s1 = measure_series(r, 2, 1);
  CHECK(s1.entropy == s.entropy);
  CHECK(s1.negativity_stderr == s.negativity_stderr);
}

TEST_CASE("measure_series: static N=2 entropy minima sit near negativity maxima") {
  ScenarioConfig cfg;
  cfg.noise = StaticNoise{1.0, 1.0};
  cfg.t_max = 20.0;
  cfg.n_grid = 200;
  cfg.n_runs = 2000;
  const auto s = measure_series(ensemble_average(cfg), 2);
  CHECK(s.entropy.back() > s.entropy.front());
  CHECK(s.negativity.back() < s.negativity.front());
  std::size_t minima = 0;
  for (std::size_t k = 1; k + 1 < s.grid.size(); ++k) {
    if (!(s.entropy[k] < s.entropy[k - 1] && s.entropy[k] < s.entropy[k + 1])) continue;
    ++minima;
    bool near = false;
    for (std::size_t j = (k >= 2 ? k - 2 : 1); j <= std::min(k + 2, s.grid.size() - 2); ++j)
      near = near || (s.negativity[j] >= s.negativity[j - 1] && s.negativity[j] >= s.negativity[j + 1]);
    CHECK(near);
  }
  CHECK(minima > 0);
}
