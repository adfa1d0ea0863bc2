#include <cmath>

#include <doctest.h>

#include "stackmfg/population.hpp"
#include "stackmfg/rng.hpp"

using namespace stackmfg;

TEST_CASE("streams are pure functions of their counters") {
  CHECK(rng::normal(1, 2, 3, 4, 0) == rng::normal(1, 2, 3, 4, 0));
  CHECK(rng::uniform(1, 2, 3, 4, 0) != rng::uniform(1, 2, 3, 4, 1));
  CHECK(rng::uniform(1, 2, 3, 4, 0) != rng::uniform(1, 2, 4, 4, 0));
  CHECK(rng::uniform(1, 2, 3, 4, 0) != rng::uniform(2, 2, 3, 4, 0));

  const ModelParams p;
  const SimConfig c;
  const NoiseBundle a = draw_noise(p, c, 10, 3);
  const NoiseBundle b = draw_noise(p, c, 10, 3);
  CHECK(a.w0_increment(17) == b.w0_increment(17));
  CHECK(a.wi_increment(4, 17) == b.wi_increment(4, 17));
  CHECK(a.xi(4) == b.xi(4));
  CHECK(a.w0_increment(17) != a.wi_increment(0, 17));  // agent streams are distinct
}

TEST_CASE("uniform draws live in the open unit interval") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng::uniform(42, i, 0, 0, 0);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse normal transform hits reference quantiles") {
  CHECK(std::abs(rng::inverse_normal_cdf(0.5)) <= 1e-14);
  CHECK(rng::inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(rng::inverse_normal_cdf(0.5 + 0.3413447460685429) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rng::inverse_normal_cdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-8));
  // symmetry
  for (double q : {0.01, 0.1, 0.3, 0.45}) {
    CHECK(rng::inverse_normal_cdf(q) ==
          doctest::Approx(-rng::inverse_normal_cdf(1.0 - q)).epsilon(1e-11));
  }
}

TEST_CASE("normal increments have the advertised moments") {
  const std::size_t n = 1'000'000;
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double z = rng::normal(20240517, i, 1, 0, 0);
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / double(n);
  const double var = sumsq / double(n) - mean * mean;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(double(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));

  // Brownian increments carry variance h
  const ModelParams p;
  SimConfig c;
  c.grid = TimeGrid(5.0, 100);
  double s2 = 0.0;
  const std::size_t m = 100000;
  for (std::size_t i = 0; i < m / c.grid.M; ++i) {
    const NoiseBundle nb = draw_noise(p, c, 1, i);
    for (std::size_t k = 0; k < c.grid.M; ++k) s2 += nb.w0_increment(k) * nb.w0_increment(k);
  }
  CHECK(s2 / double((m / c.grid.M) * c.grid.M) == doctest::Approx(c.grid.step()).epsilon(0.01));
}

TEST_CASE("initial draws follow the configured distribution") {
  ModelParams p;  // uniform on [0, 10]
  const SimConfig c;
  const std::size_t n = 100000;
  double sum = 0.0;
  const NoiseBundle noise = draw_noise(p, c, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = noise.xi(i);
    CHECK(x >= 0.0);
    CHECK(x <= 10.0);
    sum += x;
  }
  const double sigma = 10.0 / std::sqrt(12.0);
  CHECK(std::abs(sum / double(n) - 5.0) <= 4.0 * sigma / std::sqrt(double(n)));

  p.xi_dist = DistSpec::det(3.5);
  const NoiseBundle det_noise = draw_noise(p, c, 5, 0);
  for (std::size_t i = 0; i < 5; ++i) CHECK(det_noise.xi(i) == 3.5);

  p.xi0_spec = DistSpec::gaussian(2.0, 4.0);
  double s0 = 0.0, s0sq = 0.0;
  for (std::size_t path = 0; path < 100000; ++path) {
    const double v = draw_noise(p, c, 1, path).xi0();
    s0 += v;
    s0sq += v * v;
  }
  const double m0 = s0 / 100000.0;
  CHECK(std::abs(m0 - 2.0) <= 4.0 * 2.0 / std::sqrt(100000.0));
  CHECK(s0sq / 100000.0 - m0 * m0 == doctest::Approx(4.0).epsilon(0.05));
}
