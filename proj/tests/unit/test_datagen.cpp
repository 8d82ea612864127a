#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lsci/datagen.hpp"
#include "lsci/random.hpp"

using namespace lsci;

namespace {

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double best = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return best;
}

}  // namespace

TEST_SUITE("datagen") {
  TEST_CASE("noise scale and mean function") {
    CHECK(true_sigma(M_PI / 2) == doctest::Approx(0.225));
    CHECK(true_sigma(-M_PI / 2) == doctest::Approx(0.025));
    for (double x : {0.1, 0.4, 0.9}) CHECK(mean_function(0.0, x) == 0.0);
    CHECK(mean_function(M_PI / 2, 0.25) == doctest::Approx(2.0));
  }

  TEST_CASE("fourier basis is orthonormal under the quadrature") {
    auto g = Grid::uniform_interval(64);
    Matrix b = fourier_basis_1d(*g);
    CHECK(b.rows() == 21);
    Matrix gram = b * g->weights().asDiagonal() * b.transpose();
    CHECK((gram - Matrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("gp coefficient variances decay as 1/k") {
    const int draws = 10000;
    Vector sum = Vector::Zero(21), sq = Vector::Zero(21);
    for (int i = 0; i < draws; ++i) {
      Vector c = gp_coefficients_1d(derive_seed(11, {static_cast<std::uint64_t>(i)}));
      sum += c;
      sq += c.cwiseAbs2();
    }
    for (Eigen::Index k = 0; k < 21; ++k) {
      const double mean = sum[k] / draws;
      const double var = sq[k] / draws - mean * mean;
      CHECK(var == doctest::Approx(1.0 / static_cast<double>(k + 1)).epsilon(0.1));
    }
  }

  TEST_CASE("gp noise is centered and reproducible") {
    auto g = Grid::uniform_interval(32);
    CHECK(gen_gp_noise_1d(g, 5).values() == gen_gp_noise_1d(g, 5).values());
    Vector acc = Vector::Zero(32);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) acc += gen_gp_noise_1d(g, static_cast<std::uint64_t>(i)).values();
    CHECK((acc / draws).cwiseAbs().maxCoeff() < 0.1);
  }

  TEST_CASE("reg1d splits") {
    auto ds = gen_reg1d(GenSizes{50, 40, 30}, 3);
    CHECK(ds.train.pairs.size() == 50);
    CHECK(ds.cal.pairs.size() == 40);
    CHECK(ds.test.pairs.size() == 30);
    CHECK(ds.grid->size() == 64);
    for (double s : ds.cal.sigma) {
      CHECK(s >= 0.025 - 1e-12);
      CHECK(s <= 0.225 + 1e-12);
    }
    for (std::size_t i = 0; i < 30; ++i) CHECK(ds.test.sigma[i] == true_sigma(ds.test.t[i]));
    auto again = gen_reg1d(GenSizes{50, 40, 30}, 3);
    CHECK(again.test.pairs.g.values() == ds.test.pairs.g.values());
    CHECK(gen_reg1d(GenSizes{50, 40, 30}, 4).test.pairs.g.values() != ds.test.pairs.g.values());
  }

  TEST_CASE("ar1d pairs are consecutive") {
    auto ds = gen_ar1d(GenSizes{20, 30, 10}, 9);
    CHECK(ds.cal.pairs.size() == 30);
    for (std::size_t j = 1; j < 30; ++j)
      CHECK(ds.cal.pairs.f.row(j) == ds.cal.pairs.g.row(j - 1));
    for (std::size_t j = 1; j < 30; ++j) CHECK(ds.cal.t[j] > ds.cal.t[j - 1]);
    CHECK(gen_ar1d(std::size_t{11}, 9).test.pairs.size() == 10);
    CHECK_THROWS_AS(gen_ar1d(std::size_t{2}, 1), Error);
  }

  TEST_CASE("ar1d targets are centered on the mean function") {
    auto ds = gen_ar1d(GenSizes{10, 4000, 10}, 2);
    const auto& grid = *ds.grid;
    Vector acc = Vector::Zero(64);
    for (std::size_t j = 0; j < 4000; ++j)
      for (std::size_t i = 0; i < 64; ++i) {
        const double mu = mean_function(ds.cal.t[j], grid.point(i));
        acc[static_cast<Eigen::Index>(i)] += (ds.cal.pairs.g.row(j)[static_cast<Eigen::Index>(i)] - mu) / ds.cal.sigma[j];
      }
    CHECK((acc / 4000.0).cwiseAbs().maxCoeff() < 0.1);
  }

  TEST_CASE("adjacent windows are closer in distribution than distant ones") {
    auto ds = gen_ar1d(GenSizes{10, 2000, 10}, 4);
    std::vector<double> r(2000);
    for (std::size_t j = 0; j < 2000; ++j) r[j] = (ds.cal.pairs.g.row(j) - ds.cal.pairs.f.row(j)).mean();
    auto window = [&](std::size_t a) { return std::vector<double>(r.begin() + a, r.begin() + a + 100); };
    CHECK(ks_distance(window(200), window(300)) < ks_distance(window(200), window(700)));
  }

  TEST_CASE("sphere noise is smooth in longitude and consistent at the poles") {
    auto g = Grid::lat_lon(32, 64);
    double sxy = 0, sxx = 0, syy = 0, sx = 0, sy = 0;
    double n = 0, pole_spread = 0, total_var = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      auto f = gen_sphere_noise(g, s);
      for (std::size_t lat = 0; lat < 32; ++lat)
        for (std::size_t lon = 0; lon < 64; ++lon) {
          const double x = f[lat * 64 + lon];
          const double y = f[lat * 64 + (lon + 1) % 64];
          sxy += x * y; sxx += x * x; syy += y * y; sx += x; sy += y; n += 1;
        }
      double lo = 1e9, hi = -1e9;
      for (std::size_t lon = 0; lon < 64; ++lon) {
        lo = std::min(lo, f[lon]);
        hi = std::max(hi, f[lon]);
      }
      pole_spread += hi - lo;
      total_var += f.values().array().square().mean();
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double corr = cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
    CHECK(corr > 0.9);
    CHECK(pole_spread / 100 < 0.25 * std::sqrt(total_var / 100));
  }

  TEST_CASE("sphere task") {
    auto ds = gen_ar_sphere2d(GenSizes{3, 4, 5}, 1, 8, 16);
    CHECK(ds.grid->size() == 128);
    CHECK(ds.test.pairs.size() == 5);
    CHECK(ds.test.pairs.f.row(1) == ds.test.pairs.g.row(0));
    CHECK(parse_task_kind("ar-sgp2d") == TaskKind::ARSphere2D);
  }
}
