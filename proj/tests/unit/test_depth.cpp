#include <doctest.h>

#include <algorithm>
#include <vector>

#include "lsci/depth.hpp"
#include "lsci/random.hpp"
#include "oracles.hpp"

using namespace lsci;

namespace {

// Masses are multiples of 1/64 so every partial sum is exact.
struct RandomMeasure {
  std::vector<double> loc, mass;
  double inf_mass;
};

RandomMeasure random_measure(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 6), pos(-3, 3), units(0, 64);
  const int n = count(rng);
  std::vector<int> cut(static_cast<std::size_t>(n));
  for (auto& c : cut) c = units(rng);
  std::sort(cut.begin(), cut.end());
  RandomMeasure m;
  int prev = 0;
  for (int i = 0; i < n; ++i) {
    m.loc.push_back(pos(rng));
    m.mass.push_back((cut[static_cast<std::size_t>(i)] - prev) / 64.0);
    prev = cut[static_cast<std::size_t>(i)];
  }
  m.inf_mass = (64 - prev) / 64.0;
  return m;
}

}  // namespace

TEST_SUITE("depth") {
  TEST_CASE("tukey hand examples") {
    LocalMeasure m({1, 2, 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.0);
    CHECK(m.depth(2, DepthKind::Tukey) == doctest::Approx(2.0 / 3));
    CHECK(m.depth(0, DepthKind::Tukey) == 0.0);
    LocalMeasure h({0}, {0.5}, 0.5);
    CHECK(h.depth(0, DepthKind::Tukey) == 0.5);
    CHECK(h.depth(1, DepthKind::Tukey) == 0.5);
  }

  TEST_CASE("mahalanobis and norminf peak at the center") {
    LocalMeasure m({-1, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.0);
    CHECK(m.depth(0, DepthKind::Mahalanobis) == 1.0);
    CHECK(m.depth(0, DepthKind::NormInf) == 1.0);
    CHECK(m.depth(2, DepthKind::Mahalanobis) < m.depth(1, DepthKind::Mahalanobis));
    CHECK(m.depth(-2, DepthKind::NormInf) == doctest::Approx(1.0 / 3));
  }

  TEST_CASE("tukey matches exhaustive half-line enumeration") {
    Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
      auto r = random_measure(rng);
      LocalMeasure m(r.loc, r.mass, r.inf_mass);
      for (double x = -4.0; x <= 4.0; x += 0.5)
        CHECK(m.depth(x, DepthKind::Tukey) == oracle::tukey_by_halflines(x, r.loc, r.mass, r.inf_mass));
    }
  }

  TEST_CASE("atom depth with upper own mass matches enumeration") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
      auto r = random_measure(rng);
      LocalMeasure m(r.loc, r.mass, r.inf_mass);
      for (std::size_t pos = 0; pos < m.size(); ++pos) {
        const double x = m.locations()[pos];
        CHECK(m.depth_at(pos, DepthKind::Tukey, AtomMass::Both) == m.depth(x, DepthKind::Tukey));
        double below = 0.0, rest = r.inf_mass;
        for (std::size_t i = 0; i < r.loc.size(); ++i) (r.loc[i] < x ? below : rest) += r.mass[i];
        CHECK(m.depth_at(pos, DepthKind::Tukey, AtomMass::Upper) == std::min(below, rest));
      }
    }
  }

  TEST_CASE("tukey depth is unimodal and affine invariant") {
    Rng rng(5);
    std::normal_distribution<double> n01;
    std::vector<double> loc(40), w(40, 1.0 / 50);
    for (auto& v : loc) v = n01(rng);
    LocalMeasure m(loc, w, 0.2);
    std::vector<double> moved(40);
    for (std::size_t i = 0; i < 40; ++i) moved[i] = 3.0 * loc[i] - 1.0;
    LocalMeasure a(moved, w, 0.2);
    double prev_up = 0.0, peak = -1e9;
    for (double x = -4.0; x <= 4.0; x += 0.01) {
      const double d = m.depth(x, DepthKind::Tukey);
      CHECK(a.depth(3.0 * x - 1.0, DepthKind::Tukey) == doctest::Approx(d));
      if (d >= prev_up) {
        prev_up = d;
        peak = x;
      }
    }
    double prev = 2.0;
    for (double x = peak; x <= 4.0; x += 0.01) {
      const double d = m.depth(x, DepthKind::Tukey);
      CHECK(d <= prev);
      prev = d;
    }
  }

  TEST_CASE("depths lie in the unit interval") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      auto r = random_measure(rng);
      LocalMeasure m(r.loc, r.mass, r.inf_mass);
      if (!(m.finite_mass() > 0.0)) continue;
      for (auto kind : {DepthKind::Tukey, DepthKind::NormInf, DepthKind::Mahalanobis}) {
        const double d = m.depth(0.3, kind);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
      }
    }
  }

  TEST_CASE("phi depth is the minimum over projections") {
    std::vector<double> loc{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, w(10, 0.1);
    std::vector<LocalMeasure> ms(3, LocalMeasure(loc, w, 0.0));
    const double x[] = {3, 1, 4};
    CHECK(ms[0].depth(3, DepthKind::Tukey) == doctest::Approx(0.4));
    CHECK(ms[1].depth(1, DepthKind::Tukey) == doctest::Approx(0.2));
    CHECK(ms[2].depth(4, DepthKind::Tukey) == doctest::Approx(0.5));
    CHECK(phi_depth(x, ms, DepthKind::Tukey) == doctest::Approx(0.2));
    const double single[] = {3};
    CHECK(phi_depth(single, std::span(ms).first(1), DepthKind::Tukey) == ms[0].depth(3, DepthKind::Tukey));
  }

  TEST_CASE("phi depth of a function") {
    auto g = Grid::uniform_interval(16);
    auto fam = build_random(g, 4, 1);
    std::vector<LocalMeasure> ms;
    for (std::size_t k = 0; k < 4; ++k) ms.emplace_back(std::vector<double>{-1, 0, 1}, std::vector<double>{0.3, 0.3, 0.3}, 0.1);
    CHECK(phi_depth(FunctionSample::constant(g, 100.0), fam, ms, DepthKind::Tukey) == 0.0);
    CHECK(phi_depth(FunctionSample::zeros(g), fam, ms, DepthKind::Tukey) == doctest::Approx(0.6));
  }

  TEST_CASE("measure statistics and quantiles") {
    LocalMeasure m({-1, 1}, {0.25, 0.25}, 0.5);
    CHECK(m.mean() == 0.0);
    CHECK(m.variance() == doctest::Approx(1.0));
    CHECK(m.quantile(0.25) == -1.0);
    CHECK(m.quantile(0.75) == 1.0);
    CHECK(m.cdf(0.0) == 0.25);
    CHECK(m.cdf_left(1.0) == 0.25);
    CHECK_THROWS_AS(m.quantile(0.0), Error);
    CHECK_THROWS_AS(LocalMeasure({0}, {0.3}, 0.3), Error);
  }

  TEST_CASE("split infinity placement credits both tails") {
    LocalMeasure m({0}, {0.5}, 0.5, InfinityMass::Split);
    CHECK(m.depth(1, DepthKind::Tukey) == doctest::Approx(0.25));
    CHECK(m.depth(-1, DepthKind::Tukey) == doctest::Approx(0.25));
  }

  TEST_CASE("names parse") {
    CHECK(parse_depth_kind("norminf") == DepthKind::NormInf);
    CHECK(parse_atom_mass("both") == AtomMass::Both);
    CHECK_THROWS_AS(parse_depth_kind("nope"), Error);
  }
}
