#include "lsci/datagen.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "lsci/random.hpp"

namespace lsci {

namespace {

constexpr std::size_t kFourierTerms = 21;
constexpr std::size_t kSphereLat = 16;
constexpr std::size_t kSphereLonFreq = 16;
constexpr double kInputNoise = 0.1;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum Stream : std::uint64_t { kTime = 0, kInputNoiseStream = 1, kOutputNoiseStream = 2 };
enum SplitId : std::uint64_t { kTrain = 0, kCal = 1, kTest = 2 };

// Tapered double-Fourier basis on the sphere with per-coefficient standard
// deviations. Total variance at degree l + m is 1 / (1 + l + m), shared
// equally by that degree's coefficients.
struct SphereBasis {
  Matrix basis;  // n_coef x G
  Vector stddev;
};

SphereBasis sphere_basis(const Grid& grid) {
  struct Term {
    std::size_t l, m;
    bool sine;
  };
  std::vector<Term> terms;
  for (std::size_t l = 0; l < kSphereLat; ++l) {
    for (std::size_t m = 0; m <= kSphereLonFreq; ++m) {
      terms.push_back({l, m, false});
      if (m > 0 && m < kSphereLonFreq) terms.push_back({l, m, true});
    }
  }
  std::map<std::size_t, std::size_t> per_degree;
  for (const auto& t : terms) ++per_degree[t.l + t.m];

  const auto g = static_cast<Eigen::Index>(grid.size());
  SphereBasis out{Matrix(static_cast<Eigen::Index>(terms.size()), g),
                  Vector(static_cast<Eigen::Index>(terms.size()))};
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    const std::size_t degree = t.l + t.m;
    out.stddev[static_cast<Eigen::Index>(k)] =
        std::sqrt(1.0 / (1.0 + static_cast<double>(degree)) / static_cast<double>(per_degree[degree]));
    for (Eigen::Index i = 0; i < g; ++i) {
      const double colat = (90.0 - grid.latitude(static_cast<std::size_t>(i))) * std::numbers::pi / 180.0;
      const double lon = grid.longitude(static_cast<std::size_t>(i)) * std::numbers::pi / 180.0;
      const double lat_part = std::cos(static_cast<double>(t.l) * colat) *
                              std::pow(std::sin(colat), static_cast<double>(t.m));
      const double lon_part = t.sine ? std::sin(static_cast<double>(t.m) * lon)
                                     : std::cos(static_cast<double>(t.m) * lon);
      out.basis(static_cast<Eigen::Index>(k), i) = lat_part * lon_part;
    }
  }
  return out;
}

FunctionSample sphere_noise(const GridPtr& grid, const SphereBasis& b, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector c(b.stddev.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = b.stddev[k] * normal(rng);
  return FunctionSample(grid, b.basis.transpose() * c);
}

// x coordinate fed to the mean function: the grid point on [0, 1] in 1D,
// the colatitude fraction on the sphere.
Vector mean_profile(const Grid& grid, double t) {
  Vector out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.kind() == GridKind::Interval1D ? grid.point(i)
                                                         : (90.0 - grid.latitude(i)) / 180.0;
    out[static_cast<Eigen::Index>(i)] = mean_function(t, x);
  }
  return out;
}

Split make_reg_split(const GridPtr& grid, const Matrix& basis, std::size_t n, std::uint64_t seed,
                     SplitId id) {
  const Vector taps = reg1d_taps();
  const auto g = static_cast<Eigen::Index>(grid->size());
  Matrix f(static_cast<Eigen::Index>(n), g);
  Matrix y(static_cast<Eigen::Index>(n), g);
  Split s{PairedSet{FunctionSet(grid), FunctionSet(grid)}, {}, {}};
  s.sigma.resize(n);
  s.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng trng(derive_seed(seed, {id, i, kTime}));
    std::uniform_real_distribution<double> unif(-kTwoPi, kTwoPi);
    const double t = unif(trng);
    const Vector fin = mean_profile(*grid, t) +
                       kInputNoise * (basis.transpose() * gp_coefficients_1d(derive_seed(seed, {id, i, kInputNoiseStream})));
    const Vector gout = apply_taps(fin, taps) +
                        true_sigma(t) * (basis.transpose() * gp_coefficients_1d(derive_seed(seed, {id, i, kOutputNoiseStream})));
    f.row(static_cast<Eigen::Index>(i)) = fin.transpose();
    y.row(static_cast<Eigen::Index>(i)) = gout.transpose();
    s.sigma[i] = true_sigma(t);
    s.t[i] = t;
  }
  s.pairs = PairedSet{FunctionSet(grid, std::move(f), s.t), FunctionSet(grid, std::move(y), s.t)};
  return s;
}

template <typename NoiseFn>
Split make_ar_split(const GridPtr& grid, std::size_t n_total, std::uint64_t seed, SplitId id,
                    NoiseFn&& noise) {
  if (n_total < 2) throw Error(ErrorCode::InvalidArgument, "an autoregressive split needs >= 2 observations");
  const auto g = static_cast<Eigen::Index>(grid->size());
  Matrix seq(static_cast<Eigen::Index>(n_total), g);
  std::vector<double> times(n_total);
  for (std::size_t j = 0; j < n_total; ++j) {
    const double t = -kTwoPi + 2.0 * kTwoPi * static_cast<double>(j) / static_cast<double>(n_total - 1);
    times[j] = t;
    seq.row(static_cast<Eigen::Index>(j)) =
        (mean_profile(*grid, t) + true_sigma(t) * noise(derive_seed(seed, {id, j, kOutputNoiseStream})))
            .transpose();
  }
  const auto np = static_cast<Eigen::Index>(n_total - 1);
  Split s{PairedSet{FunctionSet(grid), FunctionSet(grid)}, {}, {}};
  s.t.assign(times.begin() + 1, times.end());
  for (double t : s.t) s.sigma.push_back(true_sigma(t));
  s.pairs = PairedSet{FunctionSet(grid, seq.topRows(np), s.t), FunctionSet(grid, seq.bottomRows(np), s.t)};
  return s;
}

}  // namespace

std::string_view to_string(TaskKind task) noexcept {
  switch (task) {
    case TaskKind::Reg1D: return "reg1d";
    case TaskKind::AR1D: return "ar1d";
    case TaskKind::ARSphere2D: return "sphere2d";
  }
  return "reg1d";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "reg1d" || name == "reg-gp1d") return TaskKind::Reg1D;
  if (name == "ar1d" || name == "ar-gp1d") return TaskKind::AR1D;
  if (name == "sphere2d" || name == "ar-sgp2d") return TaskKind::ARSphere2D;
  throw Error(ErrorCode::Parse, "unknown task '" + std::string(name) + "'");
}

double true_sigma(double t) noexcept { return 0.1 * (1.25 + std::sin(t)); }

double mean_function(double t, double x) noexcept {
  return 2.0 * std::sin(t) * std::sin(kTwoPi * x);
}

Vector reg1d_taps() {
  Vector taps(5);
  taps << -2.0, -1.0, 0.0, 1.0, 2.0;
  return taps;
}

Vector gp_coefficients_1d(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector c(static_cast<Eigen::Index>(kFourierTerms));
  for (std::size_t k = 1; k <= kFourierTerms; ++k)
    c[static_cast<Eigen::Index>(k - 1)] = normal(rng) / std::sqrt(static_cast<double>(k));
  return c;
}

Matrix fourier_basis_1d(const Grid& grid) {
  if (grid.kind() != GridKind::Interval1D)
    throw Error(ErrorCode::Unsupported, "1D Fourier basis on a 2D grid");
  const auto g = static_cast<Eigen::Index>(grid.size());
  Matrix b(static_cast<Eigen::Index>(kFourierTerms), g);
  for (Eigen::Index i = 0; i < g; ++i) {
    const double x = grid.point(static_cast<std::size_t>(i));
    b(0, i) = 1.0;
    for (std::size_t freq = 1; 2 * freq < kFourierTerms + 1; ++freq) {
      const auto row = static_cast<Eigen::Index>(2 * freq - 1);
      b(row, i) = std::numbers::sqrt2 * std::sin(kTwoPi * static_cast<double>(freq) * x);
      b(row + 1, i) = std::numbers::sqrt2 * std::cos(kTwoPi * static_cast<double>(freq) * x);
    }
  }
  return b;
}

FunctionSample gen_gp_noise_1d(const GridPtr& grid, std::uint64_t seed) {
  return FunctionSample(grid, fourier_basis_1d(*grid).transpose() * gp_coefficients_1d(seed));
}

FunctionSample gen_sphere_noise(const GridPtr& grid, std::uint64_t seed) {
  if (grid->kind() != GridKind::LatLon2D)
    throw Error(ErrorCode::Unsupported, "sphere noise needs a lat/lon grid");
  return sphere_noise(grid, sphere_basis(*grid), seed);
}

SynthDataset gen_reg1d(const GenSizes& sizes, std::uint64_t seed, std::size_t grid_points) {
  if (sizes.n_train < 1 || sizes.n_cal < 1 || sizes.n_test < 1)
    throw Error(ErrorCode::InvalidArgument, "split sizes must be at least 1");
  const GridPtr grid = Grid::uniform_interval(grid_points);
  const Matrix basis = fourier_basis_1d(*grid);
  return SynthDataset{TaskKind::Reg1D, grid, make_reg_split(grid, basis, sizes.n_train, seed, kTrain),
                      make_reg_split(grid, basis, sizes.n_cal, seed, kCal),
                      make_reg_split(grid, basis, sizes.n_test, seed, kTest)};
}

SynthDataset gen_ar1d(const GenSizes& pairs, std::uint64_t seed, std::size_t grid_points) {
  const GridPtr grid = Grid::uniform_interval(grid_points);
  const Matrix basis = fourier_basis_1d(*grid);
  auto noise = [&](std::uint64_t s) -> Vector { return basis.transpose() * gp_coefficients_1d(s); };
  return SynthDataset{TaskKind::AR1D, grid, make_ar_split(grid, pairs.n_train + 1, seed, kTrain, noise),
                      make_ar_split(grid, pairs.n_cal + 1, seed, kCal, noise),
                      make_ar_split(grid, pairs.n_test + 1, seed, kTest, noise)};
}

SynthDataset gen_ar_sphere2d(const GenSizes& pairs, std::uint64_t seed, std::size_t n_lat,
                             std::size_t n_lon) {
  const GridPtr grid = Grid::lat_lon(n_lat, n_lon);
  const SphereBasis basis = sphere_basis(*grid);
  auto noise = [&](std::uint64_t s) -> Vector { return sphere_noise(grid, basis, s).values(); };
  return SynthDataset{TaskKind::ARSphere2D, grid, make_ar_split(grid, pairs.n_train + 1, seed, kTrain, noise),
                      make_ar_split(grid, pairs.n_cal + 1, seed, kCal, noise),
                      make_ar_split(grid, pairs.n_test + 1, seed, kTest, noise)};
}

namespace {

GenSizes pair_counts(std::size_t n_total) {
  if (n_total < 3) throw Error(ErrorCode::InvalidArgument, "autoregressive splits need >= 3 observations");
  return GenSizes{n_total - 1, n_total - 1, n_total - 1};
}

}  // namespace

SynthDataset gen_ar1d(std::size_t n_total, std::uint64_t seed, std::size_t grid_points) {
  return gen_ar1d(pair_counts(n_total), seed, grid_points);
}

SynthDataset gen_ar_sphere2d(std::size_t n_total, std::uint64_t seed, std::size_t n_lat,
                             std::size_t n_lon) {
  return gen_ar_sphere2d(pair_counts(n_total), seed, n_lat, n_lon);
}

}  // namespace lsci
