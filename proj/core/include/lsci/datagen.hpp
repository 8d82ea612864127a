#pragma once

// Synthetic heteroskedastic Gaussian-process tasks.

#include <cstdint>
#include <string_view>
#include <vector>

#include "lsci/basemodel.hpp"
#include "lsci/functional.hpp"

namespace lsci {

enum class TaskKind { Reg1D, AR1D, ARSphere2D };

std::string_view to_string(TaskKind task) noexcept;
TaskKind parse_task_kind(std::string_view name);

struct Split {
  PairedSet pairs;
  std::vector<double> sigma;  // noise scale of each target
  std::vector<double> t;      // time index of each target
};

struct SynthDataset {
  TaskKind task;
  GridPtr grid;
  Split train;
  Split cal;
  Split test;
};

/// sigma_t = 0.1 (1.25 + sin t).
double true_sigma(double t) noexcept;
/// mu_t(x) = 2 sin(t) sin(2 pi x).
double mean_function(double t, double x) noexcept;

/// The 21 coefficients c_k ~ N(0, 1/k) of one 1D noise draw.
Vector gp_coefficients_1d(std::uint64_t seed);
/// Orthonormal Fourier basis on the grid: constant, then sin/cos pairs by
/// frequency; 21 rows.
Matrix fourier_basis_1d(const Grid& grid);
FunctionSample gen_gp_noise_1d(const GridPtr& grid, std::uint64_t seed);

/// Smooth random field on a lat/lon grid from a tapered double-Fourier basis.
FunctionSample gen_sphere_noise(const GridPtr& grid, std::uint64_t seed);

struct GenSizes {
  std::size_t n_train = 1000;
  std::size_t n_cal = 1000;
  std::size_t n_test = 1000;
};

SynthDataset gen_reg1d(const GenSizes& sizes, std::uint64_t seed, std::size_t grid_points = 64);

/// Three independent sequences of n_total observations each give n_total-1
/// consecutive pairs (g_{t-1}, g_t) per split.
SynthDataset gen_ar1d(std::size_t n_total, std::uint64_t seed, std::size_t grid_points = 64);
SynthDataset gen_ar_sphere2d(std::size_t n_total, std::uint64_t seed, std::size_t n_lat = 32,
                             std::size_t n_lon = 64);

/// Per-split pair counts; each split is its own sequence of count+1 draws.
SynthDataset gen_ar1d(const GenSizes& pairs, std::uint64_t seed, std::size_t grid_points = 64);
SynthDataset gen_ar_sphere2d(const GenSizes& pairs, std::uint64_t seed, std::size_t n_lat = 32,
                             std::size_t n_lon = 64);

/// The regression operator's taps.
Vector reg1d_taps();

}  // namespace lsci
