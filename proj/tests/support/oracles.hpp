#pragma once
// Independent reference computations shared by the unit and acceptance tests.
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace lsci::oracle {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end(), [](double x, double y) { return x > y; });
  return ev;
}

/// Spectrum of the weighted covariance operator: rows are samples, w sample
/// weights (normalized here), q quadrature weights. Builds
/// Q^{1/2} C Q^{1/2} with C = sum_t w_t (r_t - m)(r_t - m)^T.
inline std::vector<double> weighted_covariance_spectrum(const std::vector<std::vector<double>>& rows,
                                                        std::vector<double> w,
                                                        const std::vector<double>& q) {
  const std::size_t n = rows.size(), g = q.size();
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  std::vector<double> mean(g, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t i = 0; i < g; ++i) mean[i] += w[t] * rows[t][i];
  std::vector<std::vector<double>> s(g, std::vector<double>(g, 0.0));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j)
        s[i][j] += w[t] * (rows[t][i] - mean[i]) * (rows[t][j] - mean[j]) * std::sqrt(q[i] * q[j]);
  return jacobi_eigenvalues(std::move(s));
}

/// Tukey depth of x under atoms (location, mass) plus mass at +inf, as the
/// infimum over every closed half-line containing x of its mass. Cut points
/// range over the atoms and x itself.
inline double tukey_by_halflines(double x, const std::vector<double>& loc, const std::vector<double>& mass,
                                 double inf_mass) {
  std::vector<double> cuts = loc;
  cuts.push_back(x);
  double best = std::numeric_limits<double>::infinity();
  for (double c : cuts) {
    if (c >= x) {  // (-inf, c]
      double m = 0.0;
      for (std::size_t i = 0; i < loc.size(); ++i)
        if (loc[i] <= c) m += mass[i];
      best = std::min(best, m);
    }
    if (c <= x) {  // [c, +inf]
      double m = inf_mass;
      for (std::size_t i = 0; i < loc.size(); ++i)
        if (loc[i] >= c) m += mass[i];
      best = std::min(best, m);
    }
  }
  return best;
}

/// Squared distance covariance from its definition
/// S1 + S2 - 2 S3 with a triple sum for S3.
inline double dcov2_direct(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  double s1 = 0.0, sa = 0.0, sb = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(x[i] - x[j]);
      const double b = std::abs(y[i] - y[j]);
      s1 += a * b;
      sa += a;
      sb += b;
      for (std::size_t k = 0; k < n; ++k) s3 += a * std::abs(y[i] - y[k]);
    }
  }
  return s1 / (nn * nn) + (sa / (nn * nn)) * (sb / (nn * nn)) - 2.0 * s3 / (nn * nn * nn);
}

inline double dcor_direct(const std::vector<double>& x, const std::vector<double>& y) {
  const double xy = dcov2_direct(x, y);
  const double xx = dcov2_direct(x, x);
  const double yy = dcov2_direct(y, y);
  if (xx <= 0.0 || yy <= 0.0) return 0.0;
  return std::sqrt(std::max(0.0, xy) / std::sqrt(xx * yy));
}

}  // namespace lsci::oracle
