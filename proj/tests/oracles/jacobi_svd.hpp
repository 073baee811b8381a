#pragma once

// One-sided (Hestenes) Jacobi SVD on plain nested vectors. Slow and simple;
// shares no code with the library's linear algebra.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;  // row-major, a[i][j]

struct DenseSvd {
  std::vector<double> singular_values;       // descending
  std::vector<std::vector<double>> left;     // left[r] is the r-th left singular vector
};

inline DenseSvd jacobi_svd(const Dense& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  // Work on the columns of a; rotations make them mutually orthogonal.
  std::vector<std::vector<double>> c(cols, std::vector<double>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) c[j][i] = a[i][j];

  auto dot = [rows](const std::vector<double>& x, const std::vector<double>& y) {
    long double s = 0;
    for (std::size_t i = 0; i < rows; ++i) s += static_cast<long double>(x[i]) * y[i];
    return static_cast<double>(s);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = dot(c[p], c[p]);
        const double beta = dot(c[q], c[q]);
        const double gamma = dot(c[p], c[q]);
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double xp = c[p][i];
          const double xq = c[q][i];
          c[p][i] = cs * xp - sn * xq;
          c[q][i] = sn * xp + cs * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(cols);
  for (std::size_t j = 0; j < cols; ++j) norms[j] = std::sqrt(dot(c[j], c[j]));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  DenseSvd out;
  for (std::size_t j : order) {
    out.singular_values.push_back(norms[j]);
    std::vector<double> u = c[j];
    if (norms[j] > 0)
      for (double& v : u) v /= norms[j];
    out.left.push_back(std::move(u));
  }
  return out;
}

}  // namespace oracle
