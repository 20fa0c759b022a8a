#include <cmath>
#include <limits>
#include <vector>

#include "kernels_backend.hpp"

// Reference backend: plain sequential loops, row-major reduction order.

namespace otda::kern::scalar {

void vexp(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

double vsum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double vmax(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double l1diff(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i] - y[i]);
  return s;
}

double lse(const double* x, std::size_t n) {
  double m = vmax(x, n);
  if (!(m > -std::numeric_limits<double>::infinity())) return m;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(x[i] - m);
  return m + std::log(s);
}

void pairwise_sqdist(const double* a, std::size_t n, const double* b,
                     std::size_t m, std::size_t d, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a + i * d;
    for (std::size_t j = 0; j < m; ++j) {
      const double* bj = b + j * d;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        double diff = ai[k] - bj[k];
        s += diff * diff;
      }
      out[i * m + j] = s;
    }
  }
}

void row_lse(const double* m, std::size_t rows, std::size_t cols,
             const double* add, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* mi = m + i * cols;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) {
      double v = add ? mi[j] + add[j] : mi[j];
      if (v > mx) mx = v;
    }
    if (!(mx > -std::numeric_limits<double>::infinity())) {
      out[i] = mx;
      continue;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      double v = add ? mi[j] + add[j] : mi[j];
      s += std::exp(v - mx);
    }
    out[i] = mx + std::log(s);
  }
}

void col_lse(const double* m, std::size_t rows, std::size_t cols,
             const double* add, double* out) {
  std::vector<double> acc(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j)
    out[j] = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows; ++i) {
    const double* mi = m + i * cols;
    double ai = add ? add[i] : 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      double v = mi[j] + ai;
      if (v > out[j]) out[j] = v;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const double* mi = m + i * cols;
    double ai = add ? add[i] : 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc[j] += std::exp(mi[j] + ai - out[j]);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (out[j] > -std::numeric_limits<double>::infinity())
      out[j] += std::log(acc[j]);
  }
}

}  // namespace otda::kern::scalar
