#include <immintrin.h>

#include <cmath>
#include <limits>
#include <vector>

#include "kernels_backend.hpp"

// AVX2 backend. Reductions run lane-striped in a fixed order, so results are
// reproducible run to run; they differ from the scalar backend only by
// rounding (see the equivalence tests).

namespace otda::kern::avx2 {

namespace {

constexpr double kExpHi = 709.782712893383996843;   // above: overflow to inf
constexpr double kExpLo = -745.133219101941108420;  // below: flush to zero

// 2^k for integer-valued k in [-1060, 1060], split so each half of the
// exponent stays in the normal range.
inline __m256d pow2_int(__m256d k) {
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  __m256i ik = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)),
                                _mm256_castpd_si256(magic));
  __m256i e = _mm256_slli_epi64(_mm256_add_epi64(ik, _mm256_set1_epi64x(1023)), 52);
  return _mm256_castsi256_pd(e);
}

// exp(x) via range reduction x = n log 2 + r and a rational approximation of
// exp(r) on [-log2/2, log2/2] (Cephes coefficients). About 1-2 ulp.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  __m256d rr = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, rr, p1);
  px = _mm256_fmadd_pd(px, rr, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
  qx = _mm256_fmadd_pd(qx, rr, q2);
  qx = _mm256_fmadd_pd(qx, rr, q3);
  __m256d e = _mm256_add_pd(
      one, _mm256_mul_pd(_mm256_set1_pd(2.0),
                         _mm256_div_pd(px, _mm256_sub_pd(qx, px))));

  __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, half));
  __m256d n2 = _mm256_sub_pd(n, n1);
  e = _mm256_mul_pd(_mm256_mul_pd(e, pow2_int(n1)), pow2_int(n2));

  __m256d lo = _mm256_cmp_pd(x, _mm256_set1_pd(kExpLo), _CMP_LT_OQ);
  __m256d hi = _mm256_cmp_pd(x, _mm256_set1_pd(kExpHi), _CMP_GT_OQ);
  e = _mm256_andnot_pd(lo, e);
  e = _mm256_blendv_pd(e, _mm256_set1_pd(std::numeric_limits<double>::infinity()), hi);
  return e;
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double scalar_exp_like(double x) {
  if (x < kExpLo) return 0.0;
  return std::exp(x);
}

}  // namespace

void vexp(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, exp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = scalar_exp_like(x[i]);
}

double vsum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double vmax(const double* x, std::size_t n) {
  double tail = -std::numeric_limits<double>::infinity();
  __m256d acc = _mm256_set1_pd(tail);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  double m = hmax(acc);
  for (; i < n; ++i)
    if (x[i] > tail) tail = x[i];
  return tail > m ? tail : m;
}

double l1diff(const double* x, const double* y, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i] - y[i]);
  return s;
}

double lse(const double* x, std::size_t n) {
  double mx = vmax(x, n);
  if (!(mx > -std::numeric_limits<double>::infinity())) return mx;
  __m256d vm = _mm256_set1_pd(mx);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vm)));
  double s = hsum(acc);
  for (; i < n; ++i) s += scalar_exp_like(x[i] - mx);
  return mx + std::log(s);
}

void pairwise_sqdist(const double* a, std::size_t n, const double* b,
                     std::size_t m, std::size_t d, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a + i * d;
    for (std::size_t j = 0; j < m; ++j) {
      const double* bj = b + j * d;
      __m256d acc = _mm256_setzero_pd();
      std::size_t k = 0;
      for (; k + 4 <= d; k += 4) {
        __m256d diff =
            _mm256_sub_pd(_mm256_loadu_pd(ai + k), _mm256_loadu_pd(bj + k));
        acc = _mm256_fmadd_pd(diff, diff, acc);
      }
      double s = hsum(acc);
      for (; k < d; ++k) {
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
    __m256d vmx = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    double tailmx = -std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d v = _mm256_loadu_pd(mi + j);
      if (add) v = _mm256_add_pd(v, _mm256_loadu_pd(add + j));
      vmx = _mm256_max_pd(vmx, v);
    }
    double mx = hmax(vmx);
    for (; j < cols; ++j) {
      double v = add ? mi[j] + add[j] : mi[j];
      if (v > tailmx) tailmx = v;
    }
    if (tailmx > mx) mx = tailmx;
    if (!(mx > -std::numeric_limits<double>::infinity())) {
      out[i] = mx;
      continue;
    }
    __m256d vm = _mm256_set1_pd(mx);
    __m256d acc = _mm256_setzero_pd();
    j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d v = _mm256_loadu_pd(mi + j);
      if (add) v = _mm256_add_pd(v, _mm256_loadu_pd(add + j));
      acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(v, vm)));
    }
    double s = hsum(acc);
    for (; j < cols; ++j) {
      double v = add ? mi[j] + add[j] : mi[j];
      s += scalar_exp_like(v - mx);
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
    __m256d va = _mm256_set1_pd(ai);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d v = _mm256_add_pd(_mm256_loadu_pd(mi + j), va);
      _mm256_storeu_pd(out + j, _mm256_max_pd(_mm256_loadu_pd(out + j), v));
    }
    for (; j < cols; ++j) {
      double v = mi[j] + ai;
      if (v > out[j]) out[j] = v;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const double* mi = m + i * cols;
    double ai = add ? add[i] : 0.0;
    __m256d va = _mm256_set1_pd(ai);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d v = _mm256_add_pd(_mm256_loadu_pd(mi + j), va);
      __m256d e = exp_pd(_mm256_sub_pd(v, _mm256_loadu_pd(out + j)));
      _mm256_storeu_pd(acc.data() + j, _mm256_add_pd(_mm256_loadu_pd(acc.data() + j), e));
    }
    for (; j < cols; ++j) acc[j] += scalar_exp_like(mi[j] + ai - out[j]);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (out[j] > -std::numeric_limits<double>::infinity())
      out[j] += std::log(acc[j]);
  }
}

}  // namespace otda::kern::avx2
