#pragma once

#include <cstddef>

// Backend entry points shared between the dispatch unit and the per-ISA
// translation units. Not installed; internal to the library build.

namespace otda::kern::scalar {
void vexp(const double* x, double* y, std::size_t n);
double vsum(const double* x, std::size_t n);
double vmax(const double* x, std::size_t n);
double l1diff(const double* x, const double* y, std::size_t n);
double lse(const double* x, std::size_t n);
void pairwise_sqdist(const double* a, std::size_t n, const double* b,
                     std::size_t m, std::size_t d, double* out);
void row_lse(const double* m, std::size_t rows, std::size_t cols,
             const double* add, double* out);
void col_lse(const double* m, std::size_t rows, std::size_t cols,
             const double* add, double* out);
}  // namespace otda::kern::scalar

#if defined(OTDA_HAVE_AVX2)
namespace otda::kern::avx2 {
void vexp(const double* x, double* y, std::size_t n);
double vsum(const double* x, std::size_t n);
double vmax(const double* x, std::size_t n);
double l1diff(const double* x, const double* y, std::size_t n);
double lse(const double* x, std::size_t n);
void pairwise_sqdist(const double* a, std::size_t n, const double* b,
                     std::size_t m, std::size_t d, double* out);
void row_lse(const double* m, std::size_t rows, std::size_t cols,
             const double* add, double* out);
void col_lse(const double* m, std::size_t rows, std::size_t cols,
             const double* add, double* out);
}  // namespace otda::kern::avx2
#endif
