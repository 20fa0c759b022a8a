#pragma once

#include <cstddef>

namespace otda::kern {

enum class Backend { scalar, avx2 };

// True when the host CPU (and this build) can run the AVX2 backend.
bool avx2_available() noexcept;

Backend active_backend() noexcept;

// Forces a backend; throws error(invalid_parameter) if it is unavailable.
// Used by the CLI --backend flag and the equivalence tests.
void set_backend(Backend backend);

const char* backend_name(Backend backend) noexcept;

// Low-level numeric routines behind the runtime-dispatched backend.
// All pointers reference contiguous arrays; matrices are row-major.
// Each backend uses a fixed reduction order, so results are reproducible
// run to run on a given host.
struct KernelOps {
  // y[i] = exp(x[i])
  void (*vexp)(const double* x, double* y, std::size_t n);
  // sum of x
  double (*vsum)(const double* x, std::size_t n);
  // max of x (n >= 1)
  double (*vmax)(const double* x, std::size_t n);
  // sum |x - y|
  double (*l1diff)(const double* x, const double* y, std::size_t n);
  // log sum exp of x (n >= 1), max-subtracted
  double (*lse)(const double* x, std::size_t n);
  // out[i*m+j] = squared Euclidean distance between rows a_i (n x d) and b_j (m x d)
  void (*pairwise_sqdist)(const double* a, std::size_t n, const double* b,
                          std::size_t m, std::size_t d, double* out);
  // out[i] = log sum_j exp(m[i,j] + add[j]); add may be null
  void (*row_lse)(const double* m, std::size_t rows, std::size_t cols,
                  const double* add, double* out);
  // out[j] = log sum_i exp(m[i,j] + add[i]); add may be null
  void (*col_lse)(const double* m, std::size_t rows, std::size_t cols,
                  const double* add, double* out);
};

const KernelOps& ops() noexcept;

}  // namespace otda::kern
