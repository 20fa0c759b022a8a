#include "otda/kernels.hpp"

#include <string>

#include "kernels_backend.hpp"
#include "otda/types.hpp"

namespace otda::kern {

namespace {

KernelOps scalar_ops() {
  return KernelOps{scalar::vexp,  scalar::vsum,           scalar::vmax,
                   scalar::l1diff, scalar::lse,            scalar::pairwise_sqdist,
                   scalar::row_lse, scalar::col_lse};
}

#if defined(OTDA_HAVE_AVX2)
KernelOps avx2_ops() {
  return KernelOps{avx2::vexp,  avx2::vsum,           avx2::vmax,
                   avx2::l1diff, avx2::lse,            avx2::pairwise_sqdist,
                   avx2::row_lse, avx2::col_lse};
}
#endif

struct State {
  Backend backend;
  KernelOps ops;
};

State initial_state() {
  if (avx2_available()) {
#if defined(OTDA_HAVE_AVX2)
    return {Backend::avx2, avx2_ops()};
#endif
  }
  return {Backend::scalar, scalar_ops()};
}

State& state() {
  static State s = initial_state();
  return s;
}

}  // namespace

bool avx2_available() noexcept {
#if defined(OTDA_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() noexcept { return state().backend; }

void set_backend(Backend backend) {
  if (backend == Backend::avx2) {
    if (!avx2_available())
      throw error(errc::invalid_parameter,
                  "avx2 backend is not available on this host");
#if defined(OTDA_HAVE_AVX2)
    state() = {Backend::avx2, avx2_ops()};
#endif
    return;
  }
  state() = {Backend::scalar, scalar_ops()};
}

const char* backend_name(Backend backend) noexcept {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

const KernelOps& ops() noexcept { return state().ops; }

}  // namespace otda::kern
