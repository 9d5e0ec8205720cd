#include "latkick/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace latkick::kernels {

namespace {

const Ops& select() {
  const char* forced = std::getenv("LATKICK_KERNELS");
  if (forced != nullptr) {
    if (std::strcmp(forced, "scalar") == 0) return scalar::ops;
#ifdef LATKICK_HAVE_AVX2_KERNELS
    if (std::strcmp(forced, "avx2") == 0) {
      if (avx2::supported()) return avx2::ops;
      std::fprintf(stderr, "latkick: LATKICK_KERNELS=avx2 requested but CPU lacks AVX2+FMA; using scalar kernels\n");
      return scalar::ops;
    }
#endif
    std::fprintf(stderr, "latkick: unknown LATKICK_KERNELS value '%s'; using scalar kernels\n", forced);
    return scalar::ops;
  }
#ifdef LATKICK_HAVE_AVX2_KERNELS
  if (avx2::supported()) return avx2::ops;
#endif
  return scalar::ops;
}

}  // namespace

const Ops& active() {
  static const Ops& ops = select();
  return ops;
}

double nrm2(const cplx* x, std::size_t n) { return std::sqrt(active().nrm2_sq(x, n)); }

}  // namespace latkick::kernels
