#pragma once

// Complex vector and sparse matrix-vector kernels.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active set is chosen once at startup from CPUID and
// can be forced with LATKICK_KERNELS=scalar|avx2 (useful for equivalence
// testing and for reproducing results across machines).

#include <complex>
#include <cstddef>
#include <cstdint>

namespace latkick::kernels {

using cplx = std::complex<double>;

/// Non-owning view of a CSR matrix with complex entries.
struct CsrView {
  const std::int32_t* row_ptr;  // rows + 1 entries
  const std::int32_t* col_idx;  // nnz entries
  const cplx* values;           // nnz entries
  std::int32_t rows;
};

struct Ops {
  const char* name;
  // y += a * x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // x *= a
  void (*scal)(cplx a, cplx* x, std::size_t n);
  // sum conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum |x_i|^2
  double (*nrm2_sq)(const cplx* x, std::size_t n);
  // y = A * x
  void (*spmv)(const CsrView& a, const cplx* x, cplx* y);
};

namespace scalar {
extern const Ops ops;
}

#if defined(__x86_64__) || defined(_M_X64)
#define LATKICK_HAVE_AVX2_KERNELS 1
namespace avx2 {
extern const Ops ops;
bool supported();
}
#endif

/// Kernel set selected at startup (CPUID + LATKICK_KERNELS override).
const Ops& active();

inline void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scal(cplx a, cplx* x, std::size_t n) { active().scal(a, x, n); }
inline cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return active().dotc(x, y, n); }
inline double nrm2_sq(const cplx* x, std::size_t n) { return active().nrm2_sq(x, n); }
double nrm2(const cplx* x, std::size_t n);
inline void spmv(const CsrView& a, const cplx* x, cplx* y) { active().spmv(a, x, y); }

}  // namespace latkick::kernels
