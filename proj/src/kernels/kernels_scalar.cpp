// Reference kernels. Plain loops, no intrinsics; the SIMD variants are
// equivalence-tested against these.

#include "latkick/kernels.hpp"

#include <cmath>

namespace latkick::kernels::scalar {

namespace {

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(cplx a, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2_sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

void spmv(const CsrView& a, const cplx* x, cplx* y) {
  for (std::int32_t i = 0; i < a.rows; ++i) {
    cplx acc = 0.0;
    for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      acc += a.values[k] * x[a.col_idx[k]];
    }
    y[i] = acc;
  }
}

}  // namespace

const Ops ops = {"scalar", axpy, scal, dotc, nrm2_sq, spmv};

}  // namespace latkick::kernels::scalar
