// AVX2+FMA kernels. One __m256d holds two complex<double> values in
// interleaved (re, im) layout; complex products use the permute/fmaddsub
// pattern. Tails and short vectors fall through to scalar loops.
//
// This translation unit is compiled with -mavx2 -mfma; callers must check
// avx2::supported() (or go through kernels::active()) before using it.

#include "latkick/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace latkick::kernels::avx2 {

namespace {

// (ar + i*ai) * v for two packed complex values, with ar/ai broadcast.
inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d v) {
  __m256d vs = _mm256_permute_pd(v, 0x5);  // swap re/im within each lane pair
  return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, vs));
}

// Element-wise complex product of two packed pairs.
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);          // [ar0, ar0, ar1, ar1]
  __m256d ai = _mm256_permute_pd(a, 0xF);     // [ai0, ai0, ai1, ai1]
  __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(px + 2 * i);
    __m256d yv = _mm256_loadu_pd(py + 2 * i);
    yv = _mm256_add_pd(yv, cmul_broadcast(ar, ai, xv));
    _mm256_storeu_pd(py + 2 * i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(cplx a, cplx* x, std::size_t n) {
  double* px = reinterpret_cast<double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(px + 2 * i);
    _mm256_storeu_pd(px + 2 * i, cmul_broadcast(ar, ai, xv));
  }
  for (; i < n; ++i) x[i] *= a;
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  const double* py = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  // +1 on odd lanes, -1 on even lanes: imag = sum(xr*yi) - sum(xi*yr)
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(px + 2 * i);
    __m256d yv = _mm256_loadu_pd(py + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);  // xr*yr (even) + xi*yi (odd)
    __m256d xs = _mm256_permute_pd(xv, 0x5);   // [xi, xr, ...]
    __m256d t = _mm256_mul_pd(xs, yv);         // xi*yr (even), xr*yi (odd)
    acc_im = _mm256_fmadd_pd(t, sign, acc_im);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc_re);
  double re = buf[0] + buf[1] + buf[2] + buf[3];
  _mm256_store_pd(buf, acc_im);
  double im = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2_sq(const cplx* x, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(px + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

void spmv(const CsrView& a, const cplx* x, cplx* y) {
  for (std::int32_t i = 0; i < a.rows; ++i) {
    const std::int32_t begin = a.row_ptr[i];
    const std::int32_t end = a.row_ptr[i + 1];
    __m256d acc = _mm256_setzero_pd();
    std::int32_t k = begin;
    for (; k + 2 <= end; k += 2) {
      __m256d vv = _mm256_loadu_pd(reinterpret_cast<const double*>(a.values + k));
      __m128d x0 = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col_idx[k]));
      __m128d x1 = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col_idx[k + 1]));
      __m256d xv = _mm256_set_m128d(x1, x0);
      acc = _mm256_add_pd(acc, cmul(vv, xv));
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    cplx sum(buf[0] + buf[2], buf[1] + buf[3]);
    for (; k < end; ++k) sum += a.values[k] * x[a.col_idx[k]];
    y[i] = sum;
  }
}

}  // namespace

bool supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops ops = {"avx2", axpy, scal, dotc, nrm2_sq, spmv};

}  // namespace latkick::kernels::avx2

#endif  // x86-64
