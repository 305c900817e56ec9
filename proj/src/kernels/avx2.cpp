#include <immintrin.h>

#include "qsurr/kernels.hpp"

namespace qsurr::kernels::avx2 {

namespace {

// Per-lane complex product, same operation order as the scalar cmul:
// even lanes mr*ar - mi*ai, odd lanes mr*ai + mi*ar.
inline __m256d cmul(__m256d mre, __m256d mim, __m256d v) {
  const __m256d a = _mm256_mul_pd(mre, v);
  const __m256d b = _mm256_mul_pd(mim, _mm256_permute_pd(v, 0x5));
  return _mm256_addsub_pd(a, b);
}

inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }

}  // namespace

void apply_2x2(cplx* amps, std::size_t n, std::size_t stride, const Mat2& u) {
  if (stride == 1) {
    const __m256d mre_a = _mm256_setr_pd(u.m00.real(), u.m00.real(), u.m10.real(), u.m10.real());
    const __m256d mim_a = _mm256_setr_pd(u.m00.imag(), u.m00.imag(), u.m10.imag(), u.m10.imag());
    const __m256d mre_b = _mm256_setr_pd(u.m01.real(), u.m01.real(), u.m11.real(), u.m11.real());
    const __m256d mim_b = _mm256_setr_pd(u.m01.imag(), u.m01.imag(), u.m11.imag(), u.m11.imag());
    for (std::size_t i = 0; i < n; i += 2) {
      double* p = as_doubles(amps + i);
      const __m256d v = _mm256_loadu_pd(p);
      const __m256d lo = _mm256_permute2f128_pd(v, v, 0x00);
      const __m256d hi = _mm256_permute2f128_pd(v, v, 0x11);
      _mm256_storeu_pd(p, _mm256_add_pd(cmul(mre_a, mim_a, lo), cmul(mre_b, mim_b, hi)));
    }
    return;
  }
  const __m256d m00r = _mm256_set1_pd(u.m00.real()), m00i = _mm256_set1_pd(u.m00.imag());
  const __m256d m01r = _mm256_set1_pd(u.m01.real()), m01i = _mm256_set1_pd(u.m01.imag());
  const __m256d m10r = _mm256_set1_pd(u.m10.real()), m10i = _mm256_set1_pd(u.m10.imag());
  const __m256d m11r = _mm256_set1_pd(u.m11.real()), m11i = _mm256_set1_pd(u.m11.imag());
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      double* p0 = as_doubles(amps + i);
      double* p1 = as_doubles(amps + i + stride);
      const __m256d v0 = _mm256_loadu_pd(p0);
      const __m256d v1 = _mm256_loadu_pd(p1);
      const __m256d b0 = _mm256_add_pd(cmul(m00r, m00i, v0), cmul(m01r, m01i, v1));
      const __m256d b1 = _mm256_add_pd(cmul(m10r, m10i, v0), cmul(m11r, m11i, v1));
      _mm256_storeu_pd(p0, b0);
      _mm256_storeu_pd(p1, b1);
    }
  }
}

double weighted_norm_sum(const cplx* amps, const double* w, std::size_t n) {
  // hadd yields probabilities in lane order (0, 2, 1, 3); weights are permuted to match,
  // so lane k accumulates the scalar partial sum s[{0, 2, 1, 3}[k]].
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(as_doubles(amps + i));
    const __m256d b = _mm256_loadu_pd(as_doubles(amps + i + 2));
    const __m256d p = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    const __m256d wv = _mm256_permute4x64_pd(_mm256_loadu_pd(w + i), 0xD8);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(p, wv));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s[4] = {lanes[0], lanes[2], lanes[1], lanes[3]};
  for (; i < n; ++i) {
    const double re = amps[i].real(), im = amps[i].imag();
    s[i & 3] += (re * re + im * im) * w[i];
  }
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void accumulate_sq_diff(double* out, const double* col, double q, std::size_t n) {
  const __m256d qv = _mm256_set1_pd(q);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(col + i), qv);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), _mm256_mul_pd(t, t)));
  }
  for (; i < n; ++i) {
    const double t = col[i] - q;
    out[i] += t * t;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (; i < n; ++i) s[i & 3] += a[i] * b[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace qsurr::kernels::avx2
