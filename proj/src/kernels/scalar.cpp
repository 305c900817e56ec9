#include "qsurr/kernels.hpp"

namespace qsurr::kernels::scalar {

namespace {

// (mr + i mi)(ar + i ai), written out so the operation order is fixed.
inline void cmul(double mr, double mi, double ar, double ai, double& re, double& im) {
  re = mr * ar - mi * ai;
  im = mr * ai + mi * ar;
}

}  // namespace

void apply_2x2(cplx* amps, std::size_t n, std::size_t stride, const Mat2& u) {
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const double a0r = amps[i].real(), a0i = amps[i].imag();
      const double a1r = amps[i + stride].real(), a1i = amps[i + stride].imag();
      double p0r, p0i, p1r, p1i, q0r, q0i, q1r, q1i;
      cmul(u.m00.real(), u.m00.imag(), a0r, a0i, p0r, p0i);
      cmul(u.m01.real(), u.m01.imag(), a1r, a1i, p1r, p1i);
      cmul(u.m10.real(), u.m10.imag(), a0r, a0i, q0r, q0i);
      cmul(u.m11.real(), u.m11.imag(), a1r, a1i, q1r, q1i);
      amps[i] = cplx(p0r + p1r, p0i + p1i);
      amps[i + stride] = cplx(q0r + q1r, q0i + q1i);
    }
  }
}

double weighted_norm_sum(const cplx* amps, const double* w, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double re = amps[i].real(), im = amps[i].imag();
    const double p = re * re + im * im;
    s[i & 3] += p * w[i];
  }
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void accumulate_sq_diff(double* out, const double* col, double q, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = col[i] - q;
    out[i] += t * t;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s[i & 3] += a[i] * b[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace qsurr::kernels::scalar
