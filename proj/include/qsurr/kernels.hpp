#pragma once

// Data-parallel inner loops shared by the simulator, the design-matrix
// builders and the DBSCAN neighbour scan.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant selected at runtime. The AVX2 variants perform the same floating
// point operations in the same order as the scalar code (no FMA, reductions
// use four interleaved partial sums combined as (s0+s1)+(s2+s3)), so both
// backends produce bit-identical results.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qsurr::kernels {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  cplx m00, m01, m10, m11;
};

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  /// For every index i with (i & stride) == 0: (a[i], a[i+stride]) <- u * (a[i], a[i+stride]).
  /// n and stride are powers of two, stride < n.
  void (*apply_2x2)(cplx* amps, std::size_t n, std::size_t stride, const Mat2& u);
  /// sum_i |a[i]|^2 * w[i]
  double (*weighted_norm_sum)(const cplx* amps, const double* w, std::size_t n);
  /// y += a * x
  void (*axpy)(double* y, const double* x, double a, std::size_t n);
  /// out += (col - q)^2
  void (*accumulate_sq_diff)(double* out, const double* col, double q, std::size_t n);
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
};

namespace scalar {
void apply_2x2(cplx* amps, std::size_t n, std::size_t stride, const Mat2& u);
double weighted_norm_sum(const cplx* amps, const double* w, std::size_t n);
void axpy(double* y, const double* x, double a, std::size_t n);
void accumulate_sq_diff(double* out, const double* col, double q, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(QSURR_WITH_AVX2)
namespace avx2 {
void apply_2x2(cplx* amps, std::size_t n, std::size_t stride, const Mat2& u);
double weighted_norm_sum(const cplx* amps, const double* w, std::size_t n);
void axpy(double* y, const double* x, double a, std::size_t n);
void accumulate_sq_diff(double* out, const double* col, double q, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

/// True when the backend was compiled in and the CPU supports it.
bool available(Backend b);

/// Kernel table of a specific backend. Throws PreconditionError if unavailable.
const KernelTable& table(Backend b);

/// Backend picked at first use: AVX2 when available, unless the environment
/// variable QSURR_SIMD is set to "scalar".
Backend active_backend();

/// Overrides the active backend (process-wide). Throws if unavailable.
void set_backend(Backend b);

const KernelTable& active();

std::string_view backend_name(Backend b);

}  // namespace qsurr::kernels
