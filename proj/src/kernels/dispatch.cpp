#include <atomic>
#include <cstdlib>
#include <string>

#include "qsurr/error.hpp"
#include "qsurr/kernels.hpp"

namespace qsurr::kernels {

namespace {

constexpr KernelTable kScalarTable{
    scalar::apply_2x2, scalar::weighted_norm_sum, scalar::axpy, scalar::accumulate_sq_diff,
    scalar::dot};

#if defined(QSURR_WITH_AVX2)
constexpr KernelTable kAvx2Table{
    avx2::apply_2x2, avx2::weighted_norm_sum, avx2::axpy, avx2::accumulate_sq_diff, avx2::dot};
#endif

bool cpu_has_avx2() {
#if defined(QSURR_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return has;
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("QSURR_SIMD")) {
    if (std::string(env) == "scalar") return Backend::Scalar;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool available(Backend b) {
  return b == Backend::Scalar || cpu_has_avx2();
}

const KernelTable& table(Backend b) {
  if (!available(b)) {
    throw PreconditionError("kernel backend " + std::string(backend_name(b)) +
                            " is not available on this CPU/build");
  }
#if defined(QSURR_WITH_AVX2)
  if (b == Backend::Avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  (void)table(b);
  current().store(b, std::memory_order_relaxed);
}

const KernelTable& active() { return table(active_backend()); }

std::string_view backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace qsurr::kernels
