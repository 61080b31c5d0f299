#include "qfric/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace qfric::kernels {
namespace {

bool avx2_available() {
#if defined(QFRIC_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_auto() {
  if (const char* env = std::getenv("QFRIC_BACKEND")) {
    const std::string s(env);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2" && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

// -1 = auto (resolve lazily), otherwise a forced Backend value.
std::atomic<int> g_override{-1};

Backend current() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Backend>(o);
  static const Backend resolved = resolve_auto();
  return resolved;
}

}  // namespace

Backend active_backend() { return current(); }

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available())
    throw std::runtime_error("AVX2 kernel backend requested but unavailable");
  g_override.store(static_cast<int>(b), std::memory_order_relaxed);
}

void reset_backend() { g_override.store(-1, std::memory_order_relaxed); }

void deriv_kernels(const CavityParams& c, std::span<const double> p,
                   const DerivBatch& out) {
#if defined(QFRIC_HAVE_AVX2)
  if (current() == Backend::avx2) {
    deriv_kernels_avx2(c, p, out);
    return;
  }
#endif
  deriv_kernels_scalar(c, p, out);
}

void freq_kernels(const CavityParams& c, double omega,
                  std::span<const double> p, const FreqBatch& out) {
#if defined(QFRIC_HAVE_AVX2)
  if (current() == Backend::avx2) {
    freq_kernels_avx2(c, omega, p, out);
    return;
  }
#endif
  freq_kernels_scalar(c, omega, p, out);
}

}  // namespace qfric::kernels
