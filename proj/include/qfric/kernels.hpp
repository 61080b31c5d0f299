#pragma once
// Batched evaluation of the cavity reflection kernels that sit in the hot
// loop of every quadrature: the frequency-derivative kernels at omega = 0
// and the finite-frequency kernels. A scalar reference implementation and
// an AVX2 variant ship; the active backend is resolved once at runtime
// (overridable for tests and reproducibility studies).

#include <span>
#include <string>

#include "qfric/units.hpp"

namespace qfric::kernels {

// Flattened geometry/material scalars consumed by the kernels.
struct CavityParams {
  double z_a = 0.5;
  double width = 2.0;  // plate separation 2w (ignored for single plane)
  double r01 = 1.0, rho1 = 0.0;
  double r02 = 1.0, rho2 = 0.0;
  bool single_plane = false;
};

CavityParams make_params(const CavityGeometry& geom);

// Output batch for d/domega at omega=0 of Im P+, Im P-, Im R (per p node).
struct DerivBatch {
  std::span<double> dPp;
  std::span<double> dPm;
  std::span<double> dR;
};

// Output batch for the finite-frequency kernels P+/-, R (Re and Im parts).
struct FreqBatch {
  std::span<double> rePp, imPp;
  std::span<double> rePm, imPm;
  std::span<double> reR, imR;
};

// Scalar reference implementations.
void deriv_kernels_scalar(const CavityParams& c, std::span<const double> p,
                          const DerivBatch& out);
void freq_kernels_scalar(const CavityParams& c, double omega,
                         std::span<const double> p, const FreqBatch& out);

#if defined(QFRIC_HAVE_AVX2)
// AVX2+FMA variants; call only when the CPU supports both (the dispatcher
// guarantees this).
void deriv_kernels_avx2(const CavityParams& c, std::span<const double> p,
                        const DerivBatch& out);
void freq_kernels_avx2(const CavityParams& c, double omega,
                       std::span<const double> p, const FreqBatch& out);
#endif

// Runtime-dispatched entry points.
void deriv_kernels(const CavityParams& c, std::span<const double> p,
                   const DerivBatch& out);
void freq_kernels(const CavityParams& c, double omega,
                  std::span<const double> p, const FreqBatch& out);

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string backend_name(Backend b);
// Test/reproducibility hook; throws std::runtime_error if the requested
// backend is unavailable on this CPU.
void force_backend(Backend b);
// Return to automatic resolution (CPU detection, QFRIC_BACKEND env var).
void reset_backend();

}  // namespace qfric::kernels
