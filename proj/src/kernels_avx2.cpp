#include "qfric/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstddef>

// AVX2+FMA implementation of the batched kernels. The transcendental core
// is a vectorized exp/expm1 pair (rational minimax on a reduced argument,
// exponent reassembly through the IEEE-754 bit layout); everything else is
// the same algebra as the scalar reference, 4 lanes at a time. Batch tails
// (< 4 nodes) fall back to the scalar routines.

namespace qfric::kernels {
namespace {

inline __m256d splat(double x) { return _mm256_set1_pd(x); }

inline __m256d negate(__m256d x) { return _mm256_xor_pd(x, splat(-0.0)); }

// exp(x) for x <= ~0; underflows to 0 below -708. Accuracy ~1 ulp.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = splat(1.4426950408889634073599);
  const __m256d c1 = splat(6.93145751953125e-1);
  const __m256d c2 = splat(1.42860682030941723212e-6);
  const __m256d too_small = splat(-708.396418532264);

  // n = round(x * log2(e)); reduced r = x - n*ln2 via Cody-Waite split.
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);
  __m256d r2 = _mm256_mul_pd(r, r);

  // Cephes rational approximation: e^r = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)).
  __m256d P = splat(1.26177193074810590878e-4);
  P = _mm256_fmadd_pd(P, r2, splat(3.02994407707441961300e-2));
  P = _mm256_fmadd_pd(P, r2, splat(9.99999999999999999910e-1));
  __m256d Q = splat(3.00198505138664455042e-6);
  Q = _mm256_fmadd_pd(Q, r2, splat(2.52448340349684104192e-3));
  Q = _mm256_fmadd_pd(Q, r2, splat(2.27265548208155028766e-1));
  Q = _mm256_fmadd_pd(Q, r2, splat(2.00000000000000000005e0));
  __m256d rP = _mm256_mul_pd(r, P);
  __m256d e = _mm256_div_pd(rP, _mm256_sub_pd(Q, rP));
  e = _mm256_fmadd_pd(splat(2.0), e, splat(1.0));

  // Scale by 2^n: widen the int32 n to int64, bias, shift into the exponent.
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));

  return _mm256_and_pd(e, _mm256_cmp_pd(x, too_small, _CMP_GT_OQ));
}

// expm1(x): cancellation-free rational form for |x| <= 0.5*ln2, else exp-1.
inline __m256d expm1_pd(__m256d x) {
  __m256d r2 = _mm256_mul_pd(x, x);
  __m256d P = splat(1.26177193074810590878e-4);
  P = _mm256_fmadd_pd(P, r2, splat(3.02994407707441961300e-2));
  P = _mm256_fmadd_pd(P, r2, splat(9.99999999999999999910e-1));
  __m256d Q = splat(3.00198505138664455042e-6);
  Q = _mm256_fmadd_pd(Q, r2, splat(2.52448340349684104192e-3));
  Q = _mm256_fmadd_pd(Q, r2, splat(2.27265548208155028766e-1));
  Q = _mm256_fmadd_pd(Q, r2, splat(2.00000000000000000005e0));
  __m256d rP = _mm256_mul_pd(x, P);
  __m256d small = _mm256_mul_pd(splat(2.0),
                                _mm256_div_pd(rP, _mm256_sub_pd(Q, rP)));
  __m256d big = _mm256_sub_pd(exp_pd(x), splat(1.0));
  __m256d absx = _mm256_andnot_pd(splat(-0.0), x);
  __m256d use_small = _mm256_cmp_pd(absx, splat(0.34657359027997264), _CMP_LE_OQ);
  return _mm256_blendv_pd(big, small, use_small);
}

}  // namespace

void deriv_kernels_avx2(const CavityParams& c, std::span<const double> p,
                        const DerivBatch& out) {
  const std::size_t n = p.size();
  const std::size_t n4 = n - n % 4;
  if (c.single_plane) {
    const __m256d two_rho1 = splat(2.0 * c.rho1);
    const __m256d m2za = splat(-2.0 * c.z_a);
    for (std::size_t i = 0; i < n4; i += 4) {
      __m256d pi = _mm256_loadu_pd(p.data() + i);
      __m256d Ea = exp_pd(_mm256_mul_pd(m2za, pi));
      __m256d v = _mm256_mul_pd(two_rho1, Ea);
      _mm256_storeu_pd(out.dPp.data() + i, v);
      _mm256_storeu_pd(out.dPm.data() + i, v);
      _mm256_storeu_pd(out.dR.data() + i, _mm256_setzero_pd());
    }
  } else {
    const double zb = c.width - c.z_a;
    const __m256d m2za = splat(-2.0 * c.z_a);
    const __m256d m2zb = splat(-2.0 * zb);
    const __m256d m2zs = splat(-2.0 * (c.z_a + zb));
    const __m256d m2zd = splat(-2.0 * (zb - c.z_a));
    const __m256d g = splat(c.r01 * c.r02);
    const __m256d one_m_g = splat(1.0 - c.r01 * c.r02);
    const __m256d cross = splat(c.rho1 * c.r02 + c.rho2 * c.r01);
    const __m256d rho1 = splat(c.rho1), rho2 = splat(c.rho2);
    const __m256d r01 = splat(c.r01), r02 = splat(c.r02);
    const __m256d drho = splat(c.rho1 - c.rho2);
    const __m256d dr = splat(c.r01 - c.r02);
    const __m256d two = splat(2.0), four = splat(4.0);
    for (std::size_t i = 0; i < n4; i += 4) {
      __m256d pi = _mm256_loadu_pd(p.data() + i);
      __m256d Ea = exp_pd(_mm256_mul_pd(m2za, pi));
      __m256d Eb = exp_pd(_mm256_mul_pd(m2zb, pi));
      __m256d E4 = _mm256_mul_pd(Ea, Eb);
      __m256d m = expm1_pd(_mm256_mul_pd(m2zs, pi));  // E4 - 1
      __m256d D0 = _mm256_fnmadd_pd(g, m, one_m_g);   // (1-g) - g*(E4-1)
      // Ea - Eb, cancellation-free (see the scalar reference).
      __m256d dE = negate(
          _mm256_mul_pd(Ea, expm1_pd(_mm256_mul_pd(m2zd, pi))));
      __m256d inv2 = _mm256_div_pd(splat(1.0), _mm256_mul_pd(D0, D0));
      __m256d cE4 = _mm256_mul_pd(cross, E4);
      __m256d sum_rho = _mm256_fmadd_pd(rho1, Ea, _mm256_mul_pd(rho2, Eb));
      __m256d dif_rho = _mm256_fmadd_pd(drho, Ea, _mm256_mul_pd(rho2, dE));
      __m256d sum_r = _mm256_fmadd_pd(r01, Ea, _mm256_mul_pd(r02, Eb));
      __m256d dif_r = _mm256_fmadd_pd(dr, Ea, _mm256_mul_pd(r02, dE));
      __m256d dPp = _mm256_mul_pd(
          two, _mm256_fmadd_pd(sum_rho, D0, _mm256_mul_pd(sum_r, cE4)));
      __m256d dPm = _mm256_mul_pd(
          two, _mm256_fmadd_pd(dif_rho, D0, _mm256_mul_pd(dif_r, cE4)));
      _mm256_storeu_pd(out.dPp.data() + i, _mm256_mul_pd(dPp, inv2));
      _mm256_storeu_pd(out.dPm.data() + i, _mm256_mul_pd(dPm, inv2));
      _mm256_storeu_pd(out.dR.data() + i,
                       _mm256_mul_pd(_mm256_mul_pd(four, cE4), inv2));
    }
  }
  if (n4 < n) {
    DerivBatch tail{out.dPp.subspan(n4), out.dPm.subspan(n4), out.dR.subspan(n4)};
    deriv_kernels_scalar(c, p.subspan(n4), tail);
  }
}

void freq_kernels_avx2(const CavityParams& c, double omega,
                       std::span<const double> p, const FreqBatch& out) {
  const std::size_t n = p.size();
  const std::size_t n4 = n - n % 4;
  const double b1s = 2.0 * c.rho1 * omega;
  if (c.single_plane) {
    const __m256d m2za = splat(-2.0 * c.z_a);
    const __m256d r01 = splat(c.r01), b1 = splat(b1s);
    for (std::size_t i = 0; i < n4; i += 4) {
      __m256d pi = _mm256_loadu_pd(p.data() + i);
      __m256d Ea = exp_pd(_mm256_mul_pd(m2za, pi));
      __m256d re = _mm256_mul_pd(r01, Ea);
      __m256d im = _mm256_mul_pd(b1, Ea);
      _mm256_storeu_pd(out.rePp.data() + i, re);
      _mm256_storeu_pd(out.imPp.data() + i, im);
      _mm256_storeu_pd(out.rePm.data() + i, re);
      _mm256_storeu_pd(out.imPm.data() + i, im);
      _mm256_storeu_pd(out.reR.data() + i, _mm256_setzero_pd());
      _mm256_storeu_pd(out.imR.data() + i, _mm256_setzero_pd());
    }
  } else {
    const double zb = c.width - c.z_a;
    const double b2s = 2.0 * c.rho2 * omega;
    const double gs = c.r01 * c.r02;
    const __m256d m2za = splat(-2.0 * c.z_a);
    const __m256d m2zb = splat(-2.0 * zb);
    const __m256d m2zs = splat(-2.0 * (c.z_a + zb));
    const __m256d m2zd = splat(-2.0 * (zb - c.z_a));
    const __m256d g = splat(gs), one_m_g = splat(1.0 - gs);
    const __m256d ra = splat(gs - b1s * b2s);
    const __m256d rb = splat(c.r01 * b2s + c.r02 * b1s);
    const __m256d b1b2 = splat(b1s * b2s);
    const __m256d r01 = splat(c.r01), r02 = splat(c.r02);
    const __m256d b1 = splat(b1s), b2 = splat(b2s);
    const __m256d dr = splat(c.r01 - c.r02);
    const __m256d db = splat(b1s - b2s);
    const __m256d two = splat(2.0);
    for (std::size_t i = 0; i < n4; i += 4) {
      __m256d pi = _mm256_loadu_pd(p.data() + i);
      __m256d Ea = exp_pd(_mm256_mul_pd(m2za, pi));
      __m256d Eb = exp_pd(_mm256_mul_pd(m2zb, pi));
      __m256d E4 = _mm256_mul_pd(Ea, Eb);
      __m256d m = expm1_pd(_mm256_mul_pd(m2zs, pi));
      __m256d D0 = _mm256_fnmadd_pd(g, m, one_m_g);
      __m256d dE = negate(
          _mm256_mul_pd(Ea, expm1_pd(_mm256_mul_pd(m2zd, pi))));
      __m256d one_c = _mm256_fmadd_pd(E4, b1b2, D0);
      __m256d d = _mm256_mul_pd(E4, rb);
      __m256d den = _mm256_fmadd_pd(one_c, one_c, _mm256_mul_pd(d, d));
      __m256d inv = _mm256_div_pd(splat(1.0), den);
      __m256d Ap = _mm256_fmadd_pd(r01, Ea, _mm256_mul_pd(r02, Eb));
      __m256d Am = _mm256_fmadd_pd(dr, Ea, _mm256_mul_pd(r02, dE));
      __m256d Bp = _mm256_fmadd_pd(b1, Ea, _mm256_mul_pd(b2, Eb));
      __m256d Bm = _mm256_fmadd_pd(db, Ea, _mm256_mul_pd(b2, dE));
      _mm256_storeu_pd(out.rePp.data() + i,
          _mm256_mul_pd(_mm256_fmsub_pd(Ap, one_c, _mm256_mul_pd(Bp, d)), inv));
      _mm256_storeu_pd(out.imPp.data() + i,
          _mm256_mul_pd(_mm256_fmadd_pd(Bp, one_c, _mm256_mul_pd(Ap, d)), inv));
      _mm256_storeu_pd(out.rePm.data() + i,
          _mm256_mul_pd(_mm256_fmsub_pd(Am, one_c, _mm256_mul_pd(Bm, d)), inv));
      _mm256_storeu_pd(out.imPm.data() + i,
          _mm256_mul_pd(_mm256_fmadd_pd(Bm, one_c, _mm256_mul_pd(Am, d)), inv));
      __m256d cc = _mm256_mul_pd(E4, ra);
      _mm256_storeu_pd(out.reR.data() + i,
          _mm256_mul_pd(two,
              _mm256_mul_pd(_mm256_fmsub_pd(cc, one_c, _mm256_mul_pd(d, d)), inv)));
      _mm256_storeu_pd(out.imR.data() + i,
          _mm256_mul_pd(two, _mm256_mul_pd(d, inv)));
    }
  }
  if (n4 < n) {
    FreqBatch tail{out.rePp.subspan(n4), out.imPp.subspan(n4),
                   out.rePm.subspan(n4), out.imPm.subspan(n4),
                   out.reR.subspan(n4),  out.imR.subspan(n4)};
    freq_kernels_scalar(c, omega, p.subspan(n4), tail);
  }
}

}  // namespace qfric::kernels
