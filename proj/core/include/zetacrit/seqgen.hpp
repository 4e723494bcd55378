#pragma once

#include <vector>

#include "zetacrit/precision.hpp"

namespace zetacrit::seqgen {

enum class FillMethod { EtaSum, Integral };

// One constructed sequence family at a fixed argument s. u holds the
// regularized pairings F_s(Q_k) for k = 0..N, v their consecutive
// differences for k = 0..N-1, and c (when filled) the auxiliary recursion
// solution indexed 1..N with c[0] unused. Error estimates are absolute.
struct SequenceBundle {
    BigComplex s;
    long N = 0;
    std::vector<BigComplex> u;
    std::vector<BigComplex> v;
    std::vector<BigComplex> c;
    std::vector<Real> u_err, v_err, c_err;
    FillMethod u_method = FillMethod::EtaSum;
    FillMethod v_method = FillMethod::EtaSum;
    long c_row = 1; // inhomogeneity row used when c was filled
};

// u_k = F_s(Q_k) for k = 0..N (v is filled alongside, since the engine
// builds u cumulatively from the differences). Escalates the working
// precision until the eta-lattice cancellation leaves the requested bits.
SequenceBundle u_sequence(const BigComplex& s, long N, const PrecisionContext& ctx);

// v_k = u_{k+1} - u_k for k = 0..N-1. EtaSum evaluates the exact
// finite eta-lattice sums; Integral (0 < Re s < 2) evaluates
//   v_k = -pi^{s-1} sin(pi s/2) Int_0^inf M_{2(k+1)}(ix/pi) x^{-s}/sinh x dx
// and cross-checks every entry against the eta-sum route, throwing
// MethodDisagreement when they differ beyond combined error.
SequenceBundle v_sequence(const BigComplex& s, long N, const PrecisionContext& ctx,
                          FillMethod method = FillMethod::EtaSum);

// Residual of row k >= 1 of the defining recursion,
//   -(1/2)(s/(2k-1) + 1) u_{k-1} + sum_{n>=0} u_{k+n}/((2n+1)(2n+3)),
// with the infinite tail evaluated to quadrature tolerance through the
// closed-form kernel of the generating identity (no truncation).
// Needs bundle.u filled through k-1 and Re s < 2.
BigComplex recursion_residual(const SequenceBundle& bundle, long k,
                              const PrecisionContext& ctx);

// Weighted tail of the difference sequence, sum_{j>=0} v_{k-1+j}/(2j+1),
// evaluated in one pass as a half-line quadrature of a closed-form kernel
// instead of truncation. Exactly zero when s is a real even integer (the sine
// prefactor vanishes). Requires Re s < 2, k >= 1.
BigComplex v_weighted_tail(const BigComplex& s, long k, const PrecisionContext& ctx);

// d/ds of v_weighted_tail at fixed k (derivative of prefactor and integrand;
// two quadratures). Same domain; not zero at real even integers.
BigComplex v_weighted_tail_prime(const BigComplex& s, long k,
                                 const PrecisionContext& ctx);

// Residual of the row-0 identity
//   -(1/2)(s+1) u_0 + sum_{n>=0} u_{n+1}/((2n+1)(2n+3)),
// self-contained in s (u_0 = eta(s)). Requires Re s < 2.
BigComplex k0_identity(const BigComplex& s, const PrecisionContext& ctx);

// Solves the auxiliary recursion with inhomogeneity in row j:
//   delta_{kj} = -(s/(2(2k+1)) + 1/2) c_{k+1}
//                + sum_{n=0}^{k-1} c_{k-n}/((2n+1)(2n+3)),
// with c_1 fixed by the closure that makes k*c_k stay bounded:
// c_1 = (2/(s+1)) (2 eta(s-2) + eta(s))/eta(s) for j = 1, and the
// regularized tanh-moment ratio analogue for j > 1. Requires
// 0 <= Re s < 1 and eta(s) != 0 (EtaZero otherwise).
SequenceBundle c_sequence(const BigComplex& s, long N, const PrecisionContext& ctx,
                          long j = 1);

// Residual of the summed row identity (for a c bundle built with j = 1)
//   sum_{m=0}^{n} c_{n+1-m}/(2m+1) - s sum_{k=n+2}^{inf} c_k/(2k-1)
//     - 2 delta_{0n},
// with the infinite sum truncated at N and the remainder bounded through
// the fitted O(1/k) decay of c.
struct CIdentityResidual {
    BigComplex residual;
    Real tail_bound;
};
CIdentityResidual c_identity_check(const SequenceBundle& bundle, long n,
                                   const PrecisionContext& ctx);

// mu_j(s): ratio of the regularized tanh-moment integrals with exponents
// 2j+1 and 3; equals u_j/u_1, which is verified internally when u_1 != 0
// (U1Zero otherwise). Requires j >= 1 and -1 < Re s < 1.
BigComplex mu_ratio(long j, const BigComplex& s, const PrecisionContext& ctx);

// Decay diagnostic over k in [N/10, N]: peak of |v_k| k/log k (or |c_k| k
// when only c is filled), per-dyadic-window peaks, and the least-squares
// slope of log(window peak) against log k. Verdict passes when the slope
// is at most 0.05, i.e. no growing trend. Requires N >= 200.
struct DecayReport {
    Real c_star;
    std::vector<double> window_peak;
    std::vector<double> window_mid;
    double slope = 0.0;
    bool on_c = false;
    bool all_zero = false;
    bool pass = false;
};
DecayReport decay_report(const SequenceBundle& bundle);

// The analytic function with Taylor coefficients u_k, evaluated for real
// 0 < t < 1 and Re s < 2 by quadrature:
//   (1/(1-t)) [eta(s) + 2 pi^{s-1} sin(pi s/2)
//              Int_0^inf sin^2(w x/(2 pi)) x^{-s}/sinh x dx],
// w = log((1+sqrt t)/(1-sqrt t)); cross-checked against the partial sums
// sum_{k<=N} u_k t^k with a geometric tail bound (MethodDisagreement on
// failure).
BigComplex genfb_eval(const BigComplex& s, const Real& t, const PrecisionContext& ctx);

// d/ds analogue of u_sequence: u'_k as the same lattice sums against
// eta'(s-2j). The u and v arrays of the result hold the derivatives.
SequenceBundle derivative_bundle(const BigComplex& s, long N,
                                 const PrecisionContext& ctx);

} // namespace zetacrit::seqgen
