#pragma once

#include <gmpxx.h>

#include <vector>

#include "zetacrit/polyx.hpp"
#include "zetacrit/precision.hpp"

namespace zetacrit::hpolya {

// R_0..R_order of the polynomial family generated by
// kappa cosh^3(kappa/2) / (sinh(kappa/2) cosh^2(sqrt(z) kappa/2)),
// kappa = log((1+sqrt t)/(1-sqrt t)); R_n is the t^n coefficient, has degree
// n, and satisfies R_n(1) = 2/(2n+1), R_n(0) = 2 sum_{k<=n} 1/(2k+1).
struct RFamily {
    long order = -1;
    std::vector<polyx::RationalPoly> polys; // polys[n] = R_n
};
RFamily r_family(long order);

// Symmetric pairing matrix, exact for rational weight exponent nu:
// entries[n-1][m-1] = (1/2) Int_0^1 R_{n-1}(z^2) R_{m-1}(z^2) z^(2+2 nu) dz.
struct PMatrix {
    long N = 0;
    mpq_class nu;
    std::vector<std::vector<mpq_class>> entries;
};
PMatrix p_matrix(long N, const mpq_class& nu = mpq_class(0));

// Exact rational check of the conjugation identity on the N-by-N corner,
//   (P A) + (P A)^T - (nu/2) P = -(1/2) f f^T,  f_i = 1/(2i-1),
// with A the upper-triangular truncation from the spectrum module. A being
// triangular makes the finite-N check exact, not merely approximate.
struct HermitianReport {
    long N = 0;
    mpq_class nu;
    bool exact = false;
    mpq_class max_defect; // largest |entry| of the difference, 0 when exact
};
HermitianReport hermitian_check(long N, const mpq_class& nu = mpq_class(0));

// Partial sums S_M = sum_{n=0}^M R_n(z) v_n for M = 0..N, with two closed
// forms of the limit:
//   series_limit   = 2 s eta(s) z^{-(1+s)/2}, the value the sums approach;
//   integral_value = 4 pi z^{-(1+s)/2} s pi^{1-s} eta(s) / sin(pi s/2), the
//                    limiting half-line integral behind the identity (at real
//                    even integer s the 0/0 is resolved through eta').
// Both vanish on zeros of eta, uniformly in z. Requires 0 < z <= 1, Re s < 2.
struct AnnihilatorReport {
    BigComplex s;
    Real z;
    std::vector<BigComplex> partial; // S_0..S_N
    BigComplex series_limit;
    BigComplex integral_value;
};
AnnihilatorReport annihilator_sum(const Real& z, const BigComplex& s, long N,
                                  const PrecisionContext& ctx);

// The symmetric positive kernel sum_{i,j>=1} P_ij t^(i-1) p^(j-1), evaluated
// from its closed two-integral solution form by quadrature and cross-checked
// against the truncated double series (MethodDisagreement beyond the combined
// tail + quadrature tolerance). Requires 0 < t < 1 and 0 < p < 1.
BigComplex genp_kernel_eval(double t, double p, const PrecisionContext& ctx);

// Residual of the kernel's defining first-order PDE at (t, p): the transport
// terms are formed with exact-step central differences of the kernel, and the
// source term is the closed form -(1/8) L(t) L(p) / sqrt(t p) with
// L(x) = log((1+sqrt x)/(1-sqrt x)). Near zero at finite-difference accuracy.
Real pde_residual(double t, double p, const PrecisionContext& ctx);

} // namespace zetacrit::hpolya
