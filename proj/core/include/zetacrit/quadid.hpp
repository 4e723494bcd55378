#pragma once

#include <functional>

#include "zetacrit/precision.hpp"

namespace zetacrit::quadid {

enum class Scheme { TanhSinh, AdaptivePanelLegendre };

// How to integrate: scheme picks the finite-interval rule, tolerances bound
// the accepted error estimate (0 means derive from ctx.bits), max_levels caps
// tanh-sinh halvings and panel bisection depth, osc is a phase-rate hint
// (|Im s| of an x^{-s} factor) that switches (0,1] to a log substitution and
// scales panel subdivision.
struct QuadratureSpec {
    Scheme scheme = Scheme::TanhSinh;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    int max_levels = 10;
    double osc = 0.0;

    void validate() const {
        if (abs_tol < 0 || rel_tol < 0)
            throw UsageError("QuadratureSpec: tolerances must be >= 0");
        if (max_levels < 4)
            throw UsageError("QuadratureSpec: max_levels must be >= 4");
        if (osc < 0) throw UsageError("QuadratureSpec: osc must be >= 0");
    }
};

struct QuadResult {
    BigComplex value;
    Real err_est;
};

using Integrand = std::function<BigComplex(const Real&)>;

// Integral over (0, infinity). The integrand may blow up like x^{-sigma},
// sigma < 1, at 0 and must decay exponentially at infinity. Split at x = 1:
// tanh-sinh (or a log substitution when osc is large) on (0,1], adaptive
// Gauss-Legendre panels with dyadic growth on [1,inf).
QuadResult integrate_0_inf(const Integrand& f, const QuadratureSpec& spec,
                           const PrecisionContext& ctx);

// Integral over a finite interval; endpoint singularities integrable below
// first order are handled by tanh-sinh.
QuadResult integrate_finite(const Integrand& f, const Real& a, const Real& b,
                            const QuadratureSpec& spec,
                            const PrecisionContext& ctx);

// One verified analytic identity: lhs is the quadrature side (possibly
// cross-multiplied to clear a removable 0/0), rhs the closed form, residual
// = |lhs - rhs| / scale where scale is max(|lhs|, |rhs|) floored by the
// natural magnitude of the identity so that double zeros compare absolutely.
struct IdentityResidual {
    BigComplex lhs;
    BigComplex rhs;
    Real scale;
    Real residual;
};

// integral(x^{-s}/sinh x) + pi^{1-s} eta(s)/sin(pi s/2) = 0, Re s < 0.
IdentityResidual identity_x_pow_sinh(const BigComplex& s,
                                     const PrecisionContext& ctx);

// Cross-multiplied form of
//   integral((x coth x - 1) x^{-s}/sinh x) = s pi^{1-s} eta(s)/sin(pi s/2),
// Re s < 2, s != 0: both sides are multiplied by sin(pi s/2) so that trivial
// zeros of eta compare as 0 = 0 instead of 0/0.
IdentityResidual identity_xcothx(const BigComplex& s,
                                 const PrecisionContext& ctx);

// integral_{-1}^{1} [2 - r^{ix/pi} - r^{-ix/pi}] dalpha/alpha^2 with
// r = (1+alpha)/(1-alpha), against 4(x coth x - 1); x > 0.
IdentityResidual identity_sin2_contour(const Real& x,
                                       const PrecisionContext& ctx);

// The k-th subtracted moment of the same kernel against its closed form in
// the even polynomial family evaluated at ix/pi; k >= 1, x > 0.
IdentityResidual identity_sin2_ml(long k, const Real& x,
                                  const PrecisionContext& ctx);

// Regularized tanh-power moment against its closed form, j in {1, 3};
// removable poles of the closed form at s = -1, -2 (j = 3) are evaluated as
// limits through the derivative lattice.
IdentityResidual identity_tanh_moments(const BigComplex& s, long j,
                                       const PrecisionContext& ctx);

// The regularized split moment itself, for any odd j >= 1:
//   integral_0^1 v^{s-1} tanh^j v dv
//   + integral_1^inf v^{s-1}(tanh^j v - 1) dv - 1/s,
// valid for -j < Re s < 1, s != 0.
BigComplex tanh_moment(const BigComplex& s, long j, const PrecisionContext& ctx);

} // namespace zetacrit::quadid
