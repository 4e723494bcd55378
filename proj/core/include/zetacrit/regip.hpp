#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "zetacrit/polyx.hpp"
#include "zetacrit/precision.hpp"

namespace zetacrit::regip {

// Exact moment table: moment(m) is the alternating zeta value at -1-2m,
// which is what the pairing of monomials x^j, x^k evaluates to with
// m = j + k. All entries are rationals.
class InnerProductTable {
public:
    explicit InnerProductTable(std::size_t size);
    std::size_t size() const { return moments_.size(); }
    const mpq_class& moment(std::size_t m) const;
    const std::vector<mpq_class>& moments() const { return moments_; }

private:
    std::vector<mpq_class> moments_;
};

// Exact pairing of two real rational polynomials:
//   sum_{j,k} a_j b_k moment(j + k).
// Positive definite on real polynomials.
mpq_class inner(const polyx::RationalPoly& p, const polyx::RationalPoly& q);

// Integral form of the same pairing,
//   integral_0^inf p(-w^2) q(-w^2) w / sinh(pi w) dw,
// evaluated by adaptive quadrature. Agrees with inner() to ctx precision.
// Degrees above 20 are rejected.
BigComplex inner_integral(const polyx::RationalPoly& p,
                          const polyx::RationalPoly& q,
                          const PrecisionContext& ctx);

// The regularized functional F_s(p) = sum_j a_j eta(s - 2j), computed on the
// shared-base lattice with cancellation-escalated precision. At s = -1 this
// reproduces inner(): F_{-1}(p q) = inner(p, q). Positive odd integer s is a
// pole of the regularization and is rejected.
BigComplex fs_functional(const BigComplex& s, const polyx::RationalPoly& p,
                         const PrecisionContext& ctx);

// Coefficient-by-coefficient comparison, exact in rationals, of the double
// moment series sum_{k,m} moment(k+m) t1^{2k} t2^{2m} / ((2k)!(2m)!) against
// prefactor * (1 + cosh t1 cosh t2)/((cosh t1 + cosh t2)^2), where the
// prefactor is *solved for* from the constant term rather than assumed: the
// two plausible normalizations differ by a factor of 2, and the moment
// value 1/4 at (0,0) picks one. All pairs with k + m <= order are compared.
struct CoshKernelReport {
    long order = 0;
    long entries_checked = 0;
    bool all_match = false;
    mpq_class prefactor;       // normalization forced by the constant term
    long first_mismatch_k = -1;
    long first_mismatch_m = -1;
};

CoshKernelReport cosh_kernel_check(long order);

} // namespace zetacrit::regip
