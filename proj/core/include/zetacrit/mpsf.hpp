#pragma once

#include <gmpxx.h>

#include <vector>

#include "zetacrit/precision.hpp"

namespace zetacrit::mpsf {

// Bernoulli number B_n as an exact rational; B_1 = -1/2 convention, only even
// indices are consumed downstream.
mpq_class bernoulli(unsigned long n);

// Exact eta at negative odd integers: eta(-1-2m) = (4^{1+m}-1) B_{2m+2}/(2m+2).
mpq_class eta_neg_odd(unsigned long m);

// Dirichlet eta. Accelerated alternating series on the right half plane,
// functional equation on the left; exact zeros at real negative even integers.
BigComplex eta(const BigComplex& s, const PrecisionContext& ctx);

// Riemann zeta via eta(s)/(1-2^{1-s}).
BigComplex zeta(const BigComplex& s, const PrecisionContext& ctx);

// Gamma for complex arguments (Spouge series, reflection on Re z < 1/2).
BigComplex gamma_fn(const BigComplex& z, const PrecisionContext& ctx);

// Logarithmic derivative of Gamma, same scheme as gamma_fn.
BigComplex digamma(const BigComplex& z, const PrecisionContext& ctx);

// d(eta)/ds by termwise analytic differentiation (series region) or by the
// differentiated functional equation (left region). Never finite differences.
BigComplex eta_prime(const BigComplex& s, const PrecisionContext& ctx);

// eta(s - 2j) for j = 0..count-1, evaluated in one pass at a shared working
// precision (work_bits; 0 means ctx.bits + 64). Entries keep the working
// precision so callers can weight them without a premature rounding step.
std::vector<BigComplex> eta_lattice(const BigComplex& s, long count,
                                    const PrecisionContext& ctx,
                                    long work_bits = 0);

// eta'(s - 2j) for j = 0..count-1, same conventions as eta_lattice.
std::vector<BigComplex> eta_prime_lattice(const BigComplex& s, long count,
                                          const PrecisionContext& ctx,
                                          long work_bits = 0);

namespace detail {

// Evaluations at an explicit working precision, results NOT rounded back to a
// target. Used by module internals that manage their own error budget.
BigComplex eta_at(const BigComplex& s, long work_bits);
BigComplex eta_prime_at(const BigComplex& s, long work_bits);
BigComplex gamma_at(const BigComplex& z, long result_bits);
BigComplex digamma_at(const BigComplex& z, long result_bits);

// Stable 1 - 2^e (expm1-based; e = 1-s gives the zeta denominator).
BigComplex one_minus_two_pow(const BigComplex& e, long work_bits);

// True if s has zero imaginary part and integer real part.
bool is_real_integer(const BigComplex& s);

} // namespace detail

} // namespace zetacrit::mpsf
