#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "zetacrit/precision.hpp"

namespace zetacrit::polyx {

// Dense univariate polynomial with exact rational coefficients.
// coeffs[j] multiplies x^j; the top stored coefficient is nonzero unless the
// polynomial is zero (empty vector).
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<mpq_class> c) : c_(std::move(c)) { trim(); }
    static RationalPoly constant(const mpq_class& v) {
        return v == 0 ? RationalPoly() : RationalPoly({v});
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    mpq_class coeff(long j) const {
        return (j >= 0 && j < static_cast<long>(c_.size())) ? c_[j] : mpq_class(0);
    }
    mpq_class leading() const { return c_.empty() ? mpq_class(0) : c_.back(); }

    mpq_class eval(const mpq_class& x) const {
        mpq_class acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    Real eval(const Real& x) const {
        Real acc(x.prec());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + Real(*it, x.prec());
        return acc;
    }
    BigComplex eval(const BigComplex& x) const {
        BigComplex acc(x.prec());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + BigComplex(Real(*it, x.prec()));
        return acc;
    }

    RationalPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<mpq_class> d(c_.size() - 1);
        for (size_t j = 1; j < c_.size(); ++j) d[j - 1] = static_cast<long>(j) * c_[j];
        return RationalPoly(std::move(d));
    }
    // Quotient by x; requires a zero constant term.
    RationalPoly shift_down() const;
    // Multiplication by x^k.
    RationalPoly shift_up(long k) const;

    friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator*(const mpq_class& s, const RationalPoly& a);
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
        return a.c_ == b.c_;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<mpq_class> c_;
};

// Truncated formal power series in t whose t^n coefficient is a polynomial in
// a second variable. coeffs.size() == order + 1.
struct PolySeries {
    std::vector<RationalPoly> coeffs;
    long order = -1;
};

// n-th polynomial of the family generated by ((1+t)/(1-t))^y; exact, degree n,
// parity of n.
RationalPoly ml_poly(long n);

// Numeric values of that family at a fixed argument y: M_0..M_n at precision
// wp via the three-term recursion. Much cheaper than evaluating ml_poly when
// only values are needed.
std::vector<BigComplex> ml_value_lattice(const BigComplex& y, long n, long wp);

// k-th member of the orthogonal family: built as the cumulative even-index
// sum of ml_poly with y^2 -> x, cross-checked against the three-term
// recursion. Degree k, value 1 at x = 0.
RationalPoly q_poly(long k);

// Expansion data of x d/dx q_poly(k) over lower-index members:
// x Q_k' = scale*Q_k - sum_m weights[m-1] * Q_{k-m}.
struct DilatationExpansion {
    long scale = 0;                 // equals k
    std::vector<mpq_class> weights; // weights[m-1] = (2k+1)/((2m-1)(2m+1))
};
DilatationExpansion dilatation_expansion(long k);

// Exact verification of two families of identities up to n_max:
// derivative_ok[n] (1 <= n): M_n' = 2 sum_k M_{n-2k-1}/(2k+1);
// odd_sum_ok[n] (0 <= n, index of M_{2n+1}): M_{2n+1}(x)/x =
// (2/(2n+1)) sum_{k<=n} M_{2k}(x).
struct MlIdentitiesReport {
    long n_max = 0;
    std::vector<bool> derivative_ok; // size n_max+1, index 0 unused (true)
    std::vector<bool> odd_sum_ok;    // size n_max+1
    bool all_ok = true;
};
MlIdentitiesReport ml_identities_check(long n_max);

enum class NamedSeries { QGenerating, MLGenerating, RGenerating };

// Accepts "Q-generating", "ML-generating", "R-generating".
NamedSeries parse_series_name(const std::string& name);

// Exact truncated expansion of a named bivariate generating function:
//   Q-generating:  cosh(sqrt(x) kappa) / (1-t),  kappa = 2 atanh(sqrt t)
//   ML-generating: ((1+t)/(1-t))^y
//   R-generating:  4A(t) / ((1-t)(1 + cosh(sqrt(z) kappa))), A = sum t^j/(2j+1)
// Only integer powers of t and of the second variable appear.
PolySeries series_expand(NamedSeries expr, long order);
PolySeries series_expand(const std::string& expr, long order);

} // namespace zetacrit::polyx
