#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "zetacrit/errors.hpp"

namespace zetacrit {

// Precision and tolerance policy threaded through every floating computation.
// bits is the target mantissa size of results handed back to the caller;
// internally most routines work at bits plus a guard and escalate on detected
// cancellation, up to max_escalations doublings.
struct PrecisionContext {
    long bits = 256;
    double rel_tol = 1e-30;
    int max_escalations = 3;

    PrecisionContext() = default;
    PrecisionContext(long bits_, double rel_tol_, int max_escalations_ = 3)
        : bits(bits_), rel_tol(rel_tol_), max_escalations(max_escalations_) {
        validate();
    }

    void validate() const {
        if (bits < 64)
            throw UsageError("PrecisionContext.bits must be >= 64");
        if (!(rel_tol > 0))
            throw UsageError("PrecisionContext.rel_tol must be positive");
        // rel_tol >= 2^(1-bits): below that the mantissa cannot express it.
        if (bits < 1070 && rel_tol < std::ldexp(1.0, static_cast<int>(1 - bits)))
            throw UsageError("PrecisionContext.rel_tol below representable 2^(1-bits)");
        if (max_escalations < 0)
            throw UsageError("PrecisionContext.max_escalations must be >= 0");
    }

    long work_bits() const { return bits + 64; }
};

// RAII wrapper over a single mpfr_t. Every value carries its own precision;
// binary operations allocate the result at the larger operand precision and
// round to nearest. No implicit conversions from double anywhere: numeric
// literals enter via long or exact rationals only.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(long x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    Real(const mpq_class& q, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    Real(const mpz_class& z, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real from_string(const std::string& s, mpfr_prec_t prec);

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    // floor(log2 |x|) + 1 for nonzero x; harmless sentinel for 0.
    long exponent() const { return is_zero() ? MPFR_EMIN_DEFAULT : mpfr_get_exp(v_); }

    std::string str(size_t digits) const;

private:
    mpfr_t v_;
};

inline mpfr_prec_t pmax(const Real& a, const Real& b) {
    return std::max(a.prec(), b.prec());
}

#define ZETACRIT_REAL_BINOP(op, mpfr_fn)                                  \
    inline Real operator op(const Real& a, const Real& b) {               \
        Real r(pmax(a, b));                                               \
        mpfr_fn(r.raw(), a.raw(), b.raw(), MPFR_RNDN);                    \
        return r;                                                         \
    }                                                                     \
    inline Real operator op(const Real& a, long b) {                      \
        Real r(a.prec());                                                 \
        mpfr_fn##_si(r.raw(), a.raw(), b, MPFR_RNDN);                     \
        return r;                                                         \
    }

ZETACRIT_REAL_BINOP(+, mpfr_add)
ZETACRIT_REAL_BINOP(-, mpfr_sub)
ZETACRIT_REAL_BINOP(*, mpfr_mul)
ZETACRIT_REAL_BINOP(/, mpfr_div)
#undef ZETACRIT_REAL_BINOP

inline Real operator+(long a, const Real& b) { return b + a; }
inline Real operator*(long a, const Real& b) { return b * a; }
inline Real operator-(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_sub(r.raw(), a, b.raw(), MPFR_RNDN);
    return r;
}
inline Real operator/(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_div(r.raw(), a, b.raw(), MPFR_RNDN);
    return r;
}
inline Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

inline bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()) < 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()) > 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()) <= 0; }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()) >= 0; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()) == 0; }
inline bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()) != 0; }
inline bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) < 0; }
inline bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) > 0; }
inline bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) <= 0; }
inline bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) >= 0; }
inline bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) == 0; }

#define ZETACRIT_REAL_FN1(name, mpfr_fn)             \
    inline Real name(const Real& a) {                \
        Real r(a.prec());                            \
        mpfr_fn(r.raw(), a.raw(), MPFR_RNDN);        \
        return r;                                    \
    }

ZETACRIT_REAL_FN1(abs, mpfr_abs)
ZETACRIT_REAL_FN1(sqrt, mpfr_sqrt)
ZETACRIT_REAL_FN1(exp, mpfr_exp)
ZETACRIT_REAL_FN1(expm1, mpfr_expm1)
ZETACRIT_REAL_FN1(log, mpfr_log)
ZETACRIT_REAL_FN1(sin, mpfr_sin)
ZETACRIT_REAL_FN1(cos, mpfr_cos)
ZETACRIT_REAL_FN1(tan, mpfr_tan)
ZETACRIT_REAL_FN1(atan, mpfr_atan)
ZETACRIT_REAL_FN1(atanh, mpfr_atanh)
ZETACRIT_REAL_FN1(sinh, mpfr_sinh)
ZETACRIT_REAL_FN1(cosh, mpfr_cosh)
ZETACRIT_REAL_FN1(tanh, mpfr_tanh)
ZETACRIT_REAL_FN1(coth, mpfr_coth)
#undef ZETACRIT_REAL_FN1

inline Real floor(const Real& a) {
    Real r(a.prec());
    mpfr_floor(r.raw(), a.raw());
    return r;
}
inline Real ceil(const Real& a) {
    Real r(a.prec());
    mpfr_ceil(r.raw(), a.raw());
    return r;
}

inline Real atan2(const Real& y, const Real& x) {
    Real r(pmax(y, x));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real hypot(const Real& x, const Real& y) {
    Real r(pmax(x, y));
    mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& a, const Real& b) {
    Real r(pmax(a, b));
    mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& a, long b) {
    Real r(a.prec());
    mpfr_pow_si(r.raw(), a.raw(), b, MPFR_RNDN);
    return r;
}
inline Real ldexp(const Real& a, long e) {
    Real r(a.prec());
    mpfr_mul_2si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}
inline Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
inline Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

inline Real const_pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}
inline Real const_log2(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_log2(r.raw(), MPFR_RNDN);
    return r;
}
inline Real const_euler(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_euler(r.raw(), MPFR_RNDN);
    return r;
}
// 2^e at the given precision; exact.
inline Real pow2(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si_2exp(r.raw(), 1, e, MPFR_RNDN);
    return r;
}

// Arbitrary-precision complex scalar built from two Reals. Transcendentals are
// assembled from real mpfr kernels; all branch cuts are principal.
struct BigComplex {
    Real re, im;

    explicit BigComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    BigComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    BigComplex(long r, mpfr_prec_t prec) : re(r, prec), im(0L, prec) {}
    explicit BigComplex(const Real& r) : re(r), im(0L, r.prec()) {}

    mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
};

inline BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return {a.re + b.re, a.im + b.im};
}
inline BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return {a.re - b.re, a.im - b.im};
}
inline BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }
inline BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline BigComplex operator*(const BigComplex& a, const Real& b) {
    return {a.re * b, a.im * b};
}
inline BigComplex operator*(const Real& b, const BigComplex& a) { return a * b; }
inline BigComplex operator*(const BigComplex& a, long b) { return {a.re * b, a.im * b}; }
inline BigComplex operator/(const BigComplex& a, const Real& b) {
    return {a.re / b, a.im / b};
}
inline BigComplex operator/(const BigComplex& a, long b) { return {a.re / b, a.im / b}; }
inline BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline BigComplex operator+(const BigComplex& a, long b) { return {a.re + b, a.im}; }
inline BigComplex operator-(const BigComplex& a, long b) { return {a.re - b, a.im}; }
inline BigComplex operator-(long a, const BigComplex& b) { return {a - b.re, -b.im}; }
inline BigComplex operator+(long a, const BigComplex& b) { return b + a; }
inline BigComplex operator/(long a, const BigComplex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {a * b.re / d, (-a) * b.im / d};
}

inline BigComplex conj(const BigComplex& a) { return {a.re, -a.im}; }
inline Real abs(const BigComplex& a) { return hypot(a.re, a.im); }
inline Real norm2(const BigComplex& a) { return a.re * a.re + a.im * a.im; }

inline BigComplex cexp(const BigComplex& z) {
    Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}
inline BigComplex clog(const BigComplex& z) {
    return {log(abs(z)), atan2(z.im, z.re)};
}
inline BigComplex csqrt(const BigComplex& z) {
    if (z.im.is_zero() && z.re.sgn() >= 0) return BigComplex(sqrt(z.re));
    BigComplex h = clog(z);
    return cexp({h.re / 2, h.im / 2});
}
inline BigComplex csin(const BigComplex& z) {
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}
inline BigComplex ccos(const BigComplex& z) {
    return {cos(z.re) * cosh(z.im), -(sin(z.re) * sinh(z.im))};
}
inline BigComplex csinh(const BigComplex& z) {
    return {sinh(z.re) * cos(z.im), cosh(z.re) * sin(z.im)};
}
inline BigComplex ccosh(const BigComplex& z) {
    return {cosh(z.re) * cos(z.im), sinh(z.re) * sin(z.im)};
}
inline BigComplex ccot(const BigComplex& z) { return ccos(z) / csin(z); }
inline BigComplex ccoth(const BigComplex& z) { return ccosh(z) / csinh(z); }
inline BigComplex cpow(const BigComplex& base, const BigComplex& e) {
    return cexp(e * clog(base));
}
// x^w for real x > 0: the workhorse of every x^{-s} integrand.
inline BigComplex rpow(const Real& x, const BigComplex& w) {
    Real lx = log(x);
    Real m = exp(w.re * lx);
    Real ph = w.im * lx;
    return {m * cos(ph), m * sin(ph)};
}
inline BigComplex cpow(const BigComplex& base, long e) {
    mpfr_prec_t p = base.prec();
    BigComplex acc(1, p);
    BigComplex b = base;
    bool invert = e < 0;
    unsigned long n = invert ? static_cast<unsigned long>(-(e + 1)) + 1UL
                             : static_cast<unsigned long>(e);
    while (n) {
        if (n & 1UL) acc = acc * b;
        b = b * b;
        n >>= 1;
    }
    if (invert) acc = 1L / acc;
    return acc;
}

// Round a value to the context's target precision (results handed to callers).
inline Real round_to(const Real& x, long bits) {
    Real r(bits);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline BigComplex round_to(const BigComplex& z, long bits) {
    return {round_to(z.re, bits), round_to(z.im, bits)};
}

} // namespace zetacrit
