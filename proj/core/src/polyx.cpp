#include "zetacrit/polyx.hpp"

#include <mutex>
#include <shared_mutex>

#include "zetacrit/errors.hpp"

namespace zetacrit::polyx {

// ------------------------------------------------------------ RationalPoly

RationalPoly RationalPoly::shift_down() const {
    if (c_.empty()) return {};
    if (c_[0] != 0)
        throw InternalMismatch("shift_down: nonzero constant term");
    return RationalPoly(std::vector<mpq_class>(c_.begin() + 1, c_.end()));
}

RationalPoly RationalPoly::shift_up(long k) const {
    if (c_.empty()) return {};
    std::vector<mpq_class> r(c_.size() + k);
    for (size_t j = 0; j < c_.size(); ++j) r[j + k] = c_[j];
    return RationalPoly(std::move(r));
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()));
    for (size_t j = 0; j < r.size(); ++j) {
        if (j < a.c_.size()) r[j] += a.c_[j];
        if (j < b.c_.size()) r[j] += b.c_[j];
    }
    return RationalPoly(std::move(r));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
    std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()));
    for (size_t j = 0; j < r.size(); ++j) {
        if (j < a.c_.size()) r[j] += a.c_[j];
        if (j < b.c_.size()) r[j] -= b.c_[j];
    }
    return RationalPoly(std::move(r));
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(r));
}

RationalPoly operator*(const mpq_class& s, const RationalPoly& a) {
    if (s == 0) return {};
    std::vector<mpq_class> r(a.c_.size());
    for (size_t j = 0; j < r.size(); ++j) r[j] = s * a.c_[j];
    return RationalPoly(std::move(r));
}

// ------------------------------------------------------------- ML family

namespace {

std::shared_mutex g_ml_mx;
std::vector<RationalPoly> g_ml;

// (n+1) M_{n+1} = 2y M_n + (n-1) M_{n-1}
void ml_extend_locked(long n) {
    if (g_ml.empty()) {
        g_ml.push_back(RationalPoly::constant(1));
        g_ml.push_back(RationalPoly({0, 2}));
    }
    RationalPoly y({0, 1});
    while (static_cast<long>(g_ml.size()) <= n) {
        long m = static_cast<long>(g_ml.size()) - 1; // have M_m, building M_{m+1}
        RationalPoly next =
            mpq_class(1, m + 1) *
            (mpq_class(2) * (y * g_ml[m]) + mpq_class(m - 1) * g_ml[m - 1]);
        g_ml.push_back(std::move(next));
    }
}

// Even-index member with y^2 replaced by x.
RationalPoly even_ml_in_x(const RationalPoly& m2j) {
    std::vector<mpq_class> r((m2j.degree() / 2) + 1);
    for (long i = 0; i <= m2j.degree(); i += 2) r[i / 2] = m2j.coeff(i);
    return RationalPoly(std::move(r));
}

std::shared_mutex g_q_mx;
std::vector<RationalPoly> g_q;

void q_extend_locked(long k) {
    if (g_q.empty()) g_q.push_back(RationalPoly::constant(1));
    while (static_cast<long>(g_q.size()) <= k) {
        long j = static_cast<long>(g_q.size()); // building index j
        RationalPoly m2j;
        {
            std::unique_lock lk(g_ml_mx);
            ml_extend_locked(2 * j);
            m2j = g_ml[2 * j];
        }
        RationalPoly qj = g_q[j - 1] + even_ml_in_x(m2j);

        // Independent route: (2j-1 + 2x/(2j-1)) Q_{j-1} = j Q_j + (j-1) Q_{j-2}
        RationalPoly lhs =
            (RationalPoly({mpq_class(2 * j - 1), mpq_class(2, 2 * j - 1)}) *
             g_q[j - 1]);
        RationalPoly rec = lhs - (j >= 2 ? mpq_class(j - 1) * g_q[j - 2]
                                         : RationalPoly());
        rec = mpq_class(1, j) * rec;
        if (!(rec == qj))
            throw InternalMismatch("q_poly: recursion and partial-sum routes disagree at k=" +
                                   std::to_string(j));

        if (j <= 8) {
            // cheap construction-time sanity on small indices
            mpz_class fact = 1;
            for (long i = 2; i <= 2 * j; ++i) fact *= i;
            mpq_class lead(mpz_class(1) << (2 * j), fact);
            lead.canonicalize();
            if (qj.coeff(0) != 1 || qj.degree() != j || qj.leading() != lead ||
                qj.eval(mpq_class(1)) != 2 * j + 1)
                throw InternalMismatch("q_poly: structural invariant failed at k=" +
                                       std::to_string(j));
        }
        g_q.push_back(std::move(qj));
    }
}

} // namespace

RationalPoly ml_poly(long n) {
    if (n < 0) throw UsageError("ml_poly: n must be >= 0");
    {
        std::shared_lock lk(g_ml_mx);
        if (n < static_cast<long>(g_ml.size())) return g_ml[n];
    }
    std::unique_lock lk(g_ml_mx);
    ml_extend_locked(n);
    return g_ml[n];
}

std::vector<BigComplex> ml_value_lattice(const BigComplex& y, long n, long wp) {
    if (n < 0) throw UsageError("ml_value_lattice: n must be >= 0");
    std::vector<BigComplex> m;
    m.reserve(n + 1);
    m.push_back(BigComplex(1, wp));
    if (n >= 1) m.push_back(y * 2);
    for (long i = 1; i < n; ++i)
        m.push_back(((y * m[i]) * 2 + m[i - 1] * (i - 1)) / (i + 1));
    return m;
}

RationalPoly q_poly(long k) {
    if (k < 0) throw UsageError("q_poly: k must be >= 0");
    {
        std::shared_lock lk(g_q_mx);
        if (k < static_cast<long>(g_q.size())) return g_q[k];
    }
    std::unique_lock lk(g_q_mx);
    q_extend_locked(k);
    return g_q[k];
}

DilatationExpansion dilatation_expansion(long k) {
    if (k < 0) throw UsageError("dilatation_expansion: k must be >= 0");
    DilatationExpansion out;
    out.scale = k;
    out.weights.reserve(k);
    for (long m = 1; m <= k; ++m) {
        mpq_class w(2 * k + 1, (2 * m - 1) * (2 * m + 1));
        w.canonicalize();
        out.weights.push_back(w);
    }
    RationalPoly x({0, 1});
    RationalPoly lhs = x * q_poly(k).derivative();
    RationalPoly rhs = mpq_class(k) * q_poly(k);
    for (long m = 1; m <= k; ++m) rhs = rhs - out.weights[m - 1] * q_poly(k - m);
    if (!(lhs == rhs))
        throw InternalMismatch("dilatation_expansion: identity failed at k=" +
                               std::to_string(k));
    return out;
}

MlIdentitiesReport ml_identities_check(long n_max) {
    if (n_max < 1) throw UsageError("ml_identities_check: n_max must be >= 1");
    MlIdentitiesReport rep;
    rep.n_max = n_max;
    rep.derivative_ok.assign(n_max + 1, true);
    rep.odd_sum_ok.assign(n_max + 1, true);

    for (long n = 1; n <= n_max; ++n) {
        RationalPoly rhs;
        for (long k = 0; n - 2 * k - 1 >= 0; ++k)
            rhs = rhs + mpq_class(2, 2 * k + 1) * ml_poly(n - 2 * k - 1);
        rep.derivative_ok[n] = (ml_poly(n).derivative() == rhs);
        if (!rep.derivative_ok[n]) rep.all_ok = false;
    }
    for (long n = 0; n <= n_max; ++n) {
        RationalPoly rhs;
        for (long k = 0; k <= n; ++k) rhs = rhs + ml_poly(2 * k);
        rhs = mpq_class(2, 2 * n + 1) * rhs;
        rep.odd_sum_ok[n] = (ml_poly(2 * n + 1).shift_down() == rhs);
        if (!rep.odd_sum_ok[n]) rep.all_ok = false;
    }
    return rep;
}

// -------------------------------------------------------------- series

namespace {

using ScalarSeries = std::vector<mpq_class>; // index = power of t

ScalarSeries scalar_mul(const ScalarSeries& a, const ScalarSeries& b, long order) {
    ScalarSeries r(order + 1);
    for (long i = 0; i <= order && i < static_cast<long>(a.size()); ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; i + j <= order && j < static_cast<long>(b.size()); ++j)
            r[i + j] += a[i] * b[j];
    }
    return r;
}

// A(t) = sum_j t^j/(2j+1)
ScalarSeries odd_reciprocal_series(long order) {
    ScalarSeries a(order + 1);
    for (long j = 0; j <= order; ++j) a[j] = mpq_class(1, 2 * j + 1);
    return a;
}

// Series in t of cosh(sqrt(v) kappa), kappa = 2 atanh(sqrt t); coefficient of
// t^n is a polynomial in v. Uses kappa^2 = 4 t A(t)^2.
std::vector<RationalPoly> cosh_sqrt_kappa(long order) {
    ScalarSeries a = odd_reciprocal_series(order);
    ScalarSeries a2 = scalar_mul(a, a, order);
    std::vector<std::vector<mpq_class>> coef(order + 1); // [n] -> poly in v
    for (long n = 0; n <= order; ++n) coef[n].assign(n + 1, mpq_class(0));
    ScalarSeries apow{1}; // A^{2m}, trimmed to what is needed
    mpq_class inv_fact = 1;
    mpz_class pow4 = 1;
    for (long m = 0; m <= order; ++m) {
        if (m > 0) {
            apow = scalar_mul(apow, a2, order - m);
            inv_fact /= mpz_class((2 * m - 1) * (2 * m));
            pow4 *= 4;
        }
        mpq_class f = mpq_class(pow4) * inv_fact; // 4^m/(2m)!
        for (long r = 0; m + r <= order && r < static_cast<long>(apow.size()); ++r)
            coef[m + r][m] += f * apow[r];
    }
    std::vector<RationalPoly> out;
    out.reserve(order + 1);
    for (auto& c : coef) out.emplace_back(std::move(c));
    return out;
}

// Multiply a polynomial-coefficient series by 1/(1-t): prefix sums.
std::vector<RationalPoly> over_one_minus_t(std::vector<RationalPoly> s) {
    for (size_t n = 1; n < s.size(); ++n) s[n] = s[n] + s[n - 1];
    return s;
}

PolySeries expand_q(long order) {
    PolySeries ps;
    ps.order = order;
    ps.coeffs = over_one_minus_t(cosh_sqrt_kappa(order));
    return ps;
}

PolySeries expand_ml(long order) {
    // exp(y L), L = log((1+t)/(1-t)) = 2 sum t^{2j+1}/(2j+1)
    ScalarSeries L(order + 1);
    for (long j = 0; 2 * j + 1 <= order; ++j) L[2 * j + 1] = mpq_class(2, 2 * j + 1);
    std::vector<std::vector<mpq_class>> coef(order + 1);
    for (long n = 0; n <= order; ++n) coef[n].assign(n + 1, mpq_class(0));
    ScalarSeries lpow{1};
    mpq_class inv_fact = 1;
    for (long m = 0; m <= order; ++m) {
        if (m > 0) {
            lpow = scalar_mul(lpow, L, order);
            inv_fact /= m;
        }
        for (long n = m; n <= order && n < static_cast<long>(lpow.size()); ++n)
            if (lpow[n] != 0) coef[n][m] += inv_fact * lpow[n];
    }
    PolySeries ps;
    ps.order = order;
    ps.coeffs.reserve(order + 1);
    for (auto& c : coef) ps.coeffs.emplace_back(std::move(c));
    return ps;
}

PolySeries expand_r(long order) {
    // 4A/((1-t)(1+P)), P = cosh(sqrt(z) kappa). Long division by 1+P whose
    // t^0 coefficient is the constant 2.
    std::vector<RationalPoly> den = cosh_sqrt_kappa(order);
    den[0] = den[0] + RationalPoly::constant(1);
    ScalarSeries a = odd_reciprocal_series(order);
    std::vector<RationalPoly> num(order + 1);
    {
        mpq_class acc = 0;
        for (long n = 0; n <= order; ++n) {
            acc += 4 * a[n];
            num[n] = RationalPoly::constant(acc); // 4A/(1-t)
        }
    }
    std::vector<RationalPoly> r(order + 1);
    for (long n = 0; n <= order; ++n) {
        RationalPoly acc = num[n];
        for (long j = 1; j <= n; ++j) acc = acc - den[j] * r[n - j];
        r[n] = mpq_class(1, 2) * acc;
    }
    PolySeries ps;
    ps.order = order;
    ps.coeffs = std::move(r);
    return ps;
}

} // namespace

NamedSeries parse_series_name(const std::string& name) {
    if (name == "Q-generating") return NamedSeries::QGenerating;
    if (name == "ML-generating") return NamedSeries::MLGenerating;
    if (name == "R-generating") return NamedSeries::RGenerating;
    throw UnknownSeriesName(
        "unknown series '" + name +
        "'; expected Q-generating, ML-generating, or R-generating");
}

PolySeries series_expand(NamedSeries expr, long order) {
    if (order < 0) throw UsageError("series_expand: order must be >= 0");
    switch (expr) {
    case NamedSeries::QGenerating: return expand_q(order);
    case NamedSeries::MLGenerating: return expand_ml(order);
    case NamedSeries::RGenerating: return expand_r(order);
    }
    throw UsageError("series_expand: bad enum");
}

PolySeries series_expand(const std::string& expr, long order) {
    return series_expand(parse_series_name(expr), order);
}

} // namespace zetacrit::polyx
