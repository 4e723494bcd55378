#include "doctest.h"

#include "zetacrit/mpsf.hpp"
#include "zetacrit/polyx.hpp"
#include "zetacrit/regip.hpp"
#include "zetacrit/seqgen.hpp"

using namespace zetacrit;
using seqgen::FillMethod;
using seqgen::SequenceBundle;

namespace {

PrecisionContext ctx_bits(long bits) {
    PrecisionContext c;
    c.bits = bits;
    return c;
}

Real at(double re, long prec = 320) {
    Real r(prec);
    mpfr_set_d(r.raw(), re, MPFR_RNDN);
    return r;
}

BigComplex cat(double re, double im, long prec = 320) {
    return {at(re, prec), at(im, prec)};
}

double gap(const BigComplex& a, const BigComplex& b) {
    return abs(a - b).to_double();
}

BigComplex first_zero(long prec = 320) {
    return {Real(mpq_class(1, 2), prec),
            Real::from_string("14.1347251417346937904572519836", prec)};
}

} // namespace

TEST_CASE("u starts from the eta lattice") {
    auto ctx = ctx_bits(256);

    SUBCASE("real argument") {
        BigComplex s = cat(0.3, 0);
        auto ub = seqgen::u_sequence(s, 4, ctx);
        CHECK(ub.N == 4);
        CHECK(ub.u.size() == 5);
        CHECK(ub.v.size() == 4);
        BigComplex e0 = mpsf::eta(s, ctx);
        BigComplex e2 = mpsf::eta(s - 2, ctx);
        CHECK(gap(ub.u[0], e0) < 1e-70);
        CHECK(gap(ub.u[1], e0 + e2 * 2) < 1e-70);
        CHECK(gap(ub.v[0], e2 * 2) < 1e-70);
    }

    SUBCASE("complex argument") {
        BigComplex s = cat(0.5, 3.0);
        auto ub = seqgen::u_sequence(s, 3, ctx);
        CHECK(gap(ub.u[0], mpsf::eta(s, ctx)) < 1e-68);
        CHECK(gap(ub.v[0], mpsf::eta(s - 2, ctx) * 2) < 1e-68);
    }

    SUBCASE("differences telescope within the stated errors") {
        auto ub = seqgen::u_sequence(cat(0.3, 0), 8, ctx);
        for (long k = 0; k < 8; ++k) {
            Real budget = ub.u_err[k + 1] + ub.u_err[k] + ub.v_err[k];
            CHECK(gap(ub.u[k + 1] - ub.u[k], ub.v[k]) <= budget.to_double());
        }
    }

    SUBCASE("positive odd integers are poles of the regularization") {
        CHECK_THROWS_AS(seqgen::u_sequence(cat(3, 0), 2, ctx), PoleArgument);
        CHECK_THROWS_AS(seqgen::u_sequence(cat(1, 0), 2, ctx), PoleArgument);
        CHECK_THROWS_AS(seqgen::u_sequence(cat(0.3, 0), 0, ctx), UsageError);
    }
}

TEST_CASE("u agrees with the exact-polynomial pairing route") {
    auto ctx = ctx_bits(256);
    BigComplex s = cat(0.3, 0);
    auto ub = seqgen::u_sequence(s, 20, ctx);
    for (long k : {0L, 1L, 2L, 3L, 5L, 9L, 14L, 20L}) {
        BigComplex fs = regip::fs_functional(s, polyx::q_poly(k), ctx);
        CHECK(gap(ub.u[k], fs) < 1e-65);
    }
    BigComplex sc = cat(0.5, 1.0);
    auto uc = seqgen::u_sequence(sc, 7, ctx);
    for (long k : {1L, 7L}) {
        BigComplex fs = regip::fs_functional(sc, polyx::q_poly(k), ctx);
        CHECK(gap(uc.u[k], fs) < 1e-65);
    }
}

TEST_CASE("degenerate arguments collapse exactly") {
    auto ctx = ctx_bits(256);

    SUBCASE("s = -2 gives the zero sequence") {
        auto ub = seqgen::u_sequence(cat(-2, 0), 6, ctx);
        for (auto& z : ub.u) CHECK(z.is_zero());
        for (auto& z : ub.v) CHECK(z.is_zero());
    }

    SUBCASE("s = 0 freezes u at one half") {
        auto ub = seqgen::u_sequence(cat(0, 0), 6, ctx);
        BigComplex half{Real(mpq_class(1, 2), 320), Real(0, 320)};
        for (auto& z : ub.u) CHECK(gap(z, half) < 1e-75);
        for (auto& z : ub.v) CHECK(z.is_zero());
    }
}

TEST_CASE("integral route agrees with the eta sums") {
    auto ctx = ctx_bits(256);

    SUBCASE("real argument") {
        BigComplex s = cat(0.3, 0);
        auto vi = seqgen::v_sequence(s, 5, ctx, FillMethod::Integral);
        CHECK(vi.v_method == FillMethod::Integral);
        auto ve = seqgen::u_sequence(s, 5, ctx);
        for (long k = 0; k < 5; ++k) CHECK(gap(vi.v[k], ve.v[k]) < 1e-60);
    }

    SUBCASE("complex argument") {
        BigComplex s = cat(0.5, 1.0);
        auto vi = seqgen::v_sequence(s, 4, ctx, FillMethod::Integral);
        auto ve = seqgen::u_sequence(s, 4, ctx);
        for (long k = 0; k < 4; ++k) CHECK(gap(vi.v[k], ve.v[k]) < 1e-60);
    }

    SUBCASE("strip restriction") {
        CHECK_THROWS_AS(
            seqgen::v_sequence(cat(-0.5, 0), 3, ctx, FillMethod::Integral),
            UsageError);
    }
}

TEST_CASE("recursion rows vanish on constructed sequences") {
    auto ctx = ctx_bits(256);

    SUBCASE("real argument in the strip") {
        auto ub = seqgen::u_sequence(cat(0.3, 0), 11, ctx);
        for (long k : {1L, 2L, 5L, 10L})
            CHECK(abs(seqgen::recursion_residual(ub, k, ctx)).to_double() < 1e-40);
    }

    SUBCASE("complex argument") {
        auto ub = seqgen::u_sequence(cat(0.5, 3.0), 6, ctx);
        for (long k : {1L, 4L})
            CHECK(abs(seqgen::recursion_residual(ub, k, ctx)).to_double() < 1e-38);
    }

    SUBCASE("on the critical line at the first eta zero") {
        auto ub = seqgen::u_sequence(first_zero(), 5, ctx);
        for (long k : {1L, 3L})
            CHECK(abs(seqgen::recursion_residual(ub, k, ctx)).to_double() < 1e-35);
    }

    SUBCASE("exactly zero where the sine prefactor vanishes") {
        auto ub = seqgen::u_sequence(cat(-2, 0), 4, ctx);
        CHECK(seqgen::recursion_residual(ub, 3, ctx).is_zero());
    }

    SUBCASE("argument checks") {
        auto ub = seqgen::u_sequence(cat(0.3, 0), 3, ctx);
        CHECK_THROWS_AS(seqgen::recursion_residual(ub, 0, ctx), UsageError);
        CHECK_THROWS_AS(seqgen::recursion_residual(ub, 9, ctx), UsageError);
    }
}

TEST_CASE("tail sums match direct truncation") {
    // the residual encodes the weighted tail: S_k = 2*residual + s*u_{k-1}/(2k-1);
    // truncating the defining series at depth J leaves an O(log J / J) remainder
    auto ctx = ctx_bits(256);
    BigComplex s = cat(0.3, 0);
    const long J = 300;
    auto vb = seqgen::u_sequence(s, J + 3, ctx);
    for (long k : {1L, 2L}) {
        BigComplex res = seqgen::recursion_residual(vb, k, ctx);
        BigComplex kernel = res * 2 + (s * vb.u[k - 1]) / (2 * k - 1);
        BigComplex direct(320);
        for (long j = 0; k - 1 + j <= J + 2; ++j)
            direct = direct + vb.v[k - 1 + j] / (2 * j + 1);
        CHECK(gap(kernel, direct) < 4 * abs(vb.v[J]).to_double());
    }
}

TEST_CASE("row zero closes onto eta") {
    auto ctx = ctx_bits(256);
    CHECK(abs(seqgen::k0_identity(cat(0.3, 0), ctx)).to_double() < 1e-40);
    CHECK(abs(seqgen::k0_identity(cat(-0.7, 0), ctx)).to_double() < 1e-40);
    CHECK(abs(seqgen::k0_identity(cat(0.5, 3.0), ctx)).to_double() < 1e-38);
    CHECK(seqgen::k0_identity(cat(-2, 0), ctx).is_zero());
    CHECK(seqgen::k0_identity(cat(0, 0), ctx).is_zero());
    CHECK_THROWS_AS(seqgen::k0_identity(cat(2.5, 0), ctx), UsageError);
}

TEST_CASE("c recursion and its closure") {
    auto ctx = ctx_bits(256);

    SUBCASE("closed forms at s = 0") {
        auto cb = seqgen::c_sequence(cat(0, 0), 8, ctx);
        CHECK(gap(cb.c[1], cat(2, 0)) < 1e-70);
        BigComplex m23{Real(mpq_class(-2, 3), 320), Real(0, 320)};
        CHECK(gap(cb.c[2], m23) < 1e-70);
    }

    SUBCASE("second entry follows from the first") {
        auto cb = seqgen::c_sequence(cat(0.3, 0), 4, ctx);
        BigComplex want = (cb.c[1] * 2 - 6) / (cat(0.3, 0) + 3);
        CHECK(gap(cb.c[2], want) < 1e-70);
    }

    SUBCASE("weighted magnitudes stay bounded") {
        auto cb = seqgen::c_sequence(cat(0.3, 0), 400, ctx);
        double worst = 0;
        for (long k = 200; k <= 400; ++k) {
            double w = abs(cb.c[k]).to_double() * double(k);
            if (w > worst) worst = w;
        }
        CHECK(worst < 1.0);
    }

    SUBCASE("vanishing eta denominator is rejected") {
        CHECK_THROWS_AS(seqgen::c_sequence(first_zero(), 4, ctx), EtaZero);
    }

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(seqgen::c_sequence(cat(1.2, 0), 4, ctx), UsageError);
        CHECK_THROWS_AS(seqgen::c_sequence(cat(0.3, 0), 4, ctx, 0), UsageError);
        CHECK_THROWS_AS(seqgen::c_sequence(cat(0, 0), 4, ctx, 2), UsageError);
    }

    SUBCASE("higher-row closure is consistent with the moment ratios") {
        BigComplex s = cat(0.3, 0);
        BigComplex c1a = seqgen::c_sequence(s, 3, ctx, 1).c[1];
        BigComplex c1b = seqgen::c_sequence(s, 3, ctx, 2).c[1];
        BigComplex mu = seqgen::mu_ratio(2, s, ctx);
        CHECK(gap(c1b / c1a, mu) < 1e-60);
    }
}

TEST_CASE("summed identity across rows") {
    auto ctx = ctx_bits(256);

    SUBCASE("real argument, two rows") {
        auto cb = seqgen::c_sequence(cat(0.3, 0), 400, ctx);
        for (long n : {0L, 3L}) {
            auto r = seqgen::c_identity_check(cb, n, ctx);
            CHECK(abs(r.residual).to_double() <= r.tail_bound.to_double() + 1e-25);
        }
    }

    SUBCASE("at s = 0 the tail drops out") {
        auto cb = seqgen::c_sequence(cat(0, 0), 200, ctx);
        auto r = seqgen::c_identity_check(cb, 0, ctx);
        CHECK(abs(r.residual).to_double() < 1e-25);
    }

    SUBCASE("rejects unsuitable bundles") {
        auto cb2 = seqgen::c_sequence(cat(0.3, 0), 40, ctx, 2);
        CHECK_THROWS_AS(seqgen::c_identity_check(cb2, 0, ctx), UsageError);
        auto ub = seqgen::u_sequence(cat(0.3, 0), 4, ctx);
        CHECK_THROWS_AS(seqgen::c_identity_check(ub, 0, ctx), UsageError);
        auto cb = seqgen::c_sequence(cat(0.3, 0), 8, ctx);
        CHECK_THROWS_AS(seqgen::c_identity_check(cb, 1, ctx), UsageError);
    }
}

TEST_CASE("tanh-moment ratios match the sequence") {
    auto ctx = ctx_bits(256);

    SUBCASE("first ratio is one identically") {
        CHECK(abs(seqgen::mu_ratio(1, cat(0.3, 0), ctx) - 1).is_zero());
        CHECK(abs(seqgen::mu_ratio(1, cat(-0.4, 0.7), ctx) - 1).is_zero());
        CHECK(abs(seqgen::mu_ratio(5, cat(0, 0), ctx) - 1).is_zero());
    }

    SUBCASE("cross-checked values") {
        BigComplex s = cat(0.3, 0);
        BigComplex mu = seqgen::mu_ratio(2, s, ctx);
        auto ub = seqgen::u_sequence(s, 2, ctx);
        CHECK(gap(mu, ub.u[2] / ub.u[1]) < 1e-28);
        CHECK_NOTHROW(seqgen::mu_ratio(3, cat(0.5, 0), ctx));
    }

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(seqgen::mu_ratio(0, cat(0.3, 0), ctx), UsageError);
        CHECK_THROWS_AS(seqgen::mu_ratio(2, cat(1.2, 0), ctx), UsageError);
    }
}

TEST_CASE("decay reports") {
    auto ctx = ctx_bits(256);

    SUBCASE("difference sequence at a real argument") {
        auto ub = seqgen::u_sequence(cat(0.3, 0), 400, ctx);
        auto rep = seqgen::decay_report(ub);
        CHECK(!rep.on_c);
        CHECK(!rep.all_zero);
        CHECK(rep.window_peak.size() >= 2);
        CHECK(rep.slope <= 0.05);
        CHECK(rep.pass);
        CHECK(rep.c_star.to_double() > 0);
    }

    SUBCASE("zero sequence passes trivially") {
        auto ub = seqgen::u_sequence(cat(-2, 0), 250, ctx);
        auto rep = seqgen::decay_report(ub);
        CHECK(rep.all_zero);
        CHECK(rep.pass);
    }

    SUBCASE("c variant") {
        auto cb = seqgen::c_sequence(cat(0.3, 0), 400, ctx);
        auto rep = seqgen::decay_report(cb);
        CHECK(rep.on_c);
        CHECK(rep.pass);
    }

    SUBCASE("needs depth and a filled family") {
        auto ub = seqgen::u_sequence(cat(0.3, 0), 100, ctx);
        CHECK_THROWS_AS(seqgen::decay_report(ub), UsageError);
        SequenceBundle empty;
        CHECK_THROWS_AS(seqgen::decay_report(empty), UsageError);
    }
}

TEST_CASE("generating function evaluation") {
    auto ctx = ctx_bits(256);

    SUBCASE("small t recovers eta") {
        BigComplex s = cat(0.3, 0);
        Real t = at(1e-6);
        BigComplex xi = seqgen::genfb_eval(s, t, ctx);
        CHECK(gap(xi, mpsf::eta(s, ctx)) < 1e-4);
    }

    SUBCASE("interior point, both routes agree internally") {
        BigComplex xi = seqgen::genfb_eval(cat(0.3, 0), at(0.25), ctx);
        auto ub = seqgen::u_sequence(cat(0.3, 0), 300, ctx);
        BigComplex acc(320);
        Real tp(1, 320);
        for (long k = 0; k <= 300; ++k) {
            acc = acc + ub.u[k] * tp;
            tp = tp * at(0.25);
        }
        CHECK(gap(xi, acc) < 1e-60);
    }

    SUBCASE("zero and rational collapses") {
        CHECK(seqgen::genfb_eval(cat(-2, 0), at(0.37), ctx).is_zero());
        BigComplex xi0 = seqgen::genfb_eval(cat(0, 0), at(0.3), ctx);
        BigComplex want{at(0.5) / (1 - at(0.3)), Real(0, 320)};
        CHECK(gap(xi0, want) < 1e-70);
    }

    SUBCASE("complex argument") {
        CHECK_NOTHROW(seqgen::genfb_eval(cat(0.3, 1.0), at(0.2), ctx));
    }

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(seqgen::genfb_eval(cat(0.3, 0), at(0), ctx), UsageError);
        CHECK_THROWS_AS(seqgen::genfb_eval(cat(0.3, 0), at(1), ctx), UsageError);
        CHECK_THROWS_AS(seqgen::genfb_eval(cat(2.5, 0), at(0.5), ctx), UsageError);
    }
}

TEST_CASE("derivative bundle") {
    auto ctx = ctx_bits(256);

    SUBCASE("leading entries against the eta derivative") {
        BigComplex s = cat(0.3, 0);
        auto db = seqgen::derivative_bundle(s, 3, ctx);
        BigComplex e0 = mpsf::eta_prime(s, ctx);
        BigComplex e2 = mpsf::eta_prime(s - 2, ctx);
        CHECK(gap(db.u[0], e0) < 1e-70);
        CHECK(gap(db.u[1], e0 + e2 * 2) < 1e-70);
    }

    SUBCASE("central differences of the plain bundle") {
        Real h = at(1e-8);
        BigComplex sp{at(0.3) + h, Real(0, 320)};
        BigComplex sm{at(0.3) - h, Real(0, 320)};
        auto up = seqgen::u_sequence(sp, 2, ctx);
        auto um = seqgen::u_sequence(sm, 2, ctx);
        auto db = seqgen::derivative_bundle(cat(0.3, 0), 2, ctx);
        for (long k = 0; k <= 2; ++k) {
            BigComplex fd = (up.u[k] - um.u[k]) / (h * 2);
            Real scale = max(Real(1, 64), abs(db.u[k]));
            CHECK(gap(fd, db.u[k]) < 1e-12 * scale.to_double());
        }
    }

    SUBCASE("no trivial zeros for the derivative") {
        auto db = seqgen::derivative_bundle(cat(-2, 0), 2, ctx);
        CHECK(!db.u[0].is_zero());
        CHECK(gap(db.u[0], mpsf::eta_prime(cat(-2, 0), ctx)) < 1e-70);
    }

    SUBCASE("shares the regularization poles") {
        CHECK_THROWS_AS(seqgen::derivative_bundle(cat(5, 0), 2, ctx), PoleArgument);
    }
}
