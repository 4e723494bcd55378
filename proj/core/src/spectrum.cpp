#include "zetacrit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "zetacrit/errors.hpp"
#include "zetacrit/seqgen.hpp"

namespace zetacrit::spectrum {

namespace {

mpq_class q(long num, long den) {
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

void fill_tables(MatrixKind kind, long N, std::vector<std::vector<mpq_class>>& con,
                 std::vector<std::vector<mpq_class>>& lin) {
    con.assign(N, std::vector<mpq_class>(N, mpq_class(0)));
    lin.assign(N, std::vector<mpq_class>(N, mpq_class(0)));
    for (long r = 1; r <= N; ++r) {
        for (long c = 1; c <= N; ++c) {
            mpq_class& a = con[r - 1][c - 1];
            mpq_class& b = lin[r - 1][c - 1];
            long d = c - r;
            switch (kind) {
            case MatrixKind::Start:
                if (d == 0) a = 1;
                else if (d > 0) a = q(1, 2 * d + 1);
                else b = q(-1, 2 * r - 1);
                break;
            case MatrixKind::OpW:
                if (d == -1) {
                    a = q(-1, 2);
                    b = q(-1, 2 * (2 * r - 1));
                } else if (d >= 0) {
                    a = q(1, (2 * d + 1) * (2 * d + 3));
                }
                break;
            case MatrixKind::U:
                if (d >= 0) a = q(1, 2 * d + 1);
                break;
            case MatrixKind::L:
                if (d < 0) a = q(1, 2 * r - 1);
                break;
            case MatrixKind::K:
                if (d == 0) a = -(2 * r - 1);
                else if (d > 0) a = q(2 * (2 * r - 1), (2 * d - 1) * (2 * d + 1));
                break;
            case MatrixKind::A:
                if (d == 0) a = q(-(4 * r - 1), 8);
                else if (d > 0) a = q(c, (2 * d - 1) * (2 * d + 1));
                break;
            case MatrixKind::RowRed:
                if (d == 0) {
                    a = q(-(2 * r - 1), 4);
                    b = q(-1, 4);
                } else if (d > 0) {
                    a = q(c, (2 * d - 1) * (2 * d + 1));
                }
                break;
            }
        }
    }
}

TruncatedSystem build_impl(MatrixKind kind, long N, std::optional<BigComplex> s) {
    if (N < 2) throw UsageError("build: N must be >= 2");
    TruncatedSystem t;
    t.kind = kind;
    t.N = N;
    t.s = std::move(s);
    fill_tables(kind, N, t.con, t.lin);
    return t;
}

} // namespace

bool kind_needs_s(MatrixKind kind) {
    return kind == MatrixKind::Start || kind == MatrixKind::OpW ||
           kind == MatrixKind::RowRed;
}

const mpq_class& TruncatedSystem::entry_con(long r, long c) const {
    if (r < 1 || r > N || c < 1 || c > N)
        throw UsageError("TruncatedSystem: index out of range");
    return con[r - 1][c - 1];
}

const mpq_class& TruncatedSystem::entry_lin(long r, long c) const {
    if (r < 1 || r > N || c < 1 || c > N)
        throw UsageError("TruncatedSystem: index out of range");
    return lin[r - 1][c - 1];
}

BigComplex TruncatedSystem::entry(long r, long c, long prec) const {
    const mpq_class& a = entry_con(r, c);
    const mpq_class& b = entry_lin(r, c);
    BigComplex val{Real(a, prec), Real(0, prec)};
    if (b != 0) {
        if (!s) throw MissingS("TruncatedSystem::entry: no spectral argument stored");
        val = val + round_to(*s, prec) * Real(b, prec);
    }
    return val;
}

TruncatedSystem build(MatrixKind kind, long N) {
    if (kind_needs_s(kind))
        throw MissingS("build: this matrix family requires the spectral argument");
    return build_impl(kind, N, std::nullopt);
}

TruncatedSystem build(MatrixKind kind, long N, const BigComplex& s) {
    if (!kind_needs_s(kind))
        throw UsageError("build: s given for an s-independent family");
    return build_impl(kind, N, s);
}

MatrixResidualReport matrix_residuals(const BigComplex& s, long n_rows, long depth,
                                      const PrecisionContext& ctx) {
    ctx.validate();
    if (n_rows < 1) throw UsageError("matrix_residuals: n_rows must be >= 1");
    if (depth < n_rows + 2)
        throw UsageError("matrix_residuals: depth must exceed n_rows + 1");
    if (!(s.re < 2)) throw UsageError("matrix_residuals: requires Re s < 2");
    long wp = ctx.work_bits();
    auto ub = seqgen::u_sequence(s, depth, ctx);
    BigComplex sw = round_to(s, wp);
    std::vector<BigComplex> S; // S[k-1] = weighted tail from row k
    S.reserve(n_rows + 1);
    for (long k = 1; k <= n_rows + 1; ++k)
        S.push_back(round_to(seqgen::v_weighted_tail(s, k, ctx), wp));

    MatrixResidualReport rep;
    rep.s = round_to(s, ctx.bits);
    rep.rows = n_rows;
    Real scale(1, 64);
    for (long k = 0; k <= n_rows + 1; ++k)
        if (abs(ub.u[k]) > scale) scale = abs(ub.u[k]);
    rep.scale = scale;
    for (long r = 1; r <= n_rows; ++r) {
        BigComplex u_rm1 = round_to(ub.u[r - 1], wp);
        BigComplex u0 = round_to(ub.u[0], wp);
        BigComplex v_rm1 = round_to(ub.v[r - 1], wp);
        const BigComplex& Sr = S[r - 1];
        const BigComplex& Sr1 = S[r];
        rep.start_row.push_back(
            round_to(Sr - (sw * (u_rm1 - u0)) / (2 * r - 1), ctx.bits));
        BigComplex av = (Sr1 + Sr - v_rm1) / 4 + ((Sr1 - Sr + v_rm1) * r) / 2 -
                        (v_rm1 * (4 * r - 1)) / 8;
        rep.eigen_row.push_back(
            round_to(av - ((sw * 2 - 1) * v_rm1) / 8, ctx.bits));
        rep.k_row.push_back(round_to(Sr * (2 * r - 1) - sw * u_rm1, ctx.bits));
    }
    rep.constraint = round_to(S[0], ctx.bits);
    return rep;
}

BigComplex det_indicator(const BigComplex& s, long N, const PrecisionContext& ctx) {
    ctx.validate();
    if (N < 1) throw UsageError("det_indicator: N must be >= 1");
    long wp = ctx.work_bits();
    for (int attempt = 0; attempt < 2; ++attempt) {
        BigComplex sw = round_to(s, wp);
        std::vector<std::vector<BigComplex>> m(
            N, std::vector<BigComplex>(N, BigComplex(wp)));
        for (long r = 1; r <= N; ++r)
            for (long c = 1; c <= N; ++c) {
                if (c == r) m[r - 1][c - 1] = BigComplex(1, wp);
                else if (c > r)
                    m[r - 1][c - 1] =
                        BigComplex(Real(q(1, 2 * (c - r) + 1), wp));
                else
                    m[r - 1][c - 1] = sw * Real(q(-1, 2 * r - 1), wp);
            }
        Real big(1, 64);
        for (auto& row : m)
            for (auto& z : row)
                if (abs(z) > big) big = abs(z);
        Real floor_mag = ldexp(big, -(wp - 16));
        BigComplex det(1, wp);
        bool collapsed = false;
        for (long col = 0; col < N; ++col) {
            long piv = col;
            Real pm = abs(m[col][col]);
            for (long row = col + 1; row < N; ++row) {
                Real a = abs(m[row][col]);
                if (a > pm) {
                    pm = a;
                    piv = row;
                }
            }
            if (pm <= floor_mag) {
                collapsed = true;
                break;
            }
            if (piv != col) {
                std::swap(m[piv], m[col]);
                det = -det;
            }
            det = det * m[col][col];
            for (long row = col + 1; row < N; ++row) {
                BigComplex f = m[row][col] / m[col][col];
                if (f.is_zero()) continue;
                for (long c2 = col + 1; c2 < N; ++c2)
                    m[row][c2] = m[row][c2] - f * m[col][c2];
            }
        }
        if (!collapsed) return round_to(det, ctx.bits);
        if (attempt == 0) wp *= 2;
    }
    return BigComplex(ctx.bits); // numerically singular
}

std::vector<ZeroCandidate> zero_scan(double t_min, double t_max, double step,
                                     long N, const PrecisionContext& ctx) {
    ctx.validate();
    if (!(t_min > 0) || !(t_max > t_min))
        throw UsageError("zero_scan: need 0 < t_min < t_max");
    if (!(step > 0)) throw UsageError("zero_scan: step must be positive");
    if (N < 8) throw UsageError("zero_scan: N must be >= 8");
    Real half(mpq_class(1, 2), 320);
    auto mag_at = [&](double t) -> double {
        Real ti(320);
        mpfr_set_d(ti.raw(), t, MPFR_RNDN);
        BigComplex s{half, ti};
        return abs(det_indicator(s, N, ctx)).to_double();
    };
    long count = static_cast<long>(std::floor((t_max - t_min) / step + 1e-9)) + 1;
    std::vector<double> ts(count), mags(count);
    for (long i = 0; i < count; ++i) {
        ts[i] = t_min + step * double(i);
        mags[i] = mag_at(ts[i]);
    }
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[count / 2];
    double thresh = 1e-2 * median;

    std::vector<ZeroCandidate> out;
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    for (long i = 1; i + 1 < count; ++i) {
        if (!(mags[i] < thresh)) continue;
        if (!(mags[i] <= mags[i - 1] && mags[i] <= mags[i + 1])) continue;
        double a = ts[i - 1], b = ts[i + 1];
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = mag_at(c), fd = mag_at(d);
        while (b - a > 1e-6) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = mag_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = mag_at(d);
            }
        }
        double tstar = 0.5 * (a + b);
        Real tr(64), mr(64);
        mpfr_set_d(tr.raw(), tstar, MPFR_RNDN);
        mpfr_set_d(mr.raw(), mag_at(tstar), MPFR_RNDN);
        out.push_back({tr, mr});
    }
    return out;
}

NonsimpleReport nonsimple_residual(const BigComplex& s, long n_rows, long depth,
                                   const PrecisionContext& ctx) {
    ctx.validate();
    if (n_rows < 1) throw UsageError("nonsimple_residual: n_rows must be >= 1");
    if (depth < n_rows + 2)
        throw UsageError("nonsimple_residual: depth must exceed n_rows + 1");
    if (!(s.re < 2)) throw UsageError("nonsimple_residual: requires Re s < 2");
    long wp = ctx.work_bits();
    auto ub = seqgen::u_sequence(s, depth, ctx);
    auto db = seqgen::derivative_bundle(s, depth, ctx);
    BigComplex sw = round_to(s, wp);
    BigComplex eta0 = round_to(ub.u[0], wp);
    BigComplex etap0 = round_to(db.u[0], wp);

    NonsimpleReport rep;
    rep.s = round_to(s, ctx.bits);
    rep.rows = n_rows;
    Real h = ldexp(Real(1, wp), -20); // exact power of two near 1e-6
    rep.h = round_to(h, 64);
    Real scale(1, 64);
    for (long k = 0; k <= n_rows + 1; ++k) {
        if (abs(ub.u[k]) > scale) scale = abs(ub.u[k]);
        if (abs(db.u[k]) > scale) scale = abs(db.u[k]);
    }
    rep.scale = scale;

    BigComplex sp = sw, sm = sw, sp2 = sw, sm2 = sw;
    sp.re = sw.re + h;
    sm.re = sw.re - h;
    sp2.re = sw.re + h / 2;
    sm2.re = sw.re - h / 2;
    auto bp = seqgen::u_sequence(sp, n_rows + 1, ctx);
    auto bm = seqgen::u_sequence(sm, n_rows + 1, ctx);
    auto bp2 = seqgen::u_sequence(sp2, n_rows + 1, ctx);
    auto bm2 = seqgen::u_sequence(sm2, n_rows + 1, ctx);
    auto row_at = [&](const BigComplex& sh, long r,
                      const seqgen::SequenceBundle& bh) -> BigComplex {
        BigComplex Sr = seqgen::v_weighted_tail(sh, r, ctx);
        BigComplex um = round_to(bh.u[r - 1], wp);
        BigComplex u0 = round_to(bh.u[0], wp);
        return Sr - (round_to(sh, wp) * (um - u0)) / (2 * r - 1);
    };

    for (long r = 1; r <= n_rows; ++r) {
        BigComplex Spr = seqgen::v_weighted_tail_prime(s, r, ctx);
        BigComplex up_rm1 = round_to(db.u[r - 1], wp);
        BigComplex u_rm1 = round_to(ub.u[r - 1], wp);
        BigComplex pair = Spr - (sw * (up_rm1 - etap0)) / (2 * r - 1) -
                          (u_rm1 - eta0) / (2 * r - 1);
        rep.pair_row.push_back(round_to(pair, ctx.bits));
        BigComplex closed = (eta0 + sw * etap0) / (2 * r - 1);
        rep.derivative_row.push_back(round_to(pair - closed, ctx.bits));
        BigComplex fd = (row_at(sp, r, bp) - row_at(sm, r, bm)) / (h * 2);
        BigComplex fd2 = (row_at(sp2, r, bp2) - row_at(sm2, r, bm2)) / h;
        rep.fd_gap.push_back(abs(fd - pair));
        rep.fd_gap_half.push_back(abs(fd2 - pair));
    }
    return rep;
}

} // namespace zetacrit::spectrum
