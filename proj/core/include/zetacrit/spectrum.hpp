#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "zetacrit/precision.hpp"

namespace zetacrit::spectrum {

enum class MatrixKind { Start, OpW, U, L, K, A, RowRed };

bool kind_needs_s(MatrixKind kind);

// One N-by-N truncation of an operator family. Every entry is affine in the
// spectral argument: entry(r, c) = con[r-1][c-1] + lin[r-1][c-1] * s, with
// exact rational tables; s-independent kinds have identically zero lin.
// Accessors are 1-based to match the row/column conventions of the entry
// formulas.
struct TruncatedSystem {
    MatrixKind kind = MatrixKind::U;
    long N = 0;
    std::optional<BigComplex> s;
    std::vector<std::vector<mpq_class>> con, lin;

    const mpq_class& entry_con(long r, long c) const;
    const mpq_class& entry_lin(long r, long c) const;
    // Numeric entry at the stored s (required for s-dependent kinds).
    BigComplex entry(long r, long c, long prec) const;
};

// Fill the exact entry tables. The s argument must be given exactly when the
// kind is s-dependent (Start, OpW, RowRed).
TruncatedSystem build(MatrixKind kind, long N);
TruncatedSystem build(MatrixKind kind, long N, const BigComplex& s);

// Residuals of the three infinite-matrix relations against sequences built by
// seqgen, rows 1..n_rows. Row sums over the infinite index range are
// evaluated through the closed-form weighted tails (no truncation error):
//   start_row[r-1]: row r of (U - s L) v            (zero iff eta(s) = 0)
//   eigen_row[r-1]: row r of A v - (1/4)(s - 1/2) v (an identity of the
//                   construction; near zero at every s)
//   k_row[r-1]:     row r of K u - s u              (likewise an identity)
//   constraint:     f^T v with f_i = 1/(2i-1); equals s * eta(s)
struct MatrixResidualReport {
    BigComplex s;
    long rows = 0;
    std::vector<BigComplex> start_row;
    std::vector<BigComplex> eigen_row;
    std::vector<BigComplex> k_row;
    BigComplex constraint;
    Real scale;
};
MatrixResidualReport matrix_residuals(const BigComplex& s, long n_rows, long depth,
                                      const PrecisionContext& ctx);

// Determinant of the N-by-N leading principal submatrix of Start(s), by
// partially pivoted elimination; one precision escalation on pivot collapse,
// then 0 for a numerically singular matrix.
BigComplex det_indicator(const BigComplex& s, long N, const PrecisionContext& ctx);

// Grid scan of |det_indicator(1/2 + it, N)| over [t_min, t_max]. Grid points
// are candidates when |det| < 10^{-2} * (grid median); bracketed local minima
// among candidates are refined by golden section to a window of width 1e-6.
// The returned list may be empty.
struct ZeroCandidate {
    Real t;
    Real det_mag;
};
std::vector<ZeroCandidate> zero_scan(double t_min, double t_max, double step,
                                     long N, const PrecisionContext& ctx);

// Derivative counterpart of matrix_residuals, rows 1..n_rows, with
// v' from the eta-prime lattice:
//   pair_row[r-1]:       row r of U v' - s L v' - L v; vanishes under the
//                        double-zero hypothesis eta(s) = eta'(s) = 0, and
//                        equals (eta + s eta')/(2r-1) in general
//   derivative_row[r-1]: pair_row with that closed form subtracted; an
//                        identity of the construction, near zero at every s
//   fd_gap / fd_gap_half: |central difference of the (U - sL)v rows in s
//                        minus the analytic derivative| at steps h and h/2;
//                        the ratio ~4 certifies the second-order scheme
struct NonsimpleReport {
    BigComplex s;
    long rows = 0;
    std::vector<BigComplex> pair_row;
    std::vector<BigComplex> derivative_row;
    std::vector<Real> fd_gap, fd_gap_half;
    Real h;
    Real scale;
};
NonsimpleReport nonsimple_residual(const BigComplex& s, long n_rows, long depth,
                                   const PrecisionContext& ctx);

} // namespace zetacrit::spectrum
