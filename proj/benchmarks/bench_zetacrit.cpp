#include <benchmark/benchmark.h>

#include "zetacrit/mpsf.hpp"

using namespace zetacrit;

namespace {

BigComplex pt(double re, double im, long prec) {
    Real r(prec), i(prec);
    mpfr_set_d(r.raw(), re, MPFR_RNDN);
    mpfr_set_d(i.raw(), im, MPFR_RNDN);
    return {r, i};
}

void BM_eta(benchmark::State& state) {
    PrecisionContext ctx{state.range(0), 1e-30, 3};
    BigComplex s = pt(0.5, 14.0, ctx.bits + 64);
    for (auto _ : state) benchmark::DoNotOptimize(mpsf::eta(s, ctx));
}
BENCHMARK(BM_eta)->Arg(128)->Arg(256)->Arg(512);

void BM_eta_lattice_32(benchmark::State& state) {
    PrecisionContext ctx{state.range(0), 1e-30, 3};
    BigComplex s = pt(0.3, 5.0, ctx.bits + 64);
    for (auto _ : state)
        benchmark::DoNotOptimize(mpsf::eta_lattice(s, 32, ctx));
}
BENCHMARK(BM_eta_lattice_32)->Arg(128)->Arg(256);

void BM_gamma(benchmark::State& state) {
    PrecisionContext ctx{state.range(0), 1e-30, 3};
    BigComplex z = pt(0.7, 14.0, ctx.bits + 64);
    for (auto _ : state) benchmark::DoNotOptimize(mpsf::gamma_fn(z, ctx));
}
BENCHMARK(BM_gamma)->Arg(128)->Arg(256)->Arg(512);

} // namespace

BENCHMARK_MAIN();
