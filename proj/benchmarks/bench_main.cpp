#include <benchmark/benchmark.h>

#include <hitchin/hitchin.hpp>

using namespace hitchin;

static void theta_eval(benchmark::State &state) {
    const ThetaContext ctx(cplx(0.1 * state.range(0), 0.05));
    const cplx z(0.9, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(ctx.theta(z));
}
BENCHMARK(theta_eval)->Arg(1)->Arg(3)->Arg(5)->Arg(8);

static void wp_eval(benchmark::State &state) {
    const ThetaContext ctx(0.3);
    const cplx z(0.9, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(ctx.wp(z));
}
BENCHMARK(wp_eval);

static void kernel_identity(benchmark::State &state) {
    const ThetaContext ctx(0.3);
    const IdentityPoint p{cplx(1.3, 0.2), 0.7, 1.9, cplx(0, 0.4)};
    for (auto _ : state) benchmark::DoNotOptimize(check_theta_identity(ctx, ThetaIdentity::B, p));
}
BENCHMARK(kernel_identity);

static void diff_op_compose(benchmark::State &state) {
    const ThetaContext ctx(0.3);
    const int n = static_cast<int>(state.range(0));
    QuantumEllipticParams params{ctx, 2, std::vector<int>(n, 1), {}};
    for (int i = 0; i < n; ++i) params.sites.push_back(std::polar(1.0, 0.7 * (i + 1)));
    const auto ops = quantum_hamiltonians(params);
    for (auto _ : state) benchmark::DoNotOptimize(commutator(ops[0], ops[1]).size());
}
BENCHMARK(diff_op_compose)->Arg(1)->Arg(2)->Arg(3);

static void r_matrix_identity(benchmark::State &state) {
    const ThetaContext ctx(0.3);
    Rng rng(1);
    const auto pt = random_elliptic_point(ctx, static_cast<int>(state.range(0)), 3, rng);
    const cplx z = random_spectral_point(pt, rng), w = random_spectral_point(pt, rng, {z});
    for (auto _ : state) benchmark::DoNotOptimize(verify_dynamical_rmatrix(pt, z, w).residual);
}
BENCHMARK(r_matrix_identity)->Arg(2)->Arg(3);

static void gaudin_residues(benchmark::State &state) {
    std::vector<int> weights(static_cast<std::size_t>(state.range(0)), 1);
    std::vector<cplx> sites;
    for (int i = 0; i < state.range(0); ++i) sites.emplace_back(i, 0.0);
    const GaudinSystem gs(TensorRepSpace::sl2(weights), sites);
    for (auto _ : state) benchmark::DoNotOptimize(gs.residues().size());
}
BENCHMARK(gaudin_residues)->Arg(3)->Arg(4)->Arg(6);

static void haar_l3(benchmark::State &state) {
    const GaudinSystem gs(TensorRepSpace::sl2({1, 1, 1}), {cplx(0), cplx(1), cplx(3)});
    const CMat h = eigen_h(2).h;
    HaarSampler mc;
    mc.samples = state.range(0);
    mc.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(higher_gaudin(gs, h, 3, mc).samples);
}
BENCHMARK(haar_l3)->Arg(1000)->Unit(benchmark::kMillisecond);

static void rk4_flow(benchmark::State &state) {
    Rng rng(2);
    RationalSampleOptions opt;
    opt.nilpotent = true;
    const auto pt = random_rational_point(2, 3, rng, opt);
    FlowOptions fo;
    for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(pt, {2, {1, 0, 0}}, fo).max_drift);
}
BENCHMARK(rk4_flow)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
