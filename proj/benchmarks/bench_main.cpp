#include <benchmark/benchmark.h>

#include "eiscong/ideals.hpp"
#include "eiscong/lattice.hpp"
#include "eiscong/scanner.hpp"

using namespace eiscong;

namespace {

std::string fixture(std::uint64_t N) { return std::string(EISCONG_DATA) + "/newforms/newforms_" + std::to_string(N) + ".json"; }

void BM_CycMultiply(benchmark::State& state) {
    auto m = static_cast<std::uint64_t>(state.range(0));
    CycElement a = CycElement::zeta(m) + CycElement(3), b = CycElement::zeta(m, 2) - CycElement(5);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_CycMultiply)->Arg(20)->Arg(55)->Arg(220);

void BM_GaussSum(benchmark::State& state) {
    auto chi = primitive_characters(static_cast<std::uint64_t>(state.range(0))).back();
    for (auto _ : state) benchmark::DoNotOptimize(gauss_sum(chi));
}
BENCHMARK(BM_GaussSum)->Arg(11)->Arg(29)->Arg(59);

void BM_BuildE(benchmark::State& state) {
    auto P = EisensteinParams::make(DirichletCharacter::from_label("3.2.1"), 234, 13, 2);
    auto B = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_E(P, B));
}
BENCHMARK(BM_BuildE)->Arg(50)->Arg(200);

void BM_BetaTilde(benchmark::State& state) {
    auto P = EisensteinParams::make(DirichletCharacter::from_label("5.4.1"), 725, 29, 1);
    for (auto _ : state) benchmark::DoNotOptimize(beta_tilde(P));
}
BENCHMARK(BM_BetaTilde);

void BM_VerifyBoundary(benchmark::State& state) {
    auto P = EisensteinParams::make(DirichletCharacter::from_label("3.2.1"), 234, 26, 1);
    for (auto _ : state) benchmark::DoNotOptimize(verify_boundary(P));
}
BENCHMARK(BM_VerifyBoundary);

void BM_CuspidalOrder(benchmark::State& state) {
    auto P = EisensteinParams::make(DirichletCharacter::from_label("11.2.1"), 121, 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(cuspidal_order(P));
}
BENCHMARK(BM_CuspidalOrder);

void BM_Descriptor(benchmark::State& state) {
    auto P = EisensteinParams::make(DirichletCharacter::from_label("5.4.1"), 725, 1, 29);
    for (auto _ : state) benchmark::DoNotOptimize(descriptor(P, 7).to_text());
}
BENCHMARK(BM_Descriptor);

void BM_EnumerateCusps(benchmark::State& state) {
    auto N = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_cusps(N));
}
BENCHMARK(BM_EnumerateCusps)->Arg(725)->Arg(1000);

void BM_FullScan(benchmark::State& state) {
    auto N = static_cast<std::uint64_t>(state.range(0)), p = static_cast<std::uint64_t>(state.range(1));
    auto forms = load_newforms(fixture(N));
    for (auto _ : state) benchmark::DoNotOptimize(full_scan(N, p, forms));
}
BENCHMARK(BM_FullScan)->Args({121, 11})->Args({725, 5})->Args({234, 3})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
