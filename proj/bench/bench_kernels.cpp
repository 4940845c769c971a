// Serial reference vs OpenMP kernels on a disordered Hatano-Nelson chain.

#include "nhwave/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace nhwave;
using namespace nhwave::kernels;

namespace {

struct Setup {
    Hamiltonian h;
    CVec x, y, acc;
    mp::Real c;

    Setup(int n, Bits bits)
        : h(build_hamiltonian(ModelSpec::hatano_nelson(n, 2.0, 1.5).with_disorder({1e-3, 1}), bits)),
          x(zeros(n, bits)), y(zeros(n, bits)), acc(zeros(n, bits)), c(0.25, bits) {
        for (int i = 0; i < n; ++i) x[i] = mp::Complex(std::sin(0.1 * i), std::cos(0.2 * i), bits);
    }
};

void matvec_bench(benchmark::State& st, Exec exec) {
    Setup s(static_cast<int>(st.range(0)), static_cast<Bits>(st.range(1)));
    for (auto _ : st) {
        matvec(s.h.matrix, s.x, s.y, exec);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void taylor_bench(benchmark::State& st, Exec exec) {
    Setup s(static_cast<int>(st.range(0)), static_cast<Bits>(st.range(1)));
    const Support all{0, s.x.size()};
    for (auto _ : st) {
        taylor_term(s.h.matrix, s.c.get(), s.x, all, s.y, s.acc, -100000, exec);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void args(benchmark::internal::Benchmark* b) {
    for (long n : {400, 4000})
        for (long bits : {128, 424}) b->Args({n, bits});
}

}  // namespace

BENCHMARK_CAPTURE(matvec_bench, serial, Exec::Serial)->Apply(args);
BENCHMARK_CAPTURE(matvec_bench, parallel, Exec::Parallel)->Apply(args);
BENCHMARK_CAPTURE(taylor_bench, serial, Exec::Serial)->Apply(args);
BENCHMARK_CAPTURE(taylor_bench, parallel, Exec::Parallel)->Apply(args);

BENCHMARK_MAIN();
