#include "nhwave/evolution.hpp"
#include "nhwave/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace nhwave;

// Dense-exponential references frozen from tests/oracles/oracles.py.

namespace {

EvolutionConfig config(Backend b, Bits bits) {
    EvolutionConfig cfg;
    cfg.backend = b;
    cfg.precision_bits = bits;
    cfg.keep_states = true;
    return cfg;
}

}  // namespace

TEST_CASE("hatano-nelson delta against the dense exponential") {
    const auto spec = ModelSpec::hatano_nelson(12, Decimal("2"), Decimal("0.2"));
    const Hamiltonian h = build_hamiltonian(spec, 160);
    const StateVector psi0 = delta_state(6, 12, 160);
    struct Ref {
        int site;
        double log10_abs2;
        double phase;
    };
    const Ref refs[] = {{1, 3.1608730502853973, -M_PI / 2},
                        {3, 2.2427982691586935, M_PI / 2},
                        {6, -0.79049711148742655, M_PI},
                        {9, -3.758511540264261, M_PI / 2},
                        {12, -8.7781234237536862, M_PI}};
    for (Backend b : {Backend::PrecisionStepper, Backend::SpectralTransform}) {
        CAPTURE(to_string(b));
        const Trajectory tr = evolve(h, psi0, {0.0, 3.0}, config(b, 160));
        REQUIRE(tr.snapshots.size() == 2);
        const Snapshot& s = tr.snapshots[1];
        for (const auto& r : refs) {
            CAPTURE(r.site);
            CHECK(s.log10_abs2[r.site - 1] == doctest::Approx(r.log10_abs2).epsilon(1e-12));
            CHECK(std::cos(s.phase[r.site - 1]) == doctest::Approx(std::cos(r.phase)).epsilon(1e-10));
            CHECK(std::sin(s.phase[r.site - 1]) == doctest::Approx(std::sin(r.phase)).epsilon(1e-10));
        }
        CHECK(tr.snapshots[0].log10_abs2[5] == 0.0);
    }
}

TEST_CASE("hermitian chain and ssh against the dense exponential") {
    const auto herm = ModelSpec::hatano_nelson(10, Decimal("1"), Decimal("1"));
    const Trajectory th = evolve(build_hamiltonian(herm, 128), delta_state(3, 10, 128), {2.0},
                                 config(Backend::PrecisionStepper, 128));
    const auto& z = th.states[0].amplitudes[4];
    CHECK(z.re.to_double() == doctest::Approx(-0.36815667005288893).epsilon(1e-14));
    CHECK(std::fabs(z.im.to_double()) < 1e-30);

    const auto ssh = ModelSpec::nh_ssh(3, Decimal("0.4"), Decimal("1"), Decimal("0.5"));
    for (Backend b : {Backend::PrecisionStepper, Backend::SpectralTransform}) {
        const Trajectory ts = evolve(build_hamiltonian(ssh, 128), delta_state(1, 6, 128), {1.5}, config(b, 128));
        const auto& a = ts.states[0].amplitudes;
        CHECK(a[0].re.to_double() == doctest::Approx(0.91097434199023138).epsilon(1e-14));
        CHECK(a[1].im.to_double() == doctest::Approx(-0.62380702609262708).epsilon(1e-14));
        CHECK(a[5].im.to_double() == doctest::Approx(-0.015357860014672513).epsilon(1e-13));
    }
}

TEST_CASE("backends agree on a Gaussian packet") {
    const auto spec = ModelSpec::hatano_nelson(120, Decimal("2"), Decimal("1.5"));
    const Hamiltonian h = build_hamiltonian(spec, 200);
    const StateVector psi0 = gaussian_state({80, 3, M_PI / 4, 1}, 120, 200);
    const auto t1 = evolve(h, psi0, {5.0, 10.0}, config(Backend::PrecisionStepper, 200));
    const auto t2 = evolve(h, psi0, {5.0, 10.0}, config(Backend::SpectralTransform, 200));
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t n = 0; n < 120; ++n)
            if (t2.snapshots[k].log10_abs2[n] > -150)
                CHECK(t1.snapshots[k].log10_abs2[n] == doctest::Approx(t2.snapshots[k].log10_abs2[n]).epsilon(1e-10));
}

TEST_CASE("parallel stepper is bitwise identical to serial") {
    const auto spec = ModelSpec::hatano_nelson(200, 2.0, 1.5).with_disorder({1e-3, 3});
    const Hamiltonian h = build_hamiltonian(spec, 128);
    const StateVector psi0 = gaussian_state({100, 3, 0.5, 1}, 200, 128);
    auto cs = config(Backend::PrecisionStepper, 128);
    auto cp = cs;
    cp.exec = kernels::Exec::Parallel;
    const auto a = evolve(h, psi0, {1.0, 2.0}, cs);
    const auto b = evolve(h, psi0, {1.0, 2.0}, cp);
    for (std::size_t k = 0; k < 2; ++k) CHECK(a.states[k].amplitudes == b.states[k].amplitudes);
}

TEST_CASE("initial states") {
    const StateVector g = gaussian_state({10, 2, 0.3, 1}, 40, 128);
    CHECK(g.amplitudes[9].re.to_double() == doctest::Approx(std::cos(3.0) / std::sqrt(16 * M_PI)).epsilon(1e-14));
    CHECK(g.amplitudes[9].im.to_double() == doctest::Approx(-std::sin(3.0) / std::sqrt(16 * M_PI)).epsilon(1e-14));
    const StateVector n = l2_normalized(g);
    CHECK(n.norm2().to_double() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(delta_state(0, 10, 64), DimensionError);
    CHECK_THROWS_AS(delta_state(11, 10, 64), DimensionError);
}

TEST_CASE("evolution preconditions") {
    const auto spec = ModelSpec::hatano_nelson(10, 2.0, 0.2);
    const Hamiltonian h = build_hamiltonian(spec, 64);
    const auto psi = delta_state(3, 10, 64);
    CHECK_THROWS_AS(evolve(h, psi, {2.0, 1.0}, config(Backend::PrecisionStepper, 64)), InvalidParameter);
    CHECK_THROWS_AS(evolve(h, psi, {-1.0}, config(Backend::PrecisionStepper, 64)), InvalidParameter);
    CHECK_THROWS_AS(evolve(h, delta_state(3, 12, 64), {1.0}, config(Backend::PrecisionStepper, 64)), DimensionError);
    const auto pbc = ModelSpec::hatano_nelson(10, 2.0, 0.2, Boundary::Periodic);
    CHECK_THROWS_AS(evolve_via_transform(pbc, psi, {1.0}, config(Backend::SpectralTransform, 64)), Unsupported);
}

TEST_CASE("time grid and normalizations") {
    const auto g = time_grid(0.0, 1.0, 0.25);
    REQUIRE(g.size() == 5);
    CHECK(g.back() == 1.0);
    const auto spec = ModelSpec::hatano_nelson(8, 2.0, 0.2);
    const auto tr = evolve(build_hamiltonian(spec, 64), delta_state(4, 8, 64), {0.5, 1.0},
                           config(Backend::PrecisionStepper, 64));
    const auto m = tr.normalized_abs2(1, Normalization::Max);
    CHECK(*std::max_element(m.begin(), m.end()) == doctest::Approx(1.0));
    const auto l = tr.normalized_abs2(1, Normalization::L2);
    double s = 0;
    for (double v : l) s += v;
    CHECK(s == doctest::Approx(1.0));
    const auto series = edge_amplitude_series(tr, 1, Normalization::SeriesMax);
    CHECK(std::max(series[0].second, series[1].second) == doctest::Approx(1.0));
}
