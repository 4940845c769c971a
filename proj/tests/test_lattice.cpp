#include "nhwave/lattice.hpp"
#include "nhwave/errors.hpp"
#include "nhwave/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace nhwave;

TEST_CASE("hatano-nelson matrix pattern") {
    const auto spec = ModelSpec::hatano_nelson(4, Decimal("2"), Decimal("0.2"));
    const Hamiltonian h = build_hamiltonian(spec, 128);
    CHECK(h.dim() == 4);
    CHECK(h.at(0, 1) == mp::Real::from_string("2", 128));
    CHECK(h.at(1, 0) == mp::Real::from_string("0.2", 128));
    CHECK(h.at(0, 0).is_zero());
    CHECK(h.at(0, 3).is_zero());
    CHECK(!h.matrix.corner_upper);

    const auto pbc = ModelSpec::hatano_nelson(4, Decimal("2"), Decimal("0.2"), Boundary::Periodic);
    const Hamiltonian hp = build_hamiltonian(pbc, 64);
    CHECK(hp.at(0, 3).to_double() == doctest::Approx(0.2));
    CHECK(hp.at(3, 0).to_double() == doctest::Approx(2.0));
}

TEST_CASE("ssh matrix pattern for two cells") {
    const auto spec = ModelSpec::nh_ssh(2, Decimal("0.4"), Decimal("1"), Decimal("0.5"));
    const Hamiltonian h = build_hamiltonian(spec, 128);
    CHECK(h.dim() == 4);
    CHECK(h.at(0, 1).to_double() == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(h.at(1, 0).to_double() == doctest::Approx(0.65).epsilon(1e-15));
    CHECK(h.at(1, 2).to_double() == 1.0);
    CHECK(h.at(2, 1).to_double() == 1.0);
    CHECK(h.at(2, 3).to_double() == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(h.at(0, 2).is_zero());
}

TEST_CASE("decimal parameters are realized exactly") {
    const Decimal d("0.2");
    CHECK(d.text() == "0.2");
    CHECK(d.value() == 0.2);
    const mp::Real x = d.at(300);
    CHECK(x == mp::Real::from_string("0.2", 300));
    CHECK(x != mp::Real(0.2, 300));
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(ModelSpec::hatano_nelson(1, 1.0, 1.0).validate(), DimensionError);
    CHECK_THROWS_AS(ModelSpec::hatano_nelson(10, 1.0, -1.0).validate(), InvalidParameter);
    CHECK_THROWS_AS(ModelSpec::hatano_nelson(10, 0.0, 1.0).validate(), InvalidParameter);
    CHECK_THROWS_AS(ModelSpec::nh_ssh(10, 0.2, 1.0, 0.5).validate(), InvalidParameter);
    CHECK_NOTHROW(ModelSpec::nh_ssh(10, 0.4, 1.0, 0.5).validate());
    CHECK_THROWS_AS(build_hamiltonian(ModelSpec::hatano_nelson(10, 1.0, 1.0), 32), InvalidParameter);
}

TEST_CASE("periodic spectrum lies on the Bloch ellipse") {
    const auto spec = ModelSpec::hatano_nelson(16, 2.0, 0.2, Boundary::Periodic);
    const SpectrumResult s = pbc_spectrum(spec);
    REQUIRE(s.energies.size() == 16);
    for (const auto& e : s.energies) {
        const double u = e.real() / 2.2;
        const double v = e.imag() / 1.8;
        CHECK(u * u + v * v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("open spectrum is real and matches the Hermitian counterpart") {
    const int N = 20;
    const auto spec = ModelSpec::hatano_nelson(N, 2.0, 0.2);
    const SpectrumResult s = obc_spectrum_hn(spec);
    REQUIRE(s.energies.size() == static_cast<std::size_t>(N));
    const double t0 = std::sqrt(0.4);
    for (int m = 1; m <= N; ++m) {
        const double expect = 2 * t0 * std::cos(m * M_PI / (N + 1));
        bool found = false;
        for (const auto& e : s.energies)
            if (std::fabs(e.real() - expect) < 1e-12 && e.imag() == 0.0) found = true;
        CHECK(found);
    }
}

TEST_CASE("open eigenvector satisfies H v = E v") {
    const int N = 30;
    const auto spec = ModelSpec::hatano_nelson(N, 2.0, 0.2);
    const Hamiltonian h = build_hamiltonian(spec, 160);
    const int m = 7;
    const auto v = obc_eigenvector_hn(spec, m, 160);
    const double E = 2 * std::sqrt(0.4) * std::cos(m * M_PI / (N + 1));
    for (int i = 0; i < N; ++i) {
        mp::Real hv(160);
        if (i > 0) hv += h.at(i, i - 1) * v[i - 1];
        if (i + 1 < N) hv += h.at(i, i + 1) * v[i + 1];
        const double lhs = hv.to_double();
        const double rhs = E * v[i].to_double();
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs) + 1e-300);
    }
}

TEST_CASE("disorder draws follow the documented counter generator") {
    // frozen from tests/oracles/oracles.py (rng section)
    CHECK(splitmix64(42, 0) == 0xbdd732262feb6e95ULL);
    CHECK(splitmix64(42, 1) == 0x28efe333b266f103ULL);
    const auto w = disorder_realization({1.0, 42}, 4);
    CHECK(w[0] == 0.4831297575436466);
    CHECK(w[1] == -0.6801792142461598);
    CHECK(w[2] == -0.4427977394897227);
    CHECK(w[3] == -0.31161856695272494);

    const auto scaled = disorder_realization({1e-3, 42}, 4);
    CHECK(scaled[0] == doctest::Approx(0.4831297575436466e-3).epsilon(1e-15));

    const auto spec = ModelSpec::hatano_nelson(4, 2.0, 1.5).with_disorder({0.5, 42});
    const Hamiltonian h = build_hamiltonian(spec, 64);
    CHECK(h.at(1, 1).to_double() == 0.5 * -0.6801792142461598);
    CHECK(disorder_realization({0.0, 42}, 3) == std::vector<double>(3, 0.0));
}
