#include "nhwave/similarity.hpp"
#include "nhwave/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace nhwave;

TEST_CASE("hatano-nelson counterpart is uniform and Hermitian") {
    const auto spec = ModelSpec::hatano_nelson(40, Decimal("2"), Decimal("0.2"));
    const Hamiltonian h = build_hamiltonian(spec, 256);
    const auto s = make_transform(spec, 256);
    CHECK(s.r.to_double() == doctest::Approx(std::sqrt(0.1)).epsilon(1e-15));
    const Hamiltonian hp = hermitian_counterpart(h, s);
    CHECK(hermiticity_residual(hp) <= 1e-60);
    for (std::size_t i = 0; i + 1 < hp.dim(); ++i)
        CHECK(hp.at(i, i + 1).to_double() == doctest::Approx(std::sqrt(0.4)).epsilon(1e-15));
    CHECK(pseudo_hermiticity_residual(h, s) <= 1e-60);
}

TEST_CASE("ssh counterpart is Hermitian") {
    const auto spec = ModelSpec::nh_ssh(25, Decimal("0.4"), Decimal("1"), Decimal("0.5"));
    const Hamiltonian h = build_hamiltonian(spec, 128);
    const auto s = make_transform(spec, 128);
    const Hamiltonian hp = hermitian_counterpart(h, s);
    CHECK(hermiticity_residual(hp) <= 1e-12);
    CHECK(pseudo_hermiticity_residual(h, s) <= 1e-12);
    CHECK(hp.at(0, 1).to_double() == doctest::Approx(spec.ssh_t1_tilde()).epsilon(1e-14));
    CHECK(hp.at(1, 2).to_double() == 1.0);
    CHECK(hermiticity_residual(h) == doctest::Approx(0.5));
}

TEST_CASE("wrong ratio leaves a residual") {
    const auto spec = ModelSpec::hatano_nelson(10, 2.0, 0.2);
    const Hamiltonian h = build_hamiltonian(spec, 128);
    const auto s = make_transform_with_ratio(spec, mp::Real(0.5, 128));
    CHECK(hermiticity_residual(hermitian_counterpart(h, s)) > 0.1);
    CHECK_THROWS_AS(make_transform_with_ratio(spec, mp::Real(-1.0, 64)), InvalidParameter);
}

TEST_CASE("transform round trip") {
    const auto spec = ModelSpec::hatano_nelson(12, 2.0, 0.2);
    const auto s = make_transform(spec, 128);
    std::vector<mp::Complex> v;
    for (int i = 0; i < 12; ++i) v.emplace_back(1.0 + i, -0.5 * i, 128);
    const auto orig = v;
    apply_inverse_transform(s, v);
    apply_transform(s, v);
    for (int i = 0; i < 12; ++i) {
        CHECK(v[i].re.to_double() == doctest::Approx(orig[i].re.to_double()).epsilon(1e-30));
        CHECK(v[i].im.to_double() == doctest::Approx(orig[i].im.to_double()).epsilon(1e-30));
    }
}

TEST_CASE("transform preconditions") {
    CHECK_THROWS_AS(make_transform(ModelSpec::hatano_nelson(8, 2.0, 0.2, Boundary::Periodic), 64), Unsupported);
    CHECK_THROWS_AS(make_transform(ModelSpec::hatano_nelson(8, 2.0, 0.2).with_disorder({0.1, 1}), 64), Unsupported);
    const auto s = make_transform(ModelSpec::hatano_nelson(8, 2.0, 0.2), 64);
    const Hamiltonian h = build_hamiltonian(ModelSpec::hatano_nelson(9, 2.0, 0.2), 64);
    CHECK_THROWS_AS(hermitian_counterpart(h, s), DimensionError);
}

TEST_CASE("log diagonal stays finite beyond double range") {
    const auto spec = ModelSpec::hatano_nelson(2000, 2.0, 0.2);
    const auto s = make_transform(spec, 64);
    CHECK(std::isfinite(s.log_diag.back()));
    CHECK(s.log_diag.back() == doctest::Approx(2000 * 0.5 * std::log(0.1)));
}
