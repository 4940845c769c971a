#include "nhwave/similarity.hpp"

#include "nhwave/errors.hpp"

#include <algorithm>

namespace nhwave {

mp::Real similarity_ratio(const ModelSpec& spec, Bits bits) {
    spec.validate();
    if (spec.variant == Variant::HatanoNelson) return mp::sqrt(spec.hn.t_r.at(bits) / spec.hn.t_l.at(bits));
    const mp::Real t1 = spec.ssh.t1.at(bits);
    const mp::Real half_g = spec.ssh.gamma.at(bits) / 2.0;
    return mp::sqrt((t1 + half_g) / (t1 - half_g));
}

SimilarityTransform make_transform_with_ratio(const ModelSpec& spec, const mp::Real& r) {
    if (!(r > 0.0)) throw InvalidParameter("similarity ratio must be positive");
    SimilarityTransform s;
    s.r = r;
    s.precision_bits = r.bits();
    const std::size_t n = static_cast<std::size_t>(spec.dim());
    s.diag.reserve(n);
    s.log_diag.reserve(n);
    const double log_r = r.log_abs();
    for (std::size_t i = 0; i < n; ++i) {
        // HN: r^(i+1); SSH: 1, r, r, r^2, r^2, ..., r^N
        const long power = spec.variant == Variant::HatanoNelson ? static_cast<long>(i + 1) : static_cast<long>((i + 1) / 2);
        s.diag.push_back(mp::pow(r, power));
        s.log_diag.push_back(static_cast<double>(power) * log_r);
    }
    return s;
}

SimilarityTransform make_transform(const ModelSpec& spec, Bits bits) {
    if (spec.boundary != Boundary::Open) throw Unsupported("the similarity transform Hermitizes only the open chain");
    if (!spec.clean()) throw Unsupported("the similarity transform is defined for the clean model");
    return make_transform_with_ratio(spec, similarity_ratio(spec, bits));
}

namespace {

void check_dims(const Hamiltonian& h, const SimilarityTransform& s) {
    if (h.dim() != s.dim())
        throw DimensionError("transform dimension " + std::to_string(s.dim()) + " does not match Hamiltonian dimension " +
                             std::to_string(h.dim()));
}

}  // namespace

Hamiltonian hermitian_counterpart(const Hamiltonian& h, const SimilarityTransform& s) {
    check_dims(h, s);
    Hamiltonian out = h;
    BandedMatrix& m = out.matrix;
    const std::size_t n = h.dim();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const mp::Real q = s.diag[i + 1] / s.diag[i];
        m.upper[i] *= q;
        m.lower[i] /= q;
    }
    if (m.corner_upper) {
        const mp::Real q = s.diag[n - 1] / s.diag[0];
        *m.corner_upper *= q;
        *m.corner_lower /= q;
    }
    return out;
}

double pseudo_hermiticity_residual(const Hamiltonian& h, const SimilarityTransform& s) {
    check_dims(h, s);
    const BandedMatrix& m = h.matrix;
    const std::size_t n = h.dim();
    mp::Real worst(h.precision_bits);
    auto consider = [&](const mp::Real& hij, const mp::Real& hji, std::size_t i, std::size_t j) {
        // (eta^-1 H eta)_ij = H_ij s_j^2 / s_i^2 against (H^dagger)_ij = H_ji
        mp::Real q = s.diag[j] / s.diag[i];
        q *= q;
        const mp::Real d = mp::abs(hji - hij * q);
        if (d > worst) worst = d;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        consider(m.upper[i], m.lower[i], i, i + 1);
        consider(m.lower[i], m.upper[i], i + 1, i);
    }
    if (m.corner_upper) {
        consider(*m.corner_upper, *m.corner_lower, 0, n - 1);
        consider(*m.corner_lower, *m.corner_upper, n - 1, 0);
    }
    return worst.to_double();
}

double hermiticity_residual(const Hamiltonian& h) {
    const BandedMatrix& m = h.matrix;
    mp::Real worst(h.precision_bits);
    for (std::size_t i = 0; i < m.upper.size(); ++i) {
        const mp::Real d = mp::abs(m.upper[i] - m.lower[i]);
        if (d > worst) worst = d;
    }
    if (m.corner_upper) {
        const mp::Real d = mp::abs(*m.corner_upper - *m.corner_lower);
        if (d > worst) worst = d;
    }
    return worst.to_double();
}

void apply_inverse_transform(const SimilarityTransform& s, std::vector<mp::Complex>& v) {
    if (v.size() != s.dim()) throw DimensionError("vector length does not match transform dimension");
    for (std::size_t i = 0; i < v.size(); ++i) {
        mpfr_div(v[i].re.get(), v[i].re.get(), s.diag[i].get(), MPFR_RNDN);
        mpfr_div(v[i].im.get(), v[i].im.get(), s.diag[i].get(), MPFR_RNDN);
    }
}

void apply_transform(const SimilarityTransform& s, std::vector<mp::Complex>& v) {
    if (v.size() != s.dim()) throw DimensionError("vector length does not match transform dimension");
    for (std::size_t i = 0; i < v.size(); ++i) {
        mpfr_mul(v[i].re.get(), v[i].re.get(), s.diag[i].get(), MPFR_RNDN);
        mpfr_mul(v[i].im.get(), v[i].im.get(), s.diag[i].get(), MPFR_RNDN);
    }
}

}  // namespace nhwave
