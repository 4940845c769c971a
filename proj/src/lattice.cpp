#include "nhwave/lattice.hpp"

#include "nhwave/errors.hpp"
#include "nhwave/rng.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace nhwave {

Decimal::Decimal(double v) : value_(v) {
    if (!std::isfinite(v)) throw InvalidParameter("parameter must be finite");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    text_.assign(buf, res.ptr);
}

Decimal::Decimal(std::string text) : text_(std::move(text)) {
    const char* first = text_.data();
    const char* last = first + text_.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value_);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value_))
        throw InvalidParameter("not a decimal number: '" + text_ + "'");
}

ModelSpec ModelSpec::hatano_nelson(int N, Decimal t_l, Decimal t_r, Boundary b) {
    ModelSpec s;
    s.variant = Variant::HatanoNelson;
    s.N = N;
    s.boundary = b;
    s.hn = {std::move(t_l), std::move(t_r)};
    return s;
}

ModelSpec ModelSpec::nh_ssh(int cells, Decimal t1, Decimal t2, Decimal gamma, Boundary b) {
    ModelSpec s;
    s.variant = Variant::NhSsh;
    s.N = cells;
    s.boundary = b;
    s.ssh = {std::move(t1), std::move(t2), std::move(gamma)};
    return s;
}

double ModelSpec::t0() const {
    if (variant != Variant::HatanoNelson) throw Unsupported("t0 is defined for the Hatano-Nelson chain");
    const double p = std::sqrt(hn.t_l.value() * hn.t_r.value());
    return hn.t_l.value() < 0 ? -p : p;
}

double ModelSpec::ssh_t1_tilde() const {
    if (variant != Variant::NhSsh) throw Unsupported("t1_tilde is defined for the SSH chain");
    const double t1 = ssh.t1.value();
    const double g = ssh.gamma.value() / 2;
    const double p = std::sqrt((t1 + g) * (t1 - g));
    return t1 < 0 ? -p : p;
}

ModelSpec ModelSpec::with_disorder(DisorderSpec d) const {
    ModelSpec s = *this;
    s.disorder = d;
    return s;
}

void ModelSpec::validate() const {
    if (N < 2) throw DimensionError("N must be at least 2, got " + std::to_string(N));
    if (!(a > 0) || !std::isfinite(a)) throw InvalidParameter("lattice spacing a must be positive");
    if (variant == Variant::HatanoNelson) {
        const double tl = hn.t_l.value();
        const double tr = hn.t_r.value();
        if (tl == 0 || tr == 0) throw InvalidParameter("hoppings t_l and t_r must be nonzero");
        if ((tl > 0) != (tr > 0)) throw InvalidParameter("hoppings t_l and t_r must share the same sign");
    } else {
        const double t1 = ssh.t1.value();
        if (!(std::fabs(ssh.gamma.value() / 2) < std::fabs(t1)))
            throw InvalidParameter("SSH requires |gamma/2| < |t1|");
        if (ssh.t2.value() == 0) throw InvalidParameter("SSH inter-cell hopping t2 must be nonzero");
    }
    if (disorder && (!(disorder->w >= 0) || !std::isfinite(disorder->w)))
        throw InvalidParameter("disorder amplitude w must be finite and non-negative");
}

std::string to_string(Variant v) { return v == Variant::HatanoNelson ? "hatano-nelson" : "nh-ssh"; }
std::string to_string(Boundary b) { return b == Boundary::Open ? "obc" : "pbc"; }

mp::Real BandedMatrix::at(std::size_t i, std::size_t j) const {
    const std::size_t n = dim();
    const Bits bits = diag.empty() ? mp::kDoubleBits : diag.front().bits();
    if (i >= n || j >= n) throw DimensionError("matrix index out of range");
    if (i == j) return diag[i];
    if (j == i + 1) return upper[i];
    if (i == j + 1) return lower[j];
    if (i == 0 && j == n - 1 && corner_upper) return *corner_upper;
    if (i == n - 1 && j == 0 && corner_lower) return *corner_lower;
    return mp::Real(bits);
}

BandedMatrix BandedMatrix::transpose() const {
    BandedMatrix t;
    t.diag = diag;
    t.upper = lower;
    t.lower = upper;
    t.corner_upper = corner_lower;
    t.corner_lower = corner_upper;
    return t;
}

Hamiltonian Hamiltonian::adjoint() const {
    Hamiltonian h = *this;
    h.matrix = matrix.transpose();
    return h;
}

Hamiltonian build_hamiltonian(const ModelSpec& spec, Bits precision_bits) {
    spec.validate();
    if (precision_bits < mp::kDoubleBits)
        throw InvalidParameter("precision_bits must be at least 53, got " + std::to_string(precision_bits));

    const std::size_t n = static_cast<std::size_t>(spec.dim());
    Hamiltonian h;
    h.precision_bits = precision_bits;
    h.model = spec;
    BandedMatrix& m = h.matrix;
    m.diag.assign(n, mp::Real(precision_bits));
    m.upper.reserve(n - 1);
    m.lower.reserve(n - 1);

    if (spec.variant == Variant::HatanoNelson) {
        const mp::Real tl = spec.hn.t_l.at(precision_bits);
        const mp::Real tr = spec.hn.t_r.at(precision_bits);
        m.upper.assign(n - 1, tl);
        m.lower.assign(n - 1, tr);
        if (spec.boundary == Boundary::Periodic) {
            m.corner_upper = tr;
            m.corner_lower = tl;
        }
    } else {
        const mp::Real t1 = spec.ssh.t1.at(precision_bits);
        const mp::Real half_g = spec.ssh.gamma.at(precision_bits) / 2.0;
        const mp::Real t2 = spec.ssh.t2.at(precision_bits);
        const mp::Real ab = t1 - half_g;
        const mp::Real ba = t1 + half_g;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const bool intra = i % 2 == 0;
            m.upper.push_back(intra ? ab : t2);
            m.lower.push_back(intra ? ba : t2);
        }
        if (spec.boundary == Boundary::Periodic) {
            m.corner_upper = t2;
            m.corner_lower = t2;
        }
    }

    if (spec.disorder && spec.disorder->w != 0.0) {
        const auto w = disorder_realization(*spec.disorder, static_cast<int>(n));
        for (std::size_t i = 0; i < n; ++i) m.diag[i] = mp::Real(w[i], precision_bits);
    }
    return h;
}

SpectrumResult pbc_spectrum(const ModelSpec& spec) {
    if (spec.variant != Variant::HatanoNelson) throw Unsupported("PBC band structure is only provided for Hatano-Nelson");
    spec.validate();
    if (!spec.clean()) throw Unsupported("PBC spectrum requires a clean (disorder-free) chain");
    SpectrumResult r;
    r.basis = SpectrumBasis::PbcBloch;
    const double tl = spec.hn.t_l.value();
    const double tr = spec.hn.t_r.value();
    for (int m = 0; m < spec.N; ++m) {
        const double k = 2 * std::numbers::pi * m / (spec.N * spec.a);
        const double ka = k * spec.a;
        r.energies.emplace_back((tl + tr) * std::cos(ka), (tl - tr) * std::sin(ka));
        r.labels.push_back(k);
    }
    return r;
}

SpectrumResult obc_spectrum_hn(const ModelSpec& spec) {
    if (spec.variant != Variant::HatanoNelson) throw Unsupported("analytic OBC spectrum is only provided for Hatano-Nelson");
    spec.validate();
    if (spec.boundary != Boundary::Open) throw Unsupported("analytic OBC spectrum requires open boundaries");
    if (!spec.clean()) throw Unsupported("analytic OBC spectrum requires a clean (disorder-free) chain");
    SpectrumResult r;
    r.basis = SpectrumBasis::ObcAnalytic;
    const double t0 = spec.t0();
    for (int m = 1; m <= spec.N; ++m) {
        const double theta = std::numbers::pi * m / (spec.N + 1);
        r.energies.emplace_back(2 * t0 * std::cos(theta), 0.0);
        r.labels.push_back(m);
    }
    return r;
}

std::vector<mp::Real> obc_eigenvector_hn(const ModelSpec& spec, int m, Bits bits) {
    if (spec.variant != Variant::HatanoNelson || spec.boundary != Boundary::Open)
        throw Unsupported("OBC eigenvectors are only provided for Hatano-Nelson with open boundaries");
    spec.validate();
    if (m < 1 || m > spec.N) throw DimensionError("mode index m must lie in [1, N]");
    const mp::Real ratio = spec.hn.t_r.at(bits) / spec.hn.t_l.at(bits);
    const mp::Real r = mp::sqrt(ratio);
    const mp::Real theta = mp::pi(bits) * mp::Real(static_cast<long>(m), bits) / mp::Real(static_cast<long>(spec.N + 1), bits);
    const mp::Real norm = mp::sqrt(mp::Real(2.0, bits) / mp::Real(static_cast<long>(spec.N + 1), bits));
    std::vector<mp::Real> v;
    v.reserve(spec.N);
    mp::Real rn = norm;
    for (int n = 1; n <= spec.N; ++n) {
        rn *= r;
        v.push_back(rn * mp::sin(theta * mp::Real(static_cast<long>(n), bits)));
    }
    return v;
}

std::vector<double> disorder_realization(const DisorderSpec& d, int N) {
    if (N < 1) throw DimensionError("disorder realization needs N >= 1");
    std::vector<double> w(static_cast<std::size_t>(N), 0.0);
    if (d.w == 0.0) return w;
    for (int i = 0; i < N; ++i) {
        const double u = unit_interval(splitmix64(d.seed, static_cast<std::uint64_t>(i)));
        w[static_cast<std::size_t>(i)] = d.w * (2.0 * u - 1.0);
    }
    return w;
}

}  // namespace nhwave
