#include "nhwave/analytics.hpp"

#include "nhwave/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace nhwave {

namespace {

constexpr double kPi = std::numbers::pi;

void require_hn(const ModelSpec& spec, const char* op) {
    if (spec.variant != Variant::HatanoNelson) throw Unsupported(std::string(op) + " is defined for the Hatano-Nelson chain");
    spec.validate();
}

double ln_r(const ModelSpec& spec) { return 0.5 * std::log(spec.hn.t_r.value() / spec.hn.t_l.value()); }

/// q shifted by a multiple of 2 pi into (ref - pi, ref + pi].
double nearest_image(double q, double ref) { return q + 2 * kPi * std::round((ref - q) / (2 * kPi)); }

/// log|z1 + z2| and arg for z_j = exp(l_j + i phi_j).
std::pair<double, double> log_sum(const std::array<double, 2>& l, const std::array<double, 2>& phi) {
    const double top = std::max(l[0], l[1]);
    std::complex<double> s = 0.0;
    for (int j = 0; j < 2; ++j) s += std::polar(std::exp(l[j] - top), phi[j]);
    return {top + std::log(std::abs(s)), std::arg(s)};
}

struct Branch {
    double log_abs;
    double phase;
};

Branch inside_cone(double s, double q0, double delta, double x) {
    const double u = -delta / x;
    const double root = std::sqrt(1.0 - u * u);
    const double q1 = std::asin(u);
    std::array<double, 2> l{};
    std::array<double, 2> phi{};
    const std::array<double, 2> qs{q1, kPi - q1};
    for (int j = 0; j < 2; ++j) {
        const double q = nearest_image(qs[j], q0);
        const double curvature = x * std::cos(q);
        l[j] = -s * s * (q - q0) * (q - q0) + 0.5 * std::log(2 * kPi / (std::fabs(x) * root));
        phi[j] = q * delta - x * std::cos(q) + (curvature > 0 ? kPi / 4 : -kPi / 4);
    }
    const auto [la, ph] = log_sum(l, phi);
    return {la, ph};
}

Branch outside_cone(double s, double q0, double delta, double x) {
    using C = std::complex<double>;
    const C I(0.0, 1.0);
    const double eta = std::acosh(std::fabs(delta / x));
    const auto F = [&](C q) { return -s * s * (q - q0) * (q - q0) + I * (q * delta - x * std::cos(q)); };
    const auto dF = [&](C q) { return -2 * s * s * (q - q0) + I * (delta + x * std::sin(q)); };
    const auto d2F = [&](C q) { return C(-2 * s * s) + I * x * std::cos(q); };

    // Of the two saddles of the phase alone, keep the one on the decaying side.
    C q{};
    double best = INFINITY;
    for (double re : {kPi / 2, -kPi / 2}) {
        for (double im : {eta, -eta}) {
            const C c(re, im);
            if (std::abs(std::sin(c) + delta / x) > 1e-8 * (1 + std::fabs(delta / x))) continue;
            const double decay = std::real(I * (c * delta - x * std::cos(c)));
            if (decay < best) {
                best = decay;
                q = c;
            }
        }
    }
    q = C(nearest_image(q.real(), q0), q.imag());
    for (int it = 0; it < 100; ++it) {
        const C step = dF(q) / d2F(q);
        q -= step;
        if (std::abs(step) < 1e-14 * (1 + std::abs(q))) break;
    }
    const C f = F(q);
    const C curv = std::sqrt(C(2 * kPi) / (-d2F(q)));
    return {f.real() + std::log(std::abs(curv)), f.imag() + std::arg(curv)};
}

}  // namespace

VelocityPair velocities(const ModelSpec& spec) {
    require_hn(spec, "velocities");
    const double tl = std::fabs(spec.hn.t_l.value());
    const double tr = std::fabs(spec.hn.t_r.value());
    VelocityPair v;
    v.v_h = 2 * spec.a * std::sqrt(tl * tr);
    v.v_nh = (tl >= tr ? -1.0 : 1.0) * spec.a * (tl + tr);
    return v;
}

double ssh_hermitian_velocity(const ModelSpec& spec) {
    if (spec.variant != Variant::NhSsh) throw Unsupported("ssh_hermitian_velocity needs the SSH chain");
    spec.validate();
    return 2 * spec.a * std::min(std::fabs(spec.ssh_t1_tilde()), std::fabs(spec.ssh.t2.value()));
}

TransformedGaussian transformed_gaussian(const GaussianPacket& p, double r) {
    if (!(r > 0)) throw InvalidParameter("similarity ratio r must be positive");
    p.validate();
    const double s2 = (p.sigma / p.a) * (p.sigma / p.a);
    const double lr = std::log(r);
    return {s2 * lr * lr - p.n0 * lr, p.n0 - 2 * s2 * lr};
}

SaddleAmplitude saddle_point_amplitude(const GaussianPacket& p, const ModelSpec& spec, double m, double t) {
    require_hn(spec, "saddle_point_amplitude");
    p.validate();
    const double t0 = spec.t0();
    if (!(t >= 1.0 / std::fabs(t0)))
        throw DomainError("saddle-point form needs t >= 1/sqrt(t_l t_r) = " + std::to_string(1.0 / std::fabs(t0)));
    const double s = p.sigma / p.a;
    const double q0 = -p.a * p.k0;
    const double delta = m - p.n0;
    const double x = 2 * t0 * t;
    const double cone = std::fabs(x);
    const double base_log = -std::log(2 * kPi * p.a);
    const double base_phase = q0 * p.n0;
    const double sgn = delta < 0 ? -1.0 : 1.0;

    SaddleAmplitude out;
    Branch b{};
    if (std::fabs(std::fabs(delta) - cone) <= 2.0) {
        const Branch in = inside_cone(s, q0, sgn * std::max(cone - 2.0, 0.0), x);
        const Branch outb = outside_cone(s, q0, sgn * (cone + 2.0), x);
        b = in.log_abs >= outb.log_abs ? in : outb;
        out.branch = SaddleBranch::ConeBoundary;
        out.valid = false;
    } else if (std::fabs(delta) < cone) {
        b = inside_cone(s, q0, delta, x);
        out.branch = SaddleBranch::InsideCone;
    } else {
        b = outside_cone(s, q0, delta, x);
        out.branch = SaddleBranch::OutsideCone;
    }
    out.log_abs = base_log + b.log_abs;
    out.phase = std::remainder(base_phase + b.phase, 2 * kPi);
    return out;
}

double nh_gaussian_approximation(const GaussianPacket& p, const ModelSpec& spec, double m, double t) {
    require_hn(spec, "nh_gaussian_approximation");
    const double lr = ln_r(spec);
    const TransformedGaussian tg = transformed_gaussian(p, std::exp(lr));
    const double v_h = velocities(spec).v_h;
    if (!(std::fabs(p.a * (m - tg.n0_shifted)) < t * v_h))
        throw DomainError("site lies outside the Hermitian light cone of the shifted packet");
    GaussianPacket shifted = p;
    shifted.n0 = tg.n0_shifted;
    return tg.log_C + m * lr + saddle_point_amplitude(shifted, spec, m, t).log_abs;
}

PeakExpansion peak_expansion(const GaussianPacket& p, const ModelSpec& spec, int order) {
    require_hn(spec, "peak_expansion");
    p.validate();
    if (order < 1 || order > 3) throw InvalidParameter("peak expansion order must be 1, 2 or 3");
    const double lr = ln_r(spec);
    const double s2 = (p.sigma / p.a) * (p.sigma / p.a);
    const double v = velocities(spec).v_h / p.a;
    const double sn = std::sin(p.a * p.k0);
    const double cs2 = std::cos(p.a * p.k0) * std::cos(p.a * p.k0);
    PeakExpansion e;
    e.order = order;
    e.origin = transformed_gaussian(p, std::exp(lr)).n0_shifted;
    e.A = sn * v;
    if (order >= 2) e.B = lr / (2 * s2) * cs2 * v * v;
    if (order >= 3) e.C = -3 * lr * lr / (8 * s2 * s2) * cs2 * sn * v * v * v;
    return e;
}

ContinuumParams continuum_params(const ModelSpec& spec, double a0) {
    require_hn(spec, "continuum_params");
    if (!(a0 > 0)) throw InvalidParameter("reference spacing a0 must be positive");
    ContinuumParams cp;
    cp.a0 = a0;
    cp.t_l0 = spec.hn.t_l.value();
    cp.t_r0 = spec.hn.t_r.value();
    const double t0 = std::sqrt(cp.t_l0 * cp.t_r0);
    cp.E0 = 2 * t0;
    cp.mass = 1.0 / (2 * a0 * a0 * t0);
    cp.drift = a0 * std::log(cp.t_r0 / cp.t_l0) * t0;
    return cp;
}

double continuum_peak(const ContinuumParams& cp, const GaussianPacket& p, double t) {
    p.validate();
    return p.a * p.n0 + (p.k0 / cp.mass) * t + cp.drift / (cp.mass * p.sigma * p.sigma) * t * t / 2;
}

ReflectionPrediction reflection_prediction(const GaussianPacket& p, const ModelSpec& spec, double d, double a0) {
    require_hn(spec, "reflection_prediction");
    if (p.k0 == 0) throw InvalidParameter("reflection needs k0 != 0 so the packet reaches the wall");
    if (!(d > 0)) throw InvalidParameter("wall distance d must be positive");
    const PeakExpansion e = peak_expansion(p, spec, 3);
    const ContinuumParams cp = continuum_params(spec, a0);
    ReflectionPrediction rp;
    rp.d = d;
    rp.A = e.A;
    rp.B = e.B;
    rp.C = e.C;
    rp.t_hit_continuum = d / std::fabs(p.k0 / cp.mass);
    rp.t_hit_lattice = d / std::fabs(p.a * e.A);
    rp.t_delta = -e.C / e.A * std::pow(rp.t_hit_lattice, 3);
    try {
        rp.t_transition_cubic = solve_reflection_cubic(rp, p.a);
    } catch (const NoRootError&) {
        rp.t_transition_cubic.reset();
    }
    return rp;
}

double solve_reflection_cubic(const ReflectionPrediction& rp, double a) {
    // Orient so the packet moves toward the wall: |A| t + sgn(A) C t^3 = d/a.
    const double A = std::fabs(rp.A);
    const double C = rp.A < 0 ? -rp.C : rp.C;
    const double target = rp.d / a;
    if (A == 0) throw NoRootError("A(k0) vanishes: the packet never reaches the wall");
    const auto f = [&](double t) { return A * t + C * t * t * t - target; };
    double hi;
    if (C < 0) {
        hi = std::sqrt(-A / (3 * C));
        if (f(hi) < 0)
            throw NoRootError("A t + C t^3 peaks at " + std::to_string(f(hi) + target) + " < d/a = " +
                              std::to_string(target) + " (t* = " + std::to_string(hi) + ")");
    } else {
        hi = target / A;
    }
    return bisect(f, 0.0, hi);
}

namespace {

/// max over theta in (-pi/2, pi/2) of X L sin(theta) - s^2 (theta - ak)^2 with L = ln r.
double peak_log_amplitude(double X, double L, double s2, double ak) {
    const auto h = [&](double th) { return X * L * std::sin(th) - s2 * (th - ak) * (th - ak); };
    constexpr int kGrid = 256;
    const double lo = -kPi / 2;
    const double step = kPi / kGrid;
    int best = 0;
    double hb = h(lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double v = h(lo + i * step);
        if (v > hb) {
            hb = v;
            best = i;
        }
    }
    double a = lo + std::max(best - 1, 0) * step;
    double b = lo + std::min(best + 1, kGrid) * step;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double hc = h(c);
    double hd = h(d);
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        if (hc > hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - g * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + g * (b - a);
            hd = h(d);
        }
    }
    return std::max({hb, hc, hd});
}

}  // namespace

double critical_sigma_reflection(const ModelSpec& spec, double d, double k0, double a) {
    require_hn(spec, "critical_sigma_reflection");
    if (!(d > 0)) throw InvalidParameter("wall distance d must be positive");
    if (k0 == 0) throw InvalidParameter("critical width needs k0 != 0");
    const double L = -std::fabs(ln_r(spec));
    const double ak = std::fabs(a * k0);
    const double barrier = 2 * (d / a) * std::fabs(L);
    const double v = velocities(spec).v_h / a;

    // Image (momentum -k0, offset 2 d ln r) overtakes the incident packet at some time.
    const auto overtakes = [&](double sigma) {
        const double s2 = (sigma / a) * (sigma / a);
        double sup = 2 * kPi * s2 * ak;  // X -> infinity
        const double X0 = 1e-2 * (d / a);
        const double X1 = 1e3 * (d / a) + 10 * v;
        constexpr int kSteps = 400;
        for (int i = 0; i <= kSteps; ++i) {
            const double X = X0 * std::pow(X1 / X0, static_cast<double>(i) / kSteps);
            sup = std::max(sup, peak_log_amplitude(X, L, s2, -ak) - peak_log_amplitude(X, L, s2, ak));
        }
        return sup - barrier;
    };
    double lo = 0.05;
    double hi = 100.0;
    if (overtakes(hi) <= 0) throw NoRootError("no reflection transition for sigma up to 100");
    if (overtakes(lo) > 0) return lo;
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (overtakes(mid) > 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::complex<double> bloch_energy(const ModelSpec& spec, double k) {
    require_hn(spec, "bloch_energy");
    const double tl = spec.hn.t_l.value();
    const double tr = spec.hn.t_r.value();
    const double ka = k * spec.a;
    return {(tl + tr) * std::cos(ka), -(tl - tr) * std::sin(ka)};
}

DisorderPrediction disorder_prediction(const ModelSpec& spec, const GaussianPacket& p, double k_target, double w) {
    require_hn(spec, "disorder_prediction");
    p.validate();
    if (!(w > 0)) throw InvalidParameter("disorder strength w must be positive");
    const std::complex<double> Et = bloch_energy(spec, k_target);
    const double dRe = Et.real() - bloch_energy(spec, p.k0).real();
    if (std::fabs(dRe) < 1e-12) throw DomainError("target and carrier momenta have degenerate Re E");
    const double N = spec.N;
    DisorderPrediction dp;
    dp.small_t_coefficient = w * w / (3 * N);
    dp.V_s_main_text = dp.small_t_coefficient / (dRe * dRe);
    dp.V_s = 4 * dp.V_s_main_text;
    dp.t_s = kPi / std::fabs(dRe);
    dp.growth_rate = 2 * Et.imag();

    // ln sqrt(8 pi sigma^2/N^2) + 2 k0 b t + (b^2/2 sigma^2) t^2 = ln V_s + G (t - t_s)
    const double b = continuum_params(spec, spec.a).drift;
    const double qa = b * b / (2 * p.sigma * p.sigma);
    const double qb = 2 * p.k0 * b - dp.growth_rate;
    const double qc = 0.5 * std::log(8 * kPi * p.sigma * p.sigma / (N * N)) - std::log(dp.V_s) + dp.growth_rate * dp.t_s;
    std::vector<double> roots;
    if (qa == 0) {
        if (qb != 0) roots.push_back(-qc / qb);
    } else {
        const double disc = qb * qb - 4 * qa * qc;
        if (disc >= 0) {
            const double sq = std::sqrt(disc);
            // Stable pair of roots.
            const double qq = -0.5 * (qb + (qb >= 0 ? sq : -sq));
            if (qq != 0) roots.push_back(qc / qq);
            roots.push_back(qq / qa);
        }
    }
    for (double r : roots)
        if (r > 0 && (!dp.t_transition || r < *dp.t_transition)) dp.t_transition = r;
    return dp;
}

namespace {

double momentum_distance(const GaussianPacket& p, double k_target) {
    return std::fabs(std::remainder(p.a * (p.k0 - k_target), 2 * kPi));
}

double log_weight(double sigma, double a, double c, double N) {
    return 0.5 * std::log(8 * kPi * sigma * sigma / (N * N)) - 2 * (sigma / a) * (sigma / a) * c * c;
}

}  // namespace

double gaussian_momentum_weight(const ModelSpec& spec, const GaussianPacket& p, double k_target) {
    p.validate();
    return std::exp(log_weight(p.sigma, p.a, momentum_distance(p, k_target), spec.N));
}

double critical_sigma_disorder(const ModelSpec& spec, const GaussianPacket& p, double w, double k_target) {
    const DisorderPrediction dp = disorder_prediction(spec, p, k_target, w);
    const double c = momentum_distance(p, k_target);
    const double lv = std::log(dp.V_s);
    const auto f = [&](double sigma) { return log_weight(sigma, p.a, c, spec.N) - lv; };
    const double peak = p.a / (2 * c);
    if (f(peak) <= 0) return 0.0;
    double hi = 2 * peak;
    while (f(hi) > 0) hi *= 2;
    return bisect(f, peak, hi);
}

double critical_disorder(const ModelSpec& spec, const GaussianPacket& p, double k_target) {
    require_hn(spec, "critical_disorder");
    const double dRe = bloch_energy(spec, k_target).real() - bloch_energy(spec, p.k0).real();
    if (std::fabs(dRe) < 1e-12) throw DomainError("target and carrier momenta have degenerate Re E");
    const double weight = gaussian_momentum_weight(spec, p, k_target);
    return std::sqrt(3 * spec.N * dRe * dRe * weight / 4);
}

double localization_length(const ModelSpec& spec, double E, double w) {
    require_hn(spec, "localization_length");
    if (!(w > 0)) throw InvalidParameter("disorder strength w must be positive");
    const double t0 = std::fabs(spec.t0());
    if (std::fabs(E) > 2 * t0) throw DomainError("energy lies outside the band [-2 t0, 2 t0]");
    return 6 * spec.a * t0 * t0 / (w * w) * (1 - E * E / (4 * t0 * t0));
}

EdgeTimestamps edge_timestamps(const ModelSpec& spec, double x0) {
    require_hn(spec, "edge_timestamps");
    const double L = spec.N * spec.a;
    if (!(x0 >= 0 && x0 <= L)) throw DomainError("x0 must lie in [0, N a]");
    const VelocityPair v = velocities(spec);
    return {x0 / std::fabs(v.v_nh), x0 / v.v_h, (2 * L - x0) / v.v_h, (4 * L - x0) / v.v_h};
}

double ssh_edge_period(const ModelSpec& spec) { return 2 * spec.dim() * spec.a / ssh_hermitian_velocity(spec); }

}  // namespace nhwave
