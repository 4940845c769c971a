#include "nhwave/evolution.hpp"

#include "nhwave/errors.hpp"
#include "nhwave/tridiag_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nhwave {

using kernels::CVec;

StateVector StateVector::at_bits(Bits bits) const {
    StateVector s = *this;
    for (auto& z : s.amplitudes) z.set_bits(bits);
    return s;
}

mp::Real StateVector::norm2() const {
    mp::Real sum(bits());
    for (const auto& z : amplitudes) {
        mpfr_fma(sum.get(), z.re.get(), z.re.get(), sum.get(), MPFR_RNDN);
        mpfr_fma(sum.get(), z.im.get(), z.im.get(), sum.get(), MPFR_RNDN);
    }
    return sum;
}

void GaussianPacket::validate() const {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw InvalidParameter("Gaussian width sigma must be positive");
    if (!(a > 0)) throw InvalidParameter("lattice spacing a must be positive");
    if (!std::isfinite(n0)) throw InvalidParameter("Gaussian center n0 must be finite");
    if (!(std::fabs(k0 * a) <= std::numbers::pi + 1e-12)) throw InvalidParameter("carrier momentum must satisfy |k0 a| <= pi");
}

StateVector gaussian_state(const GaussianPacket& p, int dim, Bits bits) {
    p.validate();
    if (dim < 2) throw DimensionError("state dimension must be at least 2");
    StateVector s;
    s.amplitudes.reserve(static_cast<std::size_t>(dim));
    const mp::Real sigma(p.sigma, bits);
    const mp::Real a(p.a, bits);
    // (4 pi sigma^2)^(-1/2)
    const mp::Real pref = 1.0 / mp::sqrt(mp::pi(bits) * sigma * sigma * 4.0);
    const mp::Real inv4s2 = (a * a) / (sigma * sigma * 4.0);
    const mp::Real n0(p.n0, bits);
    const mp::Real ka = mp::Real(p.k0, bits) * a;
    for (int n = 1; n <= dim; ++n) {
        const mp::Real nn(static_cast<long>(n), bits);
        const mp::Real d = nn - n0;
        const mp::Real mag = pref * mp::exp(-(d * d * inv4s2));
        mp::Complex z = mp::expi(-(ka * nn));
        z *= mag;
        s.amplitudes.push_back(std::move(z));
    }
    return s;
}

StateVector delta_state(int n0, int dim, Bits bits) {
    if (dim < 2) throw DimensionError("state dimension must be at least 2");
    if (n0 < 1 || n0 > dim) throw DimensionError("delta site " + std::to_string(n0) + " outside [1, " + std::to_string(dim) + "]");
    StateVector s;
    s.amplitudes.assign(static_cast<std::size_t>(dim), mp::Complex(bits));
    s.amplitudes[static_cast<std::size_t>(n0 - 1)].re = mp::Real(1.0, bits);
    return s;
}

StateVector l2_normalized(StateVector psi) {
    const mp::Real nrm = mp::sqrt(psi.norm2());
    if (nrm.is_zero()) throw InvalidParameter("cannot normalize the zero vector");
    for (auto& z : psi.amplitudes) {
        z.re /= nrm;
        z.im /= nrm;
    }
    return psi;
}

std::string to_string(Backend b) { return b == Backend::SpectralTransform ? "spectral-transform" : "precision-stepper"; }

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::Max: return "max";
        case Normalization::L2: return "l2";
        case Normalization::SeriesMax: return "series-max";
    }
    return "none";
}

double EvolutionConfig::effective_tolerance() const {
    return stepper_tolerance > 0 ? stepper_tolerance : std::ldexp(1.0, 24 - static_cast<int>(precision_bits));
}

void EvolutionConfig::validate() const {
    if (precision_bits < mp::kDoubleBits) throw InvalidParameter("precision_bits must be at least 53");
    if (stepper_tolerance < 0 || !std::isfinite(stepper_tolerance)) throw InvalidParameter("stepper_tolerance must be positive");
    if (!(max_step > 0)) throw InvalidParameter("max_step must be positive");
    if (!(tail_floor_log10 < 0)) throw InvalidParameter("tail_floor_log10 must be negative");
    if (max_terms < 8) throw InvalidParameter("max_terms must be at least 8");
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
}

namespace {

double row_max(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    return m;
}

// log10 of sum 10^x_i, stable
double log10_sum(const std::vector<double>& v) {
    const double m = row_max(v);
    if (!std::isfinite(m)) return m;
    double s = 0;
    for (double x : v) s += std::pow(10.0, x - m);
    return m + std::log10(s);
}

}  // namespace

std::vector<double> Trajectory::normalized_abs2(std::size_t k, Normalization mode) const {
    const auto& row = snapshots.at(k).log10_abs2;
    double ref = 0.0;
    switch (mode) {
        case Normalization::None: ref = 0.0; break;
        case Normalization::Max: ref = row_max(row); break;
        case Normalization::L2: ref = log10_sum(row); break;
        case Normalization::SeriesMax: {
            ref = -std::numeric_limits<double>::infinity();
            for (const auto& s : snapshots) ref = std::max(ref, row_max(s.log10_abs2));
            break;
        }
    }
    if (!std::isfinite(ref)) ref = 0.0;
    std::vector<double> out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) out[i] = std::pow(10.0, row[i] - ref);
    return out;
}

Snapshot make_snapshot(const StateVector& psi) {
    Snapshot s;
    s.t = psi.time;
    s.log10_abs2.reserve(psi.size());
    s.phase.reserve(psi.size());
    mp::Real arg(mp::kDoubleBits);
    for (const auto& z : psi.amplitudes) {
        if (z.is_zero()) {
            s.log10_abs2.push_back(-std::numeric_limits<double>::infinity());
            s.phase.push_back(0.0);
            continue;
        }
        s.log10_abs2.push_back(2.0 * mp::log_abs(z) / std::numbers::ln10);
        mpfr_atan2(arg.get(), z.im.get(), z.re.get(), MPFR_RNDN);
        s.phase.push_back(arg.to_double());
    }
    return s;
}

// ---------------------------------------------------------------------------
// PrecisionStepper

PrecisionStepper::PrecisionStepper(const Hamiltonian& h, const EvolutionConfig& cfg)
    : h_(h), cfg_(cfg), bits_(h.precision_bits), tol_(cfg.effective_tolerance()), coef_(h.precision_bits) {
    cfg_.validate();
    const std::size_t n = h.dim();
    row_norm_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::fabs(h.matrix.diag[i].to_double());
        if (i > 0) s += std::fabs(h.matrix.lower[i - 1].to_double());
        if (i + 1 < n) s += std::fabs(h.matrix.upper[i].to_double());
        if (i == 0 && h.matrix.corner_upper) s += std::fabs(h.matrix.corner_upper->to_double());
        if (i == n - 1 && h.matrix.corner_lower) s += std::fabs(h.matrix.corner_lower->to_double());
        row_norm_ = std::max(row_norm_, s);
    }
    h_next_ = cfg_.max_step;
    term_ = kernels::zeros(n, bits_);
    next_ = kernels::zeros(n, bits_);
    full_ = kernels::zeros(n, bits_);
    mid_ = kernels::zeros(n, bits_);
    half_ = kernels::zeros(n, bits_);
}

long PrecisionStepper::floor_exponent(const CVec& psi) const {
    const long e = kernels::max_exponent(psi, cfg_.exec);
    if (e == LONG_MIN) return LONG_MIN / 4;
    return e + static_cast<long>(std::floor(cfg_.tail_floor_log10 * std::numbers::ln10 / std::numbers::ln2));
}

int PrecisionStepper::taylor_step(const CVec& in, double h, CVec& out) {
    const std::size_t n = h_.dim();
    for (std::size_t i = 0; i < n; ++i) {
        mpfr_set(out[i].re.get(), in[i].re.get(), MPFR_RNDN);
        mpfr_set(out[i].im.get(), in[i].im.get(), MPFR_RNDN);
        mpfr_set(term_[i].re.get(), in[i].re.get(), MPFR_RNDN);
        mpfr_set(term_[i].im.get(), in[i].im.get(), MPFR_RNDN);
    }
    kernels::set_zero(next_, {0, n});
    kernels::Support support = kernels::support_of(in);
    const long floor_exp = floor_exponent(in);
    const double hnorm = std::fabs(h) * row_norm_;
    mp::Real hh(h, bits_);
    int k = 1;
    for (;; ++k) {
        if (k > cfg_.max_terms)
            throw PrecisionError("Taylor series did not converge within max_terms", static_cast<long>(bits_) + 64);
        mpfr_div_si(coef_.get(), hh.get(), k, MPFR_RNDN);
        const auto st = kernels::taylor_term(h_.matrix, coef_.get(), term_, support, next_, out, floor_exp, cfg_.exec);
        std::swap(term_, next_);
        support = st.support;
        if (st.max_exponent == LONG_MIN) break;
        if (st.converged && static_cast<double>(k) > hnorm) break;
    }
    stats_.max_terms_used = std::max(stats_.max_terms_used, k);
    return k;
}

double PrecisionStepper::step_error(const CVec& full, const CVec& half, long floor_exp) const {
    mp::Real d(bits_);
    double worst = 0.0;
    const double ln2 = std::numbers::ln2;
    for (std::size_t i = 0; i < full.size(); ++i) {
        long e_diff = LONG_MIN;
        mpfr_sub(d.get(), full[i].re.get(), half[i].re.get(), MPFR_RNDN);
        e_diff = std::max(e_diff, d.exponent());
        mpfr_sub(d.get(), full[i].im.get(), half[i].im.get(), MPFR_RNDN);
        e_diff = std::max(e_diff, d.exponent());
        if (e_diff == LONG_MIN) continue;
        const long e_ref = std::max(half[i].exponent(), floor_exp);
        const double ratio = std::exp(static_cast<double>(e_diff - e_ref) * ln2);
        worst = std::max(worst, ratio);
    }
    return worst;
}

void PrecisionStepper::advance(CVec& psi, double dt) {
    if (dt < 0) throw InvalidParameter("cannot evolve backwards in time");
    const double min_step = cfg_.max_step * std::ldexp(1.0, -24);
    double remaining = dt;
    while (remaining > 0) {
        double h = std::min({h_next_, cfg_.max_step, remaining});
        for (;;) {
            taylor_step(psi, h, full_);
            taylor_step(psi, h / 2, mid_);
            taylor_step(mid_, h / 2, half_);
            const double err = step_error(full_, half_, floor_exponent(half_));
            if (err <= tol_) break;
            ++stats_.rejected;
            h /= 2;
            if (h < min_step) {
                const long need = static_cast<long>(bits_) + static_cast<long>(std::ceil(std::log2(err / tol_))) + 32;
                throw PrecisionError("step size underflow: tolerance " + std::to_string(tol_) + " unreachable at " +
                                         std::to_string(bits_) + " bits",
                                     need);
            }
        }
        std::swap(psi, half_);
        ++stats_.steps;
        stats_.smallest_step = stats_.smallest_step == 0.0 ? h : std::min(stats_.smallest_step, h);
        remaining -= h;
        if (remaining < 1e-14 * std::max(1.0, dt)) remaining = 0;
        h_next_ = std::min(cfg_.max_step, 2 * h);
    }
}

namespace {

void check_times(const std::vector<double>& times, double t_start) {
    if (times.empty()) throw InvalidParameter("times list is empty");
    double prev = t_start;
    bool first = true;
    for (double t : times) {
        if (!std::isfinite(t)) throw InvalidParameter("times must be finite");
        if (first ? t < prev : t <= prev) throw InvalidParameter("times must be strictly increasing and not before the initial state");
        prev = t;
        first = false;
    }
}

void record(Trajectory& traj, const StateVector& s, bool keep) {
    traj.snapshots.push_back(make_snapshot(s));
    if (keep) traj.states.push_back(s);
}

// ---------------------------------------------------------------------------
// Spectral backend: H' = V diag(lambda) V^T with real orthogonal V.

class SpectralPropagator {
  public:
    SpectralPropagator(const ModelSpec& spec, Bits bits, kernels::Exec exec)
        : bits_(bits), exec_(exec), s_(make_transform(spec, bits)) {
        n_ = static_cast<std::size_t>(spec.dim());
        if (spec.variant == Variant::HatanoNelson) {
            // H' hopping = t_l r = sign(t_l) sqrt(t_l t_r)
            const mp::Real hop = spec.hn.t_l.at(bits) * s_.r;
            const mp::Real np1(static_cast<long>(n_ + 1), bits);
            const mp::Real norm = mp::sqrt(mp::Real(2.0, bits) / np1);
            const mp::Real pi = mp::pi(bits);
            lambda_.reserve(n_);
            v_.assign(n_ * n_, mp::Real(bits));
            for (std::size_t m = 1; m <= n_; ++m) {
                const mp::Real theta = pi * mp::Real(static_cast<long>(m), bits) / np1;
                lambda_.push_back(hop * mp::cos(theta) * 2.0);
                for (std::size_t i = 1; i <= n_; ++i)
                    v_[(i - 1) * n_ + (m - 1)] = norm * mp::sin(theta * mp::Real(static_cast<long>(i), bits));
            }
        } else {
            const mp::Real t1 = spec.ssh.t1.at(bits);
            const mp::Real half_g = spec.ssh.gamma.at(bits) / 2.0;
            mp::Real t1t = mp::sqrt((t1 + half_g) * (t1 - half_g));
            if (t1 < 0.0) t1t = -t1t;
            const mp::Real t2 = spec.ssh.t2.at(bits);
            std::vector<mp::Real> d(n_, mp::Real(bits));
            std::vector<mp::Real> e;
            for (std::size_t i = 0; i + 1 < n_; ++i) e.push_back(i % 2 == 0 ? t1t : t2);
            auto eig = tridiag_eigen(std::move(d), std::move(e), mp::Real(bits), mp::epsilon(bits));
            lambda_ = std::move(eig.values);
            v_ = std::move(eig.vectors);
        }
    }

    void propagate(const StateVector& psi0, const std::vector<double>& times, Trajectory& traj, bool keep) {
        CVec phi = psi0.amplitudes;
        for (auto& z : phi) z.set_bits(bits_);
        apply_inverse_transform(s_, phi);
        // c = V^T phi0
        CVec c = kernels::zeros(n_, bits_);
        for (std::size_t m = 0; m < n_; ++m)
            for (std::size_t i = 0; i < n_; ++i) {
                const mp::Real& vim = v_[i * n_ + m];
                mpfr_fma(c[m].re.get(), vim.get(), phi[i].re.get(), c[m].re.get(), MPFR_RNDN);
                mpfr_fma(c[m].im.get(), vim.get(), phi[i].im.get(), c[m].im.get(), MPFR_RNDN);
            }
        CVec w = kernels::zeros(n_, bits_);
        StateVector out;
        out.amplitudes = kernels::zeros(n_, bits_);
        for (double t : times) {
            const mp::Real tt(t, bits_);
            for (std::size_t m = 0; m < n_; ++m) {
                w[m] = c[m] * mp::expi(-(lambda_[m] * tt));
            }
            const long rows = static_cast<long>(n_);
            auto row = [&](long ii) {
                const std::size_t i = static_cast<std::size_t>(ii);
                mp::Complex& z = out.amplitudes[i];
                mpfr_set_zero(z.re.get(), 1);
                mpfr_set_zero(z.im.get(), 1);
                for (std::size_t m = 0; m < n_; ++m) {
                    const mp::Real& vim = v_[i * n_ + m];
                    mpfr_fma(z.re.get(), vim.get(), w[m].re.get(), z.re.get(), MPFR_RNDN);
                    mpfr_fma(z.im.get(), vim.get(), w[m].im.get(), z.im.get(), MPFR_RNDN);
                }
            };
            if (exec_ == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(static)
                for (long i = 0; i < rows; ++i) row(i);
            } else {
                for (long i = 0; i < rows; ++i) row(i);
            }
            apply_transform(s_, out.amplitudes);
            out.time = t;
            if (t == psi0.time) out.amplitudes = psi0.at_bits(bits_).amplitudes;
            record(traj, out, keep);
        }
    }

  private:
    Bits bits_;
    kernels::Exec exec_;
    SimilarityTransform s_;
    std::size_t n_ = 0;
    std::vector<mp::Real> lambda_;
    std::vector<mp::Real> v_;
};

}  // namespace

Trajectory evolve_via_transform(const ModelSpec& spec, const StateVector& psi0, const std::vector<double>& times,
                                const EvolutionConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (!spec.clean()) throw Unsupported("spectral-transform backend requires a clean model (disorder present)");
    if (spec.boundary != Boundary::Open) throw Unsupported("spectral-transform backend requires open boundaries");
    if (psi0.size() != static_cast<std::size_t>(spec.dim())) throw DimensionError("initial state dimension does not match model");
    check_times(times, psi0.time);
    Trajectory traj;
    traj.model = spec;
    traj.config = cfg;
    traj.config.backend = Backend::SpectralTransform;
    std::vector<double> rel;
    rel.reserve(times.size());
    for (double t : times) rel.push_back(t - psi0.time);
    SpectralPropagator prop(spec, cfg.precision_bits, cfg.exec);
    StateVector shifted = psi0;
    shifted.time = 0.0;
    Trajectory tmp;
    prop.propagate(shifted, rel, tmp, cfg.keep_states);
    for (std::size_t k = 0; k < tmp.snapshots.size(); ++k) {
        tmp.snapshots[k].t = times[k];
        if (cfg.keep_states) tmp.states[k].time = times[k];
    }
    traj.snapshots = std::move(tmp.snapshots);
    traj.states = std::move(tmp.states);
    return traj;
}

Trajectory evolve(const Hamiltonian& h, const StateVector& psi0, const std::vector<double>& times,
                  const EvolutionConfig& cfg) {
    if (cfg.backend == Backend::SpectralTransform) {
        if (!h.model.clean()) throw Unsupported("spectral-transform backend requires a clean model (disorder present)");
        EvolutionConfig c = cfg;
        c.precision_bits = std::max(cfg.precision_bits, h.precision_bits);
        return evolve_via_transform(h.model, psi0, times, c);
    }
    cfg.validate();
    if (psi0.size() != h.dim()) throw DimensionError("initial state dimension does not match Hamiltonian");
    check_times(times, psi0.time);
    Trajectory traj;
    traj.model = h.model;
    traj.config = cfg;
    traj.config.precision_bits = h.precision_bits;
    PrecisionStepper stepper(h, cfg);
    StateVector psi = psi0.at_bits(h.precision_bits);
    for (double t : times) {
        stepper.advance(psi.amplitudes, t - psi.time);
        psi.time = t;
        record(traj, psi, cfg.keep_states);
    }
    traj.stats = stepper.stats();
    return traj;
}

std::vector<std::pair<double, double>> edge_amplitude_series(const Trajectory& traj, int site, Normalization mode) {
    if (site < 1 || static_cast<std::size_t>(site) > traj.dim())
        throw DimensionError("site " + std::to_string(site) + " outside the lattice");
    const std::size_t i = static_cast<std::size_t>(site - 1);
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.snapshots.size());
    if (mode == Normalization::SeriesMax) {
        double ref = -std::numeric_limits<double>::infinity();
        for (const auto& s : traj.snapshots) ref = std::max(ref, s.log10_abs2[i]);
        if (!std::isfinite(ref)) ref = 0.0;
        for (const auto& s : traj.snapshots) out.emplace_back(s.t, std::pow(10.0, s.log10_abs2[i] - ref));
        return out;
    }
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const auto& s = traj.snapshots[k];
        double ref = 0.0;
        if (mode == Normalization::Max) ref = row_max(s.log10_abs2);
        else if (mode == Normalization::L2) ref = log10_sum(s.log10_abs2);
        if (!std::isfinite(ref)) ref = 0.0;
        out.emplace_back(s.t, std::pow(10.0, s.log10_abs2[i] - ref));
    }
    return out;
}

std::vector<double> time_grid(double start, double stop, double step) {
    if (!(step > 0)) throw InvalidParameter("time step must be positive");
    if (stop < start) throw InvalidParameter("time grid stop precedes start");
    std::vector<double> t;
    const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) t.push_back(start + static_cast<double>(k) * step);
    return t;
}

}  // namespace nhwave
