// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance [--skip-slow] [--only K]

#include "nhwave/analytics.hpp"
#include "nhwave/bessel.hpp"
#include "nhwave/rng.hpp"
#include "nhwave/scenario.hpp"
#include "nhwave/similarity.hpp"
#include "nhwave/wavefront.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace nhwave;

namespace {

bool g_skip_slow = false;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << what << (ok ? "" : " [x]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ScenarioConfig preset(const char* name) { return parse_scenario(find_preset(name)->yaml); }

Trajectory run(const ScenarioConfig& cfg, std::optional<Backend> backend = {}, std::optional<Bits> bits = {},
               double sigma = 0, const ModelSpec* model = nullptr, bool keep = false) {
    EvolutionConfig ec;
    const ModelSpec& spec = model ? *model : cfg.model;
    ec.backend = backend.value_or(cfg.evolution.backend.value_or(
        spec.clean() && spec.boundary == Boundary::Open ? Backend::SpectralTransform : Backend::PrecisionStepper));
    ec.precision_bits = bits.value_or(cfg.evolution.precision_bits);
    ec.stepper_tolerance = cfg.evolution.tolerance;
    ec.max_step = cfg.evolution.max_step;
    ec.tail_floor_log10 = cfg.evolution.tail_floor_log10;
    ec.keep_states = keep;
    ScenarioConfig local = cfg;
    local.model = spec;
    const StateVector psi0 =
        initial_state(local, sigma > 0 ? sigma : cfg.initial.sigmas.front(), ec.precision_bits);
    if (ec.backend == Backend::SpectralTransform) return evolve_via_transform(spec, psi0, cfg.evolution.times, ec);
    return evolve(build_hamiltonian(spec, ec.precision_bits), psi0, cfg.evolution.times, ec);
}

std::vector<FrontEvent> jumps(const Trajectory& traj, int min_sites) {
    const ModelSpec& m = traj.model;
    const double vmax = m.a * (std::fabs(m.hn.t_l.value()) + std::fabs(m.hn.t_r.value()));
    return detect_transition(peak_trace(traj), min_sites, vmax, m.a, &traj);
}

double rel_diff(const mp::Complex& a, const mp::Complex& b) {
    const mp::Real d = mp::abs(a - b);
    const mp::Real s = mp::abs(b);
    if (s.is_zero()) return d.is_zero() ? 0.0 : INFINITY;
    return (d / s).to_double();
}

// ---- criteria -----------------------------------------------------------

void transform_identity(Outcome& o) {
    const auto spec = ModelSpec::hatano_nelson(60, Decimal("2"), Decimal("0.2"));
    const Bits bits = 212;
    StateVector psi0;
    psi0.amplitudes = kernels::zeros(60, bits);
    // random phases, log-uniform magnitudes in [1e-150, 1]
    for (std::size_t n = 0; n < 60; ++n) {
        const mp::Real mag = mp::pow(mp::Real(10.0, bits), mp::Real(-150 * unit_interval(splitmix64(2024, 2 * n)), bits));
        const mp::Real phase(2 * M_PI * unit_interval(splitmix64(2024, 2 * n + 1)), bits);
        psi0.amplitudes[n] = mp::expi(phase) * mag;
    }
    EvolutionConfig ec;
    ec.precision_bits = bits;
    ec.keep_states = true;
    ec.backend = Backend::PrecisionStepper;
    const Trajectory a = evolve(build_hamiltonian(spec, bits), psi0, {5.0, 20.0}, ec);
    ec.backend = Backend::SpectralTransform;
    const Trajectory b = evolve_via_transform(spec, psi0, {5.0, 20.0}, ec);
    double worst = 0, smallest = 0;
    int compared = 0;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t n = 0; n < 60; ++n) {
            const double l = 0.5 * b.snapshots[k].log10_abs2[n];
            if (l < -150) continue;
            worst = std::max(worst, rel_diff(a.states[k].amplitudes[n], b.states[k].amplitudes[n]));
            smallest = std::min(smallest, l);
            ++compared;
        }
    o.check(worst <= 1e-8, fmt("max entrywise rel diff %.2e over %.0f entries, smallest log10|psi| %.1f", worst,
                               compared, smallest));
}

void bessel_oracle(Outcome& o) {
    const int N = 200, n0 = 100;
    const double t = 20;
    const Bits bits = 256;
    const auto spec = ModelSpec::hatano_nelson(N, Decimal("2"), Decimal("0.2"));
    EvolutionConfig ec;
    ec.backend = Backend::PrecisionStepper;
    ec.precision_bits = bits;
    ec.keep_states = true;
    const Trajectory tr = evolve(build_hamiltonian(spec, bits), delta_state(n0, N, bits), {t}, ec);
    const mp::Real r = similarity_ratio(spec, bits);
    const mp::Real t0 = mp::sqrt(spec.hn.t_l.at(bits) * spec.hn.t_r.at(bits));
    double worst = 0;
    for (int m = n0 - 60; m <= n0 + 60; ++m) {
        const int d = m - n0;
        mp::Complex ref = bessel_propagator(d, t0, mp::Real(t, bits));
        ref *= mp::pow(r, d);
        worst = std::max(worst, rel_diff(tr.states[0].amplitudes[m - 1], ref));
    }
    o.check(worst <= 1e-6, fmt("max rel diff over |m-n0|<=60: %.2e", worst));
    const auto js = bessel_j_all(400, mp::Real(2 * t * spec.t0(), bits));
    mp::Real sum = js[0] * js[0];
    for (std::size_t k = 1; k < js.size(); ++k) sum += 2.0 * (js[k] * js[k]);
    const double dev = std::fabs(sum.to_double() - 1.0);
    o.check(dev <= 1e-10, fmt("|sum J^2 - 1| = %.2e", dev));
}

void fig2_timestamps(Outcome& o) {
    const ScenarioConfig cfg = preset("fig2");
    const Trajectory tr = run(cfg);
    const auto feats = detect_edge_features(tr, cfg.analysis.edge_site);
    double t1 = NAN, t2 = NAN, t3 = NAN;
    for (const auto& e : feats) {
        if (e.kind == FrontKind::NhFrontArrival && std::isnan(t1)) t1 = e.time;
        if (e.kind == FrontKind::HermitianFrontArrival && std::isnan(t2)) t2 = e.time;
        if (e.kind == FrontKind::ReflectionOnset && std::isnan(t3)) t3 = e.time;
    }
    o.check(std::fabs(t1 - 45.5) <= 2, fmt("t1 = %.1f", t1));
    o.check(std::fabs(t2 - 79.1) <= 2, fmt("t2 = %.1f", t2));
    o.check(std::fabs(t3 - 237.2) <= 4, fmt("t3 = %.1f", t3));
}

void fig3_bulk(Outcome& o) {
    const ScenarioConfig cfg = preset("fig3");
    const Trajectory tr = run(cfg);
    const GaussianPacket p{cfg.initial.n0, cfg.initial.sigmas.front(), cfg.initial.k0, cfg.model.a};
    const PeakExpansion pe = peak_expansion(p, cfg.model, 3);
    const ContinuumParams cp = continuum_params(cfg.model, 1.0);
    const auto trace = peak_trace(tr);
    double dev_pe = 0, dev_pe_t = 0, dev_cont = 0;
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : trace) {
        if (s.t <= 20 && std::fabs(s.site - pe(s.t)) > dev_pe) {
            dev_pe = std::fabs(s.site - pe(s.t));
            dev_pe_t = s.t;
        }
        if (s.t <= 10) dev_cont = std::max(dev_cont, std::fabs(s.site - continuum_peak(cp, p, s.t)));
        xy.emplace_back(s.t, s.site);
    }
    const double v = std::fabs(linear_fit(xy, 40, 70).slope);
    const double vnh = std::fabs(velocities(cfg.model).v_nh);
    o.check(dev_pe <= 2, fmt("max |peak - expansion| %.2f sites at t=%.0f (t<=20)", dev_pe, dev_pe_t));
    o.check(std::fabs(v - vnh) <= 0.05 * vnh, fmt("peak velocity %.3f vs |v_nh| %.3f", v, vnh));
    o.check(dev_cont <= 2, fmt("max |peak - continuum| %.2f sites (t<=10)", dev_cont));
}

void fig4_reflection(Outcome& o) {
    const ScenarioConfig cfg = preset("fig4");
    const GaussianPacket p{cfg.initial.n0, cfg.initial.sigmas.front(), cfg.initial.k0, cfg.model.a};
    const ReflectionPrediction rp = reflection_prediction(p, cfg.model, (cfg.model.N - p.n0) * p.a, 1.0);
    const Trajectory tr = run(cfg);
    const auto js = jumps(tr, cfg.analysis.min_jump_sites);
    const double tj = js.empty() ? NAN : js.front().time;
    o.check(std::fabs(rp.t_hit_continuum - 36.8) <= 1, fmt("continuum t_hit %.2f", rp.t_hit_continuum));
    o.check(std::fabs(tj - 70) <= 5, fmt("lattice jump at t=%.0f", tj));
    o.check(std::fabs(rp.t_hit_lattice - 40.8) <= 0.5, fmt("t_hit_lattice %.2f", rp.t_hit_lattice));
}

void critical_width(Outcome& o) {
    const auto spec = ModelSpec::hatano_nelson(400, 2.0, 1.5);
    double prev = 0;
    bool monotone = true;
    std::ostringstream vals;
    for (double d : {50.0, 60.0, 70.0}) {
        const double s = critical_sigma_reflection(spec, d, M_PI / 4);
        if (d == 50.0) o.check(s > 1.5 && s < 2.0, fmt("sigma_c(d=50) %.3f", s));
        if (s <= prev) monotone = false;
        vals << (d == 50.0 ? "" : ", ") << fmt("%.3f", s);
        prev = s;
    }
    o.check(monotone, "sigma_c over d=50,60,70: " + vals.str());
}

void fig6_disorder(Outcome& o) {
    const ScenarioConfig cfg = preset("fig6");
    std::vector<double> first;
    std::ostringstream list;
    for (int r = 0; r < cfg.realizations; ++r) {
        const ModelSpec m = cfg.model.with_disorder({cfg.model.disorder->w, cfg.seed + static_cast<std::uint64_t>(r)});
        const Trajectory tr = run(cfg, {}, {}, 0, &m);
        const auto js = jumps(tr, cfg.analysis.min_jump_sites);
        const double t = js.empty() ? NAN : js.front().time;
        first.push_back(t);
        list << (r ? "," : "") << fmt("%.0f", t);
    }
    double mean = 0;
    for (double t : first) mean += t;
    mean /= static_cast<double>(first.size());
    const GaussianPacket p{cfg.initial.n0, cfg.initial.sigmas.front(), cfg.initial.k0, cfg.model.a};
    const auto dp = disorder_prediction(cfg.model, p, -M_PI / 2, cfg.model.disorder->w);
    const double pred = dp.t_transition.value_or(NAN);
    o.check(std::fabs(mean - 27) <= 3, "first jumps [" + list.str() + "] mean " + fmt("%.1f", mean));
    o.check(std::fabs(pred - mean) <= 2, fmt("predicted %.2f", pred));
}

void perturbation_law(Outcome& o) {
    const int N = 100, R = 200;
    const double w = 1e-3, k = -M_PI / 2;
    const Bits bits = 128;
    const auto clean = ModelSpec::hatano_nelson(N, Decimal("2"), Decimal("1.5"), Boundary::Periodic);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(0.05 * i);
    for (double t = 1.0; t <= 12.0 + 1e-9; t += 0.25) times.push_back(t);
    const StateVector psi0 = l2_normalized(gaussian_state({75, 3, M_PI / 4, 1}, N, bits));
    EvolutionConfig ec;
    ec.backend = Backend::PrecisionStepper;
    ec.precision_bits = bits;
    ec.keep_states = true;

    const auto occupation = [&](const StateVector& psi) {
        double re = 0, im = 0;
        for (int n = 1; n <= N; ++n) {
            const double c = std::cos(k * n), s = std::sin(k * n);
            const double x = psi.amplitudes[n - 1].re.to_double(), y = psi.amplitudes[n - 1].im.to_double();
            re += c * x - s * y;
            im += c * y + s * x;
        }
        return (re * re + im * im) / N;
    };

    std::vector<double> avg(times.size(), 0.0);
    for (int r = 0; r < R; ++r) {
        const ModelSpec m = clean.with_disorder({w, 1000 + static_cast<std::uint64_t>(r)});
        const Trajectory tr = evolve(build_hamiltonian(m, bits), psi0, times, ec);
        for (std::size_t i = 0; i < times.size(); ++i) avg[i] += occupation(tr.states[i]) / R;
    }
    const Trajectory base = evolve(build_hamiltonian(clean, bits), psi0, times, ec);

    double worst = 0, worst_t = 0;
    for (std::size_t i = 0; i < times.size() && times[i] <= 0.5 + 1e-12; ++i) {
        const double law = times[i] * times[i] * w * w / (3.0 * N);
        const double dev = std::fabs((avg[i] - occupation(base.states[i])) / law - 1);
        if (dev > worst) {
            worst = dev;
            worst_t = times[i];
        }
    }
    o.check(worst <= 0.15, fmt("small-t law max deviation %.1f%% at t=%.2f", 100 * worst, worst_t));

    const GaussianPacket p{75, 3, M_PI / 4, 1};
    const auto dp = disorder_prediction(clean, p, k, w);
    double plateau = INFINITY, plateau_t = 0;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        if (times[i] < 1.0 || times[i] > 4.0) continue;
        const double slope = std::log(avg[i + 1] / avg[i - 1]) / (times[i + 1] - times[i - 1]);
        if (std::fabs(slope) < plateau) {
            plateau = std::fabs(slope);
            plateau_t = times[i];
        }
    }
    double vp = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] == plateau_t) vp = avg[i];
    o.check(std::fabs(std::log10(vp / dp.V_s)) <= std::log10(2.0),
            fmt("plateau %.3e at t=%.2f vs V_s %.3e", vp, plateau_t, dp.V_s));

    std::vector<std::pair<double, double>> xy;
    for (std::size_t i = 0; i < times.size(); ++i) xy.emplace_back(times[i], std::log(avg[i]));
    const double slope = linear_fit(xy, 6.0, 12.0).slope;
    const double expect = 2 * (2.0 - 1.5);
    o.check(std::fabs(slope - expect) <= 0.1 * expect, fmt("growth slope %.3f vs %.3f", slope, expect));
}

void saddle_accuracy(Outcome& o) {
    ScenarioConfig cfg = preset("appendixA");
    cfg.evolution.times = {10, 20, 30, 50};
    const Trajectory tr = run(cfg, {}, Bits{212});
    const GaussianPacket p{cfg.initial.n0, cfg.initial.sigmas.front(), cfg.initial.k0, cfg.model.a};
    const double vh = velocities(cfg.model).v_h;
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        const Snapshot& s = tr.snapshots[k];
        if (s.t != 20) {
            const auto it = std::max_element(s.log10_abs2.begin(), s.log10_abs2.end());
            const int m = static_cast<int>(it - s.log10_abs2.begin()) + 1;
            const double num = std::pow(10.0, 0.5 * *it);
            const double ana = std::exp(saddle_point_amplitude(p, cfg.model, m, s.t).log_abs);
            o.check(std::fabs(ana / num - 1) <= 0.05, fmt("t=%.0f peak err %.1f%%", s.t, 100 * std::fabs(ana / num - 1)));
        }
        if (s.t <= 30) {
            const int m = static_cast<int>(std::lround(p.n0 + 1.5 * vh * s.t));
            const double num = 0.5 * s.log10_abs2[m - 1];
            const auto sa = saddle_point_amplitude(p, cfg.model, m, s.t);
            const double ana = sa.log_abs / std::log(10.0);
            o.check(sa.branch == SaddleBranch::OutsideCone && std::fabs(ana - num) <= 2,
                    fmt("t=%.0f outside-cone log10 %.2f vs %.2f", s.t, ana, num));
        }
    }
}

void ssh_generalization(Outcome& o) {
    const ScenarioConfig cfg = preset("fig7-ssh");
    const Trajectory tr = run(cfg);
    const auto series = edge_amplitude_series(tr, cfg.analysis.edge_site, cfg.analysis.edge_normalization);
    const double expect = ssh_edge_period(cfg.model);
    double period = NAN;
    try {
        period = oscillation_period(series, cfg.analysis.period_min_separation);
    } catch (const InsufficientPeaks&) {
    }
    o.check(std::fabs(period - expect) <= 0.05 * expect, fmt("period %.1f vs %.1f", period, expect));
    double sum = 0;
    int count = 0;
    for (const auto& [t, v] : series)
        if (t >= *cfg.analysis.edge_mean_from) {
            sum += v;
            ++count;
        }
    const double mean = sum / count;
    o.check(mean >= 0.7 && mean <= 0.9, fmt("mean edge amplitude %.3f", mean));
    const auto spec = ModelSpec::nh_ssh(50, Decimal("0.4"), Decimal("1"), Decimal("0.5"));
    const Hamiltonian h = build_hamiltonian(spec, 53);
    const auto s = make_transform(spec, 53);
    const double res = std::max(hermiticity_residual(hermitian_counterpart(h, s)), pseudo_hermiticity_residual(h, s));
    o.check(res <= 1e-12, fmt("Hermitization residual %.1e (N=50, 53 bits)", res));
}

void precision_as_disorder(Outcome& o) {
    const ScenarioConfig cfg = preset("fig4");
    const auto spurious = [](const std::vector<FrontEvent>& js) {
        int n = 0;
        for (const auto& e : js)
            if (std::fabs(e.time - 70) > 5) ++n;
        return n;
    };
    const auto describe = [](const std::vector<FrontEvent>& js) {
        std::ostringstream s;
        for (std::size_t i = 0; i < js.size(); ++i) s << (i ? "," : "") << js[i].time;
        return "[" + s.str() + "]";
    };
    const auto low = jumps(run(cfg, Backend::SpectralTransform, Bits{53}), cfg.analysis.min_jump_sites);
    o.check(spurious(low) > 0, "53-bit jumps " + describe(low));
    const auto high = jumps(run(cfg, Backend::SpectralTransform, Bits{166}), cfg.analysis.min_jump_sites);
    o.check(spurious(high) == 0, "166-bit spectral jumps " + describe(high));
    if (!g_skip_slow) {
        const auto step = jumps(run(cfg, Backend::PrecisionStepper, Bits{166}), cfg.analysis.min_jump_sites);
        o.check(spurious(step) == 0, "166-bit stepper jumps " + describe(step));
    } else {
        o.detail << "; 166-bit stepper run skipped";
    }
}

void formula_consistency(Outcome& o) {
    double worst_b = 0, worst_parity = 0, worst_shift = 0;
    bool velocity_order = true;
    double worst_equal = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const double tl = 0.1 + 2.9 * unit_interval(splitmix64(7, 3 * i));
        const double tr = 0.1 + 2.9 * unit_interval(splitmix64(7, 3 * i + 1));
        const double sigma = 1.0 + 4.0 * unit_interval(splitmix64(7, 3 * i + 2));
        const auto spec = ModelSpec::hatano_nelson(400, tl, tr);

        const GaussianPacket p0{200, sigma, 0, 1};
        const PeakExpansion e0 = peak_expansion(p0, spec, 3);
        const ContinuumParams cp = continuum_params(spec, 1.0);
        const double bt = cp.drift / (2 * cp.mass * sigma * sigma);
        worst_b = std::max(worst_b, std::fabs(e0.B - bt) / std::fabs(bt));

        const double k0 = 0.2 + 1.2 * unit_interval(splitmix64(11, i));
        const PeakExpansion ep = peak_expansion({200, sigma, k0, 1}, spec, 3);
        const PeakExpansion em = peak_expansion({200, sigma, -k0, 1}, spec, 3);
        worst_parity = std::max({worst_parity, std::fabs(ep.A + em.A) / std::fabs(ep.A),
                                 std::fabs(ep.B - em.B) / std::fabs(ep.B), std::fabs(ep.C + em.C) / std::fabs(ep.C)});

        const auto v = velocities(spec);
        if (std::fabs(v.v_nh) < v.v_h * (1 - 1e-15)) velocity_order = false;
        const auto vs = velocities(ModelSpec::hatano_nelson(400, tl, tl));
        worst_equal = std::max(worst_equal, std::fabs(std::fabs(vs.v_nh) - vs.v_h) / vs.v_h);
    }
    o.check(worst_b <= 1e-13, fmt("t^2 coefficient vs b/(2 m sigma^2): %.1e", worst_b));
    o.check(worst_parity <= 1e-13, fmt("A/C odd, B even in k0: %.1e", worst_parity));
    o.check(velocity_order && worst_equal <= 1e-14, fmt("|v_nh| >= v_h, equality at t_l=t_r: %.1e", worst_equal));

    const Bits bits = 256;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const double tr = 0.2 + 1.7 * unit_interval(splitmix64(13, i));
        const auto spec = ModelSpec::hatano_nelson(120, 2.0, tr);
        const GaussianPacket p{60, 2.5, 0.3, 1};
        const auto s = make_transform(spec, bits);
        StateVector psi = gaussian_state(p, 120, bits);
        apply_inverse_transform(s, psi.amplitudes);
        const TransformedGaussian tg = transformed_gaussian(p, s.r.to_double());
        const StateVector ref = gaussian_state({tg.n0_shifted, p.sigma, p.k0, 1}, 120, bits);
        for (std::size_t n = 0; n < 120; ++n) {
            const double lhs = mp::log_abs(psi.amplitudes[n]);
            const double rhs = tg.log_C + mp::log_abs(ref.amplitudes[n]);
            worst_shift = std::max(worst_shift, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
        }
    }
    o.check(worst_shift <= 1e-13, fmt("S^-1 psi0 = C G(n - n0~): %.1e", worst_shift));
}

struct Criterion {
    const char* name;
    std::function<void(Outcome&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--skip-slow")) g_skip_slow = true;
        else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    const std::vector<Criterion> criteria{
        {"transform identity", transform_identity},
        {"bessel oracle", bessel_oracle},
        {"fig2 edge timestamps", fig2_timestamps},
        {"fig3 bulk gaussian", fig3_bulk},
        {"fig4 reflection jump", fig4_reflection},
        {"critical reflection width", critical_width},
        {"fig6 disorder transition", fig6_disorder},
        {"disorder perturbation law", perturbation_law},
        {"saddle-point accuracy", saddle_accuracy},
        {"ssh generalization", ssh_generalization},
        {"precision as disorder", precision_as_disorder},
        {"formula consistency", formula_consistency},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].fn(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("%s %2zu %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
