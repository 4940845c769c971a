#pragma once

// Closed-form predictions for the Hatano-Nelson and non-Hermitian SSH chains:
// front velocities, the transformed Gaussian, saddle-point amplitudes, peak
// expansions, the continuum limit, reflection and disorder transition times,
// critical widths, localization length and edge timestamps.

#include "nhwave/evolution.hpp"
#include "nhwave/lattice.hpp"

#include <complex>
#include <optional>

namespace nhwave {

struct VelocityPair {
    double v_h = 0.0;   ///< 2a sqrt(t_l t_r)
    double v_nh = 0.0;  ///< signed drift of the most amplified momentum
};

struct TransformedGaussian {
    double log_C = 0.0;       ///< ln of the prefactor of S^-1 psi0 relative to a Gaussian at n0_shifted
    double n0_shifted = 0.0;  ///< n0 - 2 (sigma/a)^2 ln r
};

struct ContinuumParams {
    double E0 = 0.0;
    double mass = 0.0;
    double drift = 0.0;  ///< b
    double a0 = 1.0;
    double t_l0 = 1.0;
    double t_r0 = 1.0;
};

/// Delta m_max(t) = A t + B t^2 + C t^3, measured from origin (= n0_shifted).
struct PeakExpansion {
    double origin = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    int order = 3;

    double operator()(double t) const { return origin + t * (A + t * (B + t * C)); }
};

struct ReflectionPrediction {
    double d = 0.0;
    double t_hit_continuum = 0.0;
    double t_hit_lattice = 0.0;
    double t_delta = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    /// Root of A t + C t^3 = d/a below the cubic's turning point, if any.
    std::optional<double> t_transition_cubic;
};

struct DisorderPrediction {
    double V_s = 0.0;            ///< saturation value, 4 (w^2/3)/N / (Re dE)^2
    double V_s_main_text = 0.0;  ///< same without the factor 4
    double t_s = 0.0;            ///< pi / |Re dE|
    double growth_rate = 0.0;    ///< 2 Im E at the target momentum
    double small_t_coefficient = 0.0;  ///< w^2/(3N): slope of the t^2 law
    std::optional<double> t_transition;
};

struct EdgeTimestamps {
    double t1 = 0.0;  ///< x0 / |v_nh|
    double t2 = 0.0;  ///< x0 / v_h
    double t3 = 0.0;  ///< (2Na - x0) / v_h
    double t4 = 0.0;  ///< (4Na - x0) / v_h
};

enum class SaddleBranch { InsideCone, OutsideCone, ConeBoundary };

/// Hermitian lattice amplitude in log-polar form; `valid` is false within the
/// two-site band around the light cone where neither asymptotic form holds.
struct SaddleAmplitude {
    double log_abs = 0.0;
    double phase = 0.0;
    SaddleBranch branch = SaddleBranch::InsideCone;
    bool valid = true;

    std::complex<double> value() const { return std::polar(std::exp(log_abs), phase); }
};

VelocityPair velocities(const ModelSpec& spec);
double ssh_hermitian_velocity(const ModelSpec& spec);

TransformedGaussian transformed_gaussian(const GaussianPacket& p, double r);

/// Amplitude at site m of the packet p evolved for time t under the uniform
/// Hermitian chain with hopping t0 = sqrt(t_l t_r) of spec.
SaddleAmplitude saddle_point_amplitude(const GaussianPacket& p, const ModelSpec& spec, double m, double t);

/// log |psi_m(t)| of the non-Hermitian packet: ln C + m ln r + the Hermitian
/// stationary-phase amplitude of the shifted Gaussian.
double nh_gaussian_approximation(const GaussianPacket& p, const ModelSpec& spec, double m, double t);

PeakExpansion peak_expansion(const GaussianPacket& p, const ModelSpec& spec, int order);

ContinuumParams continuum_params(const ModelSpec& spec, double a0);
/// x_max(t) = x0 + (k0/m) t + (b/(m sigma^2)) t^2/2 with x0 = a n0.
double continuum_peak(const ContinuumParams& cp, const GaussianPacket& p, double t);

ReflectionPrediction reflection_prediction(const GaussianPacket& p, const ModelSpec& spec, double d, double a0);
/// Same as the cubic root of reflection_prediction, but throws NoRootError.
double solve_reflection_cubic(const ReflectionPrediction& rp, double a);

/// Smallest sigma for which the image packet of a wall at distance d
/// overtakes the incident packet; absolute tolerance 0.05 or better.
double critical_sigma_reflection(const ModelSpec& spec, double d, double k0, double a = 1.0);

/// Bloch energy E_k of the clean periodic chain, basis |k> = sum_n e^{-ikn}|n>.
std::complex<double> bloch_energy(const ModelSpec& spec, double k);

DisorderPrediction disorder_prediction(const ModelSpec& spec, const GaussianPacket& p, double k_target, double w);

/// |c_k|^2 of the Gaussian at the target momentum: sqrt(8 pi sigma^2/N^2) e^{-2 sigma^2 (k0-k)^2}.
double gaussian_momentum_weight(const ModelSpec& spec, const GaussianPacket& p, double k_target);
/// sigma on the decreasing branch where gaussian_momentum_weight equals V_s;
/// 0 when V_s exceeds the weight for every sigma.
double critical_sigma_disorder(const ModelSpec& spec, const GaussianPacket& p, double w, double k_target);
/// Disorder strength at which V_s equals gaussian_momentum_weight.
double critical_disorder(const ModelSpec& spec, const GaussianPacket& p, double k_target);

double localization_length(const ModelSpec& spec, double E, double w);

EdgeTimestamps edge_timestamps(const ModelSpec& spec, double x0);
/// Edge oscillation period 2 L / v_h of the SSH chain, L = 2 N a (site count times a).
double ssh_edge_period(const ModelSpec& spec);

/// Bisection to relative tolerance rel_tol on a sign-changing bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-9);

}  // namespace nhwave

#include "nhwave/detail/bisect.hpp"
