#pragma once

// Time evolution psi(t) = exp(-iHt) psi0 at configurable precision.
//
// Two independent backends:
//  * PrecisionStepper: scaled Taylor series on the banded matrix, step size
//    controlled by comparing one full step with two half steps.
//  * SpectralTransform: diagonalize the Hermitian counterpart H' and map back
//    through the diagonal similarity transform (clean open chains only).

#include "nhwave/kernels.hpp"
#include "nhwave/lattice.hpp"
#include "nhwave/similarity.hpp"

#include <utility>
#include <vector>

namespace nhwave {

struct StateVector {
    std::vector<mp::Complex> amplitudes;
    double time = 0.0;

    std::size_t size() const noexcept { return amplitudes.size(); }
    Bits bits() const noexcept { return amplitudes.empty() ? mp::kDoubleBits : amplitudes.front().bits(); }
    /// Copy at a different precision (rounded).
    StateVector at_bits(Bits bits) const;
    /// Sum of |psi_n|^2.
    mp::Real norm2() const;
};

struct GaussianPacket {
    double n0 = 1.0;
    double sigma = 1.0;
    double k0 = 0.0;
    double a = 1.0;

    void validate() const;
};

/// (4 pi sigma^2)^(-1/2) exp(-a^2 (n-n0)^2 / (4 sigma^2) - i k0 a n), n = 1..dim.
/// The carrier sign makes k0 > 0 move toward larger n at speed 2 t0 sin(k0 a).
StateVector gaussian_state(const GaussianPacket& p, int dim, Bits bits);
/// Unit amplitude at site n0 (1-based).
StateVector delta_state(int n0, int dim, Bits bits);
/// psi / ||psi||_2
StateVector l2_normalized(StateVector psi);

enum class Backend { SpectralTransform, PrecisionStepper };
enum class Normalization { None, Max, L2, SeriesMax };

std::string to_string(Backend b);
std::string to_string(Normalization n);

struct EvolutionConfig {
    Backend backend = Backend::PrecisionStepper;
    Bits precision_bits = 212;
    /// Accepted per-entry relative deviation between full and doubled steps;
    /// 0 selects 2^(24 - precision_bits).
    double stepper_tolerance = 0.0;
    double max_step = 0.5;
    /// Entries smaller than 10^floor times the largest are judged on an absolute scale.
    double tail_floor_log10 = -300.0;
    int max_terms = 4000;
    bool keep_states = false;
    kernels::Exec exec = kernels::Exec::Serial;

    double effective_tolerance() const;
    void validate() const;
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> log10_abs2;  ///< -inf where psi_n = 0
    std::vector<double> phase;       ///< arg psi_n in (-pi, pi]
};

struct EvolutionStats {
    long steps = 0;
    long rejected = 0;
    int max_terms_used = 0;
    double smallest_step = 0.0;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<StateVector> states;  ///< full-precision states when keep_states
    Normalization normalization = Normalization::None;
    ModelSpec model;
    EvolutionConfig config;
    EvolutionStats stats;

    std::size_t dim() const noexcept { return snapshots.empty() ? 0 : snapshots.front().log10_abs2.size(); }
    std::vector<double> times() const;
    /// |psi_n|^2 of snapshot k under `mode` (the trajectory's own mode by default).
    std::vector<double> normalized_abs2(std::size_t k) const { return normalized_abs2(k, normalization); }
    std::vector<double> normalized_abs2(std::size_t k, Normalization mode) const;
};

Snapshot make_snapshot(const StateVector& psi);

class PrecisionStepper {
  public:
    PrecisionStepper(const Hamiltonian& h, const EvolutionConfig& cfg);

    /// psi <- exp(-iH dt) psi, subdivided adaptively.
    void advance(std::vector<mp::Complex>& psi, double dt);
    /// One unchecked Taylor step: out = exp(-iH h) in.
    int taylor_step(const std::vector<mp::Complex>& in, double h, std::vector<mp::Complex>& out);
    const EvolutionStats& stats() const noexcept { return stats_; }

  private:
    double step_error(const std::vector<mp::Complex>& full, const std::vector<mp::Complex>& half, long floor_exp) const;
    long floor_exponent(const std::vector<mp::Complex>& psi) const;

    const Hamiltonian& h_;
    EvolutionConfig cfg_;
    Bits bits_;
    double tol_;
    double row_norm_;
    double h_next_;
    std::vector<mp::Complex> term_, next_, full_, mid_, half_;
    mp::Real coef_;
    EvolutionStats stats_;
};

/// Evolve with the backend selected in cfg (SpectralTransform delegates to
/// evolve_via_transform using h.model).
Trajectory evolve(const Hamiltonian& h, const StateVector& psi0, const std::vector<double>& times,
                  const EvolutionConfig& cfg);

Trajectory evolve_via_transform(const ModelSpec& spec, const StateVector& psi0, const std::vector<double>& times,
                                const EvolutionConfig& cfg);

/// (t, |psi_site|^2) for a 1-based site. SeriesMax divides by the series maximum;
/// Max divides by each snapshot's maximum.
std::vector<std::pair<double, double>> edge_amplitude_series(const Trajectory& traj, int site,
                                                             Normalization mode);

/// Evenly spaced times start, start+step, ..., up to stop inclusive.
std::vector<double> time_grid(double start, double stop, double step);

}  // namespace nhwave
