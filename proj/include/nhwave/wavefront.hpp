#pragma once

// Observables extracted from trajectories: peak traces, light-cone fronts,
// velocity fits, jump detection, edge-series features and oscillation periods.
// All detection works on log10 |psi|^2.

#include "nhwave/errors.hpp"
#include "nhwave/evolution.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nhwave {

struct PeakSample {
    double t = 0.0;
    int site = 1;             ///< 1-based argmax of |psi|^2
    double log10_abs2 = 0.0;
};

struct FrontSample {
    double t = 0.0;
    int left = 1;
    int right = 1;
};

enum class FrontKind { NhFrontArrival, HermitianFrontArrival, ReflectionOnset, TransitionJump };
std::string to_string(FrontKind k);

struct FrontEvent {
    double time = 0.0;
    int site = 1;
    FrontKind kind = FrontKind::TransitionJump;
    double confidence = 0.0;  ///< detection margin, log10 units
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Per-snapshot argmax; ties go to the smaller site.
std::vector<PeakSample> peak_trace(const Trajectory& traj);

/// The trajectory seen in the Hermitian frame S^-1 psi: log10 |psi_n|^2 - 2 log10 s_n.
/// Phases are unchanged (s_n > 0). Clean open chains only.
Trajectory hermitian_frame(const Trajectory& traj);

/// Outermost sites with log10(|psi|^2 / max) >= threshold_log10 (< 0).
std::vector<FrontSample> front_position(const Trajectory& traj, double threshold_log10);

/// Least-squares line through (x, y) pairs with x in [x_lo, x_hi].
LinearFit linear_fit(const std::vector<std::pair<double, double>>& xy, double x_lo, double x_hi);

/// Peak displacements between consecutive samples that exceed
/// max_speed * dt / a by more than min_jump_sites. With a trajectory the
/// confidence is log10 |psi_new|^2 - log10 |psi_old site|^2 at the later time.
std::vector<FrontEvent> detect_transition(const std::vector<PeakSample>& trace, int min_jump_sites, double max_speed,
                                          double a = 1.0, const Trajectory* traj = nullptr);

struct EdgeFeatureOptions {
    double rise_log10 = 0.5;    ///< local-max rise over the recent envelope that marks a new front
    double window = 10.0;       ///< envelope look-back and refractory time
    double half_level = 0.30103;  ///< onset is where the series first reaches peak - half_level
};

/// Edge-series features of one site:
///  * NhFrontArrival: the site first becomes the global peak;
///  * HermitianFrontArrival / ReflectionOnset: onsets of the first and later
///    rises of the raw log series above its recent local-max envelope.
std::vector<FrontEvent> detect_edge_features(const Trajectory& traj, int site, const EdgeFeatureOptions& opt = {});

class InsufficientPeaks : public Error {
  public:
    using Error::Error;
};

/// Mean spacing of local maxima whose prominence is at least 10% of the series
/// max. Peaks closer than min_separation to a higher kept peak are dropped.
double oscillation_period(const std::vector<std::pair<double, double>>& series, double min_separation = 0.0);

}  // namespace nhwave
