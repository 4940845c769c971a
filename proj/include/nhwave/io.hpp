#pragma once

// Trajectory serialization: one CSV row per (snapshot, site) and a JSON
// metadata sidecar. Numbers are written in shortest round-trip form so that
// identical runs produce byte-identical files.

#include "nhwave/evolution.hpp"

#include <iosfwd>
#include <string>

namespace nhwave {

inline constexpr const char* kSchemaVersion = "nhwave/1";
inline constexpr const char* kCodeVersion = "1.0.0";

/// Shortest decimal that round-trips; "inf", "-inf", "nan" otherwise.
std::string format_double(double v);

/// Columns: t, site, log10_abs2, re_phase, im_phase_or_blank, normalized_abs2.
/// re_phase/im_phase are cos/sin of arg psi; im_phase is blank where psi = 0.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// JSON text of the model / evolution config (stable key order).
std::string model_json(const ModelSpec& spec);
std::string config_json(const EvolutionConfig& cfg);

}  // namespace nhwave
