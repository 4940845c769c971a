#pragma once

// Scenario files: a YAML document with sections model / initial / evolution /
// analysis / ensemble / output, plus the named figure presets. run_scenario
// evolves every member (disorder seeds x widths) and writes trajectory CSV,
// metadata, analytics and event JSON; predict writes analytics only.

#include "nhwave/analytics.hpp"
#include "nhwave/errors.hpp"
#include "nhwave/evolution.hpp"
#include "nhwave/wavefront.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nhwave {

/// Invalid scenario text; carries the offending key and 1-based line (0 if unknown).
class ConfigError : public Error {
  public:
    ConfigError(const std::string& what, std::string key, int line)
        : Error(what), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

  private:
    std::string key_;
    int line_;
};

enum class InitialKind { Delta, Gaussian };

struct InitialSpec {
    InitialKind kind = InitialKind::Delta;
    int site = 1;                  ///< delta: 1-based matrix index
    double n0 = 1.0;               ///< gaussian center (site, or cell for SSH)
    std::vector<double> sigmas{1.0};  ///< one run per width
    double k0 = 0.0;
    bool on_b_sublattice = false;  ///< SSH gaussian placement
    bool l2_normalize = false;
};

struct EvolutionSection {
    std::optional<Backend> backend;  ///< empty: spectral for clean open chains, stepper otherwise
    Bits precision_bits = 212;
    double tolerance = 0.0;
    double max_step = 0.5;
    double tail_floor_log10 = -300.0;
    std::vector<double> times;
    bool parallel = false;
};

struct AnalysisSection {
    std::vector<std::string> ops;
    int edge_site = 1;
    std::optional<double> x0;
    std::optional<double> wall_distance;
    std::optional<double> k_target;
    std::vector<double> critical_d;
    double localization_energy = 0.0;
    double a0 = 1.0;
    double threshold_log10 = -10.0;
    int min_jump_sites = 5;
    std::optional<double> max_speed;
    bool transitions = true;
    bool edge_features = false;
    bool period = false;
    double period_min_separation = 0.0;
    Normalization edge_normalization = Normalization::Max;
    std::optional<double> edge_mean_from;
    std::optional<std::pair<double, double>> front_fit;
    bool precision_check = true;
    double precision_margin = 1e3;
};

struct OutputSection {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    Normalization normalization = Normalization::Max;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ModelSpec model;
    InitialSpec initial;
    EvolutionSection evolution;
    AnalysisSection analysis;
    int realizations = 1;
    OutputSection output;
    std::uint64_t seed = 0;
};

/// Parses YAML text. Unknown keys raise ConfigError when strict, otherwise
/// they are appended to warnings.
ScenarioConfig parse_scenario(const std::string& text, bool strict = false, std::vector<std::string>* warnings = nullptr);
ScenarioConfig load_scenario(const std::string& path, bool strict = false, std::vector<std::string>* warnings = nullptr);

/// Evaluates a scalar such as "0.25", "pi/4", "-pi/2" or "sqrt(3)".
double eval_scalar(const std::string& text);

struct PresetInfo {
    std::string name;
    std::string description;
    std::string yaml;
};

const std::vector<PresetInfo>& list_presets();
const PresetInfo* find_preset(const std::string& name);

struct PrecisionAssessment {
    bool applicable = false;
    bool sufficient = true;
    Bits minimum_bits = 0;
    double spurious_floor = 0.0;   ///< saturation value of rounding-level disorder
    double physical_floor = 0.0;   ///< |c_k|^2 of the packet or the real disorder plateau
};

/// Rounding at `bits` acts like on-site disorder of strength 2^-bits (|t_l| + |t_r|).
/// Its saturation value at the most amplified momentum must stay below the
/// physical seed of that momentum by `margin`. Delta initial states are exempt.
PrecisionAssessment assess_precision(const ScenarioConfig& cfg, Bits bits);

struct RunOptions {
    std::optional<Bits> precision_bits;
    int jobs = 1;
    std::optional<std::string> output_dir;
};

/// Analytics JSON (pretty-printed) for the scenario.
std::string predict_json(const ScenarioConfig& cfg);

/// Exit codes: 0 ok, 1 invalid configuration, 2 numeric failure, 3 I/O.
int run_scenario(ScenarioConfig cfg, const RunOptions& opt, std::ostream& log);
int predict(ScenarioConfig cfg, const RunOptions& opt, std::ostream& out, std::ostream& log);

/// Initial state of the scenario for one width.
StateVector initial_state(const ScenarioConfig& cfg, double sigma, Bits bits);
/// Most amplified Bloch momentum of an HN chain (-pi/2 for t_l > t_r).
double amplified_momentum(const ModelSpec& spec);

}  // namespace nhwave
