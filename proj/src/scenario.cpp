#include "nhwave/scenario.hpp"

#include "nhwave/io.hpp"

#include <yaml-cpp/yaml.h>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

namespace nhwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
using ojson = nlohmann::ordered_json;

// ---- scalar expressions --------------------------------------------------

class ExprParser {
  public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    double parse() {
        const double v = expr();
        skip();
        if (pos_ != s_.size()) fail();
        return v;
    }

  private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool eat_word(const char* w) {
        skip();
        const std::size_t n = std::char_traits<char>::length(w);
        if (s_.compare(pos_, n, w) == 0) {
            pos_ += n;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail() const { throw InvalidParameter("cannot evaluate '" + s_ + "'"); }

    double expr() {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    double term() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return primary();
    }
    double primary() {
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) fail();
            return v;
        }
        if (eat_word("pi")) return kPi;
        if (eat_word("sqrt")) {
            if (!eat('(')) fail();
            const double v = expr();
            if (!eat(')')) fail();
            return std::sqrt(v);
        }
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail();
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

// ---- YAML reading --------------------------------------------------------

int line_of(const YAML::Node& n) {
    const int l = n.Mark().line;
    return l >= 0 ? l + 1 : 0;
}

std::string where(const std::string& key, int line) {
    return line > 0 ? key + " (line " + std::to_string(line) + ")" : key;
}

class Reader {
  public:
    Reader(bool strict, std::vector<std::string>* warnings) : strict_(strict), warnings_(warnings) {}

    void check_keys(const YAML::Node& map, const std::string& section, std::initializer_list<const char*> allowed) {
        if (!map.IsMap()) throw ConfigError(where(section, line_of(map)) + ": expected a mapping", section, line_of(map));
        for (const auto& kv : map) {
            const std::string k = kv.first.as<std::string>();
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) != allowed.end())
                continue;
            const std::string full = section.empty() ? k : section + "." + k;
            const std::string msg = where(full, line_of(kv.first)) + ": unknown key";
            if (strict_) throw ConfigError(msg, full, line_of(kv.first));
            if (warnings_) warnings_->push_back(msg);
        }
    }

  private:
    bool strict_;
    std::vector<std::string>* warnings_;
};

[[noreturn]] void bad(const std::string& key, const YAML::Node& n, const std::string& what) {
    throw ConfigError(where(key, line_of(n)) + ": " + what, key, line_of(n));
}

std::string text(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) bad(key, n, "expected a scalar");
    return n.Scalar();
}

double number(const YAML::Node& n, const std::string& key) {
    try {
        return eval_scalar(text(n, key));
    } catch (const InvalidParameter& e) {
        bad(key, n, e.what());
    }
}

int integer(const YAML::Node& n, const std::string& key) {
    const double v = number(n, key);
    if (v != std::floor(v) || std::fabs(v) > 2e9) bad(key, n, "expected an integer");
    return static_cast<int>(v);
}

bool boolean(const YAML::Node& n, const std::string& key) {
    try {
        return n.as<bool>();
    } catch (const YAML::Exception&) {
        bad(key, n, "expected true or false");
    }
}

Decimal decimal(const YAML::Node& n, const std::string& key) {
    static const std::regex plain(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
    const std::string s = text(n, key);
    if (std::regex_match(s, plain)) return Decimal(s);
    return Decimal(number(n, key));
}

std::vector<double> number_list(const YAML::Node& n, const std::string& key) {
    std::vector<double> out;
    if (n.IsSequence()) {
        for (const auto& e : n) out.push_back(number(e, key));
    } else {
        out.push_back(number(n, key));
    }
    return out;
}

YAML::Node require(const YAML::Node& map, const std::string& section, const char* key) {
    const YAML::Node n = map[key];
    if (!n) bad(section.empty() ? std::string(key) : section + "." + key, map, "missing required key");
    return n;
}

Normalization normalization_of(const YAML::Node& n, const std::string& key) {
    const std::string s = text(n, key);
    if (s == "none") return Normalization::None;
    if (s == "max") return Normalization::Max;
    if (s == "l2") return Normalization::L2;
    if (s == "series-max") return Normalization::SeriesMax;
    bad(key, n, "expected none, max, l2 or series-max");
}

const std::set<std::string>& known_ops() {
    static const std::set<std::string> ops{"velocities",
                                           "edge_timestamps",
                                           "transformed_gaussian",
                                           "peak_expansion",
                                           "continuum",
                                           "reflection",
                                           "critical_sigma_reflection",
                                           "disorder",
                                           "critical_sigma_disorder",
                                           "critical_disorder",
                                           "localization_length",
                                           "ssh_velocity",
                                           "ssh_period",
                                           "saddle_peak"};
    return ops;
}

void parse_model(Reader& rd, const YAML::Node& m, ScenarioConfig& cfg, bool& seed_in_disorder) {
    rd.check_keys(m, "model", {"variant", "N", "a", "boundary", "t_l", "t_r", "t1", "t2", "gamma", "disorder"});
    ModelSpec& spec = cfg.model;
    const YAML::Node v = require(m, "model", "variant");
    const std::string variant = text(v, "model.variant");
    if (variant == "hatano-nelson" || variant == "hn") spec.variant = Variant::HatanoNelson;
    else if (variant == "nh-ssh" || variant == "ssh") spec.variant = Variant::NhSsh;
    else bad("model.variant", v, "expected hatano-nelson or nh-ssh");
    spec.N = integer(require(m, "model", "N"), "model.N");
    if (m["a"]) spec.a = number(m["a"], "model.a");
    if (m["boundary"]) {
        const std::string b = text(m["boundary"], "model.boundary");
        if (b == "obc" || b == "open") spec.boundary = Boundary::Open;
        else if (b == "pbc" || b == "periodic") spec.boundary = Boundary::Periodic;
        else bad("model.boundary", m["boundary"], "expected obc or pbc");
    }
    if (spec.variant == Variant::HatanoNelson) {
        spec.hn.t_l = decimal(require(m, "model", "t_l"), "model.t_l");
        spec.hn.t_r = decimal(require(m, "model", "t_r"), "model.t_r");
    } else {
        spec.ssh.t1 = decimal(require(m, "model", "t1"), "model.t1");
        spec.ssh.t2 = decimal(require(m, "model", "t2"), "model.t2");
        spec.ssh.gamma = decimal(require(m, "model", "gamma"), "model.gamma");
    }
    if (const YAML::Node d = m["disorder"]) {
        rd.check_keys(d, "model.disorder", {"w", "seed"});
        DisorderSpec ds;
        ds.w = number(require(d, "model.disorder", "w"), "model.disorder.w");
        if (d["seed"]) {
            ds.seed = static_cast<std::uint64_t>(integer(d["seed"], "model.disorder.seed"));
            seed_in_disorder = true;
        }
        spec.disorder = ds;
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        bad("model", m, e.what());
    }
}

void parse_initial(Reader& rd, const YAML::Node& n, ScenarioConfig& cfg) {
    rd.check_keys(n, "initial", {"kind", "site", "n0", "sigma", "k0", "sublattice", "normalize"});
    InitialSpec& in = cfg.initial;
    const YAML::Node k = require(n, "initial", "kind");
    const std::string kind = text(k, "initial.kind");
    if (kind == "delta") {
        in.kind = InitialKind::Delta;
        in.site = integer(require(n, "initial", "site"), "initial.site");
        if (in.site < 1 || in.site > cfg.model.dim())
            bad("initial.site", n["site"], "site must lie in 1.." + std::to_string(cfg.model.dim()));
    } else if (kind == "gaussian") {
        in.kind = InitialKind::Gaussian;
        in.n0 = number(require(n, "initial", "n0"), "initial.n0");
        in.sigmas = number_list(require(n, "initial", "sigma"), "initial.sigma");
        if (in.sigmas.empty()) bad("initial.sigma", n["sigma"], "empty list");
        if (n["k0"]) in.k0 = number(n["k0"], "initial.k0");
        for (double s : in.sigmas) {
            try {
                GaussianPacket{in.n0, s, in.k0, cfg.model.a}.validate();
            } catch (const Error& e) {
                bad("initial", n, e.what());
            }
        }
    } else {
        bad("initial.kind", k, "expected delta or gaussian");
    }
    if (n["sublattice"]) {
        const std::string s = text(n["sublattice"], "initial.sublattice");
        if (s == "A") in.on_b_sublattice = false;
        else if (s == "B") in.on_b_sublattice = true;
        else bad("initial.sublattice", n["sublattice"], "expected A or B");
    }
    if (n["normalize"]) {
        const std::string s = text(n["normalize"], "initial.normalize");
        if (s == "l2") in.l2_normalize = true;
        else if (s == "none") in.l2_normalize = false;
        else bad("initial.normalize", n["normalize"], "expected none or l2");
    }
}

void parse_evolution(Reader& rd, const YAML::Node& n, ScenarioConfig& cfg) {
    rd.check_keys(n, "evolution", {"backend", "precision_bits", "tolerance", "max_step", "tail_floor_log10", "times",
                                   "parallel"});
    EvolutionSection& ev = cfg.evolution;
    if (n["backend"]) {
        const std::string b = text(n["backend"], "evolution.backend");
        if (b == "auto") ev.backend.reset();
        else if (b == "spectral-transform" || b == "spectral") ev.backend = Backend::SpectralTransform;
        else if (b == "precision-stepper" || b == "stepper") ev.backend = Backend::PrecisionStepper;
        else bad("evolution.backend", n["backend"], "expected auto, spectral-transform or precision-stepper");
    }
    if (n["precision_bits"]) {
        ev.precision_bits = integer(n["precision_bits"], "evolution.precision_bits");
        if (ev.precision_bits < 53) bad("evolution.precision_bits", n["precision_bits"], "must be at least 53");
    }
    if (n["tolerance"]) ev.tolerance = number(n["tolerance"], "evolution.tolerance");
    if (n["max_step"]) ev.max_step = number(n["max_step"], "evolution.max_step");
    if (n["tail_floor_log10"]) ev.tail_floor_log10 = number(n["tail_floor_log10"], "evolution.tail_floor_log10");
    if (n["parallel"]) ev.parallel = boolean(n["parallel"], "evolution.parallel");

    const YAML::Node t = require(n, "evolution", "times");
    if (t.IsMap()) {
        rd.check_keys(t, "evolution.times", {"start", "stop", "step"});
        const double start = t["start"] ? number(t["start"], "evolution.times.start") : 0.0;
        const double stop = number(require(t, "evolution.times", "stop"), "evolution.times.stop");
        const double step = number(require(t, "evolution.times", "step"), "evolution.times.step");
        if (!(step > 0)) bad("evolution.times.step", t["step"], "must be positive");
        if (stop < start) bad("evolution.times.stop", t["stop"], "must not precede start");
        ev.times = time_grid(start, stop, step);
    } else if (t.IsSequence()) {
        ev.times = number_list(t, "evolution.times");
    } else {
        bad("evolution.times", t, "expected a list or {start, stop, step}");
    }
    if (ev.times.empty()) bad("evolution.times", t, "no output times");
    for (std::size_t i = 0; i < ev.times.size(); ++i) {
        if (!(ev.times[i] >= 0)) bad("evolution.times", t, "times must be non-negative");
        if (i > 0 && ev.times[i] <= ev.times[i - 1]) bad("evolution.times", t, "times must be strictly increasing");
    }
}

void parse_analysis(Reader& rd, const YAML::Node& n, ScenarioConfig& cfg) {
    rd.check_keys(n, "analysis",
                  {"ops", "edge_site", "x0", "wall_distance", "k_target", "critical_d", "localization_energy", "a0",
                   "threshold_log10", "min_jump_sites", "max_speed", "transitions", "edge_features", "period",
                   "period_min_separation", "edge_normalization", "edge_mean_from", "front_fit", "precision_check",
                   "precision_margin"});
    AnalysisSection& an = cfg.analysis;
    if (const YAML::Node ops = n["ops"]) {
        if (!ops.IsSequence()) bad("analysis.ops", ops, "expected a list");
        for (const auto& o : ops) {
            const std::string s = text(o, "analysis.ops");
            if (!known_ops().count(s)) bad("analysis.ops", o, "unknown analysis '" + s + "'");
            an.ops.push_back(s);
        }
    }
    if (n["edge_site"]) {
        an.edge_site = integer(n["edge_site"], "analysis.edge_site");
        if (an.edge_site < 1 || an.edge_site > cfg.model.dim()) bad("analysis.edge_site", n["edge_site"], "site out of range");
    }
    if (n["x0"]) an.x0 = number(n["x0"], "analysis.x0");
    if (n["wall_distance"]) an.wall_distance = number(n["wall_distance"], "analysis.wall_distance");
    if (n["k_target"]) an.k_target = number(n["k_target"], "analysis.k_target");
    if (n["critical_d"]) an.critical_d = number_list(n["critical_d"], "analysis.critical_d");
    if (n["localization_energy"]) an.localization_energy = number(n["localization_energy"], "analysis.localization_energy");
    if (n["a0"]) an.a0 = number(n["a0"], "analysis.a0");
    if (n["threshold_log10"]) an.threshold_log10 = number(n["threshold_log10"], "analysis.threshold_log10");
    if (n["min_jump_sites"]) an.min_jump_sites = integer(n["min_jump_sites"], "analysis.min_jump_sites");
    if (an.min_jump_sites < 3) bad("analysis.min_jump_sites", n["min_jump_sites"], "must be at least 3");
    if (n["max_speed"]) an.max_speed = number(n["max_speed"], "analysis.max_speed");
    if (n["transitions"]) an.transitions = boolean(n["transitions"], "analysis.transitions");
    if (n["edge_features"]) an.edge_features = boolean(n["edge_features"], "analysis.edge_features");
    if (n["period"]) an.period = boolean(n["period"], "analysis.period");
    if (n["period_min_separation"])
        an.period_min_separation = number(n["period_min_separation"], "analysis.period_min_separation");
    if (n["edge_normalization"]) an.edge_normalization = normalization_of(n["edge_normalization"], "analysis.edge_normalization");
    if (n["edge_mean_from"]) an.edge_mean_from = number(n["edge_mean_from"], "analysis.edge_mean_from");
    if (const YAML::Node f = n["front_fit"]) {
        const std::vector<double> w = number_list(f, "analysis.front_fit");
        if (w.size() != 2 || !(w[0] < w[1])) bad("analysis.front_fit", f, "expected [t_from, t_to]");
        an.front_fit = std::make_pair(w[0], w[1]);
    }
    if (n["precision_check"]) an.precision_check = boolean(n["precision_check"], "analysis.precision_check");
    if (n["precision_margin"]) an.precision_margin = number(n["precision_margin"], "analysis.precision_margin");
}

void parse_output(Reader& rd, const YAML::Node& n, ScenarioConfig& cfg) {
    rd.check_keys(n, "output", {"directory", "formats", "normalization"});
    OutputSection& out = cfg.output;
    if (n["directory"]) out.directory = text(n["directory"], "output.directory");
    if (const YAML::Node f = n["formats"]) {
        if (!f.IsSequence()) bad("output.formats", f, "expected a list");
        out.csv = out.json = false;
        for (const auto& e : f) {
            const std::string s = text(e, "output.formats");
            if (s == "csv") out.csv = true;
            else if (s == "json") out.json = true;
            else bad("output.formats", e, "expected csv or json");
        }
    }
    if (n["normalization"]) out.normalization = normalization_of(n["normalization"], "output.normalization");
}

// ---- running -------------------------------------------------------------

struct Member {
    std::string label;
    double sigma = 0.0;
    ModelSpec model;
};

struct MemberResult {
    ojson summary;
    std::optional<double> first_jump;
};

std::string sanitize(std::string s) {
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
    return s;
}

std::vector<Member> make_members(const ScenarioConfig& cfg) {
    std::vector<Member> out;
    const auto& sigmas = cfg.initial.sigmas;
    const bool sweep = cfg.initial.kind == InitialKind::Gaussian && sigmas.size() > 1;
    const bool disordered = !cfg.model.clean();
    const int R = disordered ? cfg.realizations : 1;
    const std::size_t S = cfg.initial.kind == InitialKind::Gaussian ? sigmas.size() : 1;
    for (std::size_t i = 0; i < S; ++i) {
        for (int r = 0; r < R; ++r) {
            Member m;
            m.sigma = cfg.initial.kind == InitialKind::Gaussian ? sigmas[i] : 0.0;
            m.model = cfg.model;
            std::string label = cfg.name;
            if (sweep) label += ".sigma-" + format_double(m.sigma);
            if (disordered) {
                m.model.disorder->seed = cfg.model.disorder->seed + static_cast<std::uint64_t>(r);
                if (R > 1) label += ".seed-" + std::to_string(m.model.disorder->seed);
            }
            m.label = sanitize(label);
            out.push_back(std::move(m));
        }
    }
    return out;
}

Backend resolve_backend(const ScenarioConfig& cfg) {
    if (cfg.evolution.backend) return *cfg.evolution.backend;
    return cfg.model.clean() && cfg.model.boundary == Boundary::Open ? Backend::SpectralTransform
                                                                     : Backend::PrecisionStepper;
}

EvolutionConfig evolution_config(const ScenarioConfig& cfg) {
    EvolutionConfig ec;
    ec.backend = resolve_backend(cfg);
    ec.precision_bits = cfg.evolution.precision_bits;
    ec.stepper_tolerance = cfg.evolution.tolerance;
    ec.max_step = cfg.evolution.max_step;
    ec.tail_floor_log10 = cfg.evolution.tail_floor_log10;
    ec.exec = cfg.evolution.parallel ? kernels::Exec::Parallel : kernels::Exec::Serial;
    return ec;
}

double default_max_speed(const ModelSpec& spec) {
    if (spec.variant == Variant::HatanoNelson)
        return spec.a * (std::fabs(spec.hn.t_l.value()) + std::fabs(spec.hn.t_r.value()));
    return spec.a * (std::fabs(spec.ssh.t1.value()) + std::fabs(spec.ssh.t2.value()) + std::fabs(spec.ssh.gamma.value()));
}

ojson event_json(const FrontEvent& e) {
    ojson j;
    j["time"] = e.time;
    j["site"] = e.site;
    j["kind"] = to_string(e.kind);
    if (std::isfinite(e.confidence)) j["confidence"] = e.confidence;
    else j["confidence"] = nullptr;
    return j;
}

MemberResult run_member(const ScenarioConfig& cfg, const Member& m, const std::filesystem::path& dir) {
    EvolutionConfig ec = evolution_config(cfg);
    ScenarioConfig local = cfg;
    local.model = m.model;
    const StateVector psi0 = initial_state(local, m.sigma, ec.precision_bits);
    Trajectory traj;
    if (ec.backend == Backend::SpectralTransform) {
        traj = evolve_via_transform(m.model, psi0, cfg.evolution.times, ec);
    } else {
        const Hamiltonian h = build_hamiltonian(m.model, ec.precision_bits);
        traj = evolve(h, psi0, cfg.evolution.times, ec);
    }
    traj.normalization = cfg.output.normalization;

    const AnalysisSection& an = cfg.analysis;
    MemberResult res;
    ojson& j = res.summary;
    j["label"] = m.label;
    if (cfg.initial.kind == InitialKind::Gaussian) j["sigma"] = m.sigma;
    if (m.model.disorder) j["seed"] = m.model.disorder->seed;
    if (cfg.output.csv) j["csv"] = m.label + ".csv";
    j["stats"] = {{"steps", traj.stats.steps}, {"rejected", traj.stats.rejected},
                  {"max_terms_used", traj.stats.max_terms_used}};

    std::vector<FrontEvent> events;
    const std::vector<PeakSample> trace = peak_trace(traj);
    if (an.transitions) {
        const double vmax = an.max_speed.value_or(default_max_speed(m.model));
        auto jumps = detect_transition(trace, an.min_jump_sites, vmax, m.model.a, &traj);
        if (!jumps.empty()) res.first_jump = jumps.front().time;
        events.insert(events.end(), jumps.begin(), jumps.end());
    }
    if (an.edge_features) {
        auto feats = detect_edge_features(traj, an.edge_site);
        events.insert(events.end(), feats.begin(), feats.end());
    }
    std::stable_sort(events.begin(), events.end(), [](const FrontEvent& a, const FrontEvent& b) { return a.time < b.time; });
    ojson ev = ojson::array();
    for (const auto& e : events) ev.push_back(event_json(e));
    j["events"] = ev;
    if (res.first_jump) j["first_transition"] = *res.first_jump;
    else j["first_transition"] = nullptr;

    ojson peaks = ojson::array();
    for (const auto& p : trace) peaks.push_back({p.t, p.site});
    j["peak_trace"] = peaks;

    if (an.period || an.edge_mean_from) {
        const auto series = edge_amplitude_series(traj, an.edge_site, an.edge_normalization);
        if (an.period) {
            try {
                j["edge_period"] = oscillation_period(series, an.period_min_separation);
            } catch (const InsufficientPeaks& e) {
                j["edge_period"] = nullptr;
                j["edge_period_error"] = e.what();
            }
        }
        if (an.edge_mean_from) {
            double sum = 0;
            int count = 0;
            for (const auto& [t, v] : series)
                if (t >= *an.edge_mean_from) {
                    sum += v;
                    ++count;
                }
            if (count > 0) j["edge_mean"] = sum / count;
            else j["edge_mean"] = nullptr;
        }
    }
    if (an.front_fit) {
        const auto fronts = front_position(traj, an.threshold_log10);
        std::vector<std::pair<double, double>> left, right;
        for (const auto& f : fronts) {
            left.emplace_back(f.t, f.left * m.model.a);
            right.emplace_back(f.t, f.right * m.model.a);
        }
        const LinearFit fl = linear_fit(left, an.front_fit->first, an.front_fit->second);
        const LinearFit fr = linear_fit(right, an.front_fit->first, an.front_fit->second);
        j["front_fit"] = {{"threshold_log10", an.threshold_log10},
                          {"t_from", an.front_fit->first},
                          {"t_to", an.front_fit->second},
                          {"left_velocity", fl.slope},
                          {"right_velocity", fr.slope}};
    }
    if (cfg.output.csv) write_trajectory_csv(traj, (dir / (m.label + ".csv")).string());
    return res;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + p.string() + " for writing");
    f << s << '\n';
    if (!f) throw std::ios_base::failure("write failed: " + p.string());
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

ojson precision_json(const PrecisionAssessment& pa, Bits bits) {
    ojson j;
    j["precision_bits"] = bits;
    j["applicable"] = pa.applicable;
    j["sufficient"] = pa.sufficient;
    if (pa.applicable) {
        j["minimum_bits"] = pa.minimum_bits;
        j["spurious_floor"] = pa.spurious_floor;
        j["physical_floor"] = pa.physical_floor;
    }
    return j;
}

ojson initial_json(const InitialSpec& in) {
    ojson j;
    if (in.kind == InitialKind::Delta) {
        j["kind"] = "delta";
        j["site"] = in.site;
    } else {
        j["kind"] = "gaussian";
        j["n0"] = in.n0;
        j["sigma"] = in.sigmas;
        j["k0"] = in.k0;
        j["sublattice"] = in.on_b_sublattice ? "B" : "A";
    }
    j["normalize"] = in.l2_normalize ? "l2" : "none";
    return j;
}

void apply_options(ScenarioConfig& cfg, const RunOptions& opt) {
    if (opt.precision_bits) cfg.evolution.precision_bits = *opt.precision_bits;
    if (opt.output_dir) cfg.output.directory = *opt.output_dir;
}

// ---- analytics -----------------------------------------------------------

ojson or_null(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

template <class F>
ojson guarded(F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        return ojson{{"error", e.what()}};
    } catch (const NoRootError& e) {
        return ojson{{"error", e.what()}};
    } catch (const Unsupported& e) {
        return ojson{{"error", e.what()}};
    } catch (const InvalidParameter& e) {
        return ojson{{"error", e.what()}};
    }
}

double wall_distance(const ScenarioConfig& cfg) {
    if (cfg.analysis.wall_distance) return *cfg.analysis.wall_distance;
    const double n0 = cfg.initial.kind == InitialKind::Gaussian ? cfg.initial.n0 : cfg.initial.site;
    return cfg.initial.k0 > 0 ? (cfg.model.N - n0) * cfg.model.a : n0 * cfg.model.a;
}

ojson saddle_peak(const GaussianPacket& p, const ModelSpec& spec, double t) {
    const int N = spec.N;
    double best_m = 1, best = -std::numeric_limits<double>::infinity();
    bool valid = true;
    const auto eval = [&](double m) {
        const SaddleAmplitude s = saddle_point_amplitude(p, spec, m, t);
        if (s.log_abs > best) {
            best = s.log_abs;
            best_m = m;
            valid = s.valid;
        }
    };
    for (int m = 1; m <= N; ++m) eval(m);
    const double c = best_m;
    for (double m = c - 1; m <= c + 1 + 1e-12; m += 0.01) eval(m);
    return {{"t", t}, {"site", best_m}, {"abs", std::exp(best)}, {"valid", valid}};
}

ojson analytics(const ScenarioConfig& cfg) {
    const ModelSpec& spec = cfg.model;
    const InitialSpec& in = cfg.initial;
    const AnalysisSection& an = cfg.analysis;
    const bool hn = spec.variant == Variant::HatanoNelson;
    const bool gauss = in.kind == InitialKind::Gaussian;

    std::vector<std::string> ops = an.ops;
    if (ops.empty()) {
        if (hn) {
            ops.push_back("velocities");
            if (!gauss) ops.push_back("edge_timestamps");
            if (gauss) {
                ops.insert(ops.end(), {"transformed_gaussian", "peak_expansion", "continuum", "reflection"});
                if (!spec.clean()) ops.insert(ops.end(), {"disorder", "critical_sigma_disorder"});
            }
        } else {
            ops.insert(ops.end(), {"ssh_velocity", "ssh_period"});
        }
    }

    const auto packet = [&](double sigma) { return GaussianPacket{in.n0, sigma, in.k0, spec.a}; };
    const auto per_sigma = [&](auto&& f) -> ojson {
        if (!gauss) return ojson{{"error", "requires a gaussian initial state"}};
        if (in.sigmas.size() == 1) return guarded([&] { return f(packet(in.sigmas.front())); });
        ojson arr = ojson::array();
        for (double s : in.sigmas) {
            ojson e = guarded([&] { return f(packet(s)); });
            ojson row{{"sigma", s}};
            row.update(e);
            arr.push_back(row);
        }
        return arr;
    };
    const double k_target = an.k_target.value_or(hn ? amplified_momentum(spec) : 0.0);
    const double w = spec.disorder ? spec.disorder->w : 0.0;

    ojson pred;
    for (const std::string& op : ops) {
        if (op == "velocities") {
            pred[op] = guarded([&] {
                const VelocityPair v = velocities(spec);
                return ojson{{"v_h", v.v_h}, {"v_nh", v.v_nh}};
            });
        } else if (op == "edge_timestamps") {
            pred[op] = guarded([&] {
                const double x0 = an.x0.value_or((gauss ? in.n0 : in.site) * spec.a);
                const EdgeTimestamps e = edge_timestamps(spec, x0);
                return ojson{{"x0", x0}, {"t1", e.t1}, {"t2", e.t2}, {"t3", e.t3}, {"t4", e.t4}};
            });
        } else if (op == "transformed_gaussian") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                const double r = std::sqrt(spec.hn.t_r.value() / spec.hn.t_l.value());
                const TransformedGaussian tg = transformed_gaussian(p, r);
                return ojson{{"r", r}, {"log_C", tg.log_C}, {"n0_shifted", tg.n0_shifted}};
            });
        } else if (op == "peak_expansion") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                const PeakExpansion pe = peak_expansion(p, spec, 3);
                return ojson{{"origin", pe.origin}, {"A", pe.A}, {"B", pe.B}, {"C", pe.C}};
            });
        } else if (op == "continuum") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                const ContinuumParams cp = continuum_params(spec, an.a0);
                return ojson{{"E0", cp.E0},
                             {"mass", cp.mass},
                             {"drift", cp.drift},
                             {"group_velocity", p.k0 / cp.mass},
                             {"acceleration_half", cp.drift / (2 * cp.mass * p.sigma * p.sigma)}};
            });
        } else if (op == "reflection") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                const ReflectionPrediction rp = reflection_prediction(p, spec, wall_distance(cfg), an.a0);
                return ojson{{"d", rp.d},
                             {"t_hit_continuum", rp.t_hit_continuum},
                             {"t_hit_lattice", rp.t_hit_lattice},
                             {"t_delta", rp.t_delta},
                             {"A", rp.A},
                             {"B", rp.B},
                             {"C", rp.C},
                             {"t_transition_cubic", or_null(rp.t_transition_cubic)}};
            });
        } else if (op == "critical_sigma_reflection") {
            std::vector<double> ds = an.critical_d;
            if (ds.empty()) ds.push_back(wall_distance(cfg));
            ojson arr = ojson::array();
            for (double d : ds) {
                ojson row{{"d", d}};
                row.update(guarded([&] { return ojson{{"sigma_c", critical_sigma_reflection(spec, d, in.k0, spec.a)}}; }));
                arr.push_back(row);
            }
            pred[op] = arr;
        } else if (op == "disorder") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                const DisorderPrediction dp = disorder_prediction(spec, p, k_target, w);
                return ojson{{"w", w},
                             {"k_target", k_target},
                             {"V_s", dp.V_s},
                             {"V_s_main_text", dp.V_s_main_text},
                             {"t_s", dp.t_s},
                             {"growth_rate", dp.growth_rate},
                             {"small_t_coefficient", dp.small_t_coefficient},
                             {"t_transition", or_null(dp.t_transition)}};
            });
        } else if (op == "critical_sigma_disorder") {
            pred[op] = guarded([&] {
                const GaussianPacket p = packet(in.sigmas.front());
                return ojson{{"w", w}, {"sigma_c", critical_sigma_disorder(spec, p, w, k_target)}};
            });
        } else if (op == "critical_disorder") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                return ojson{{"w_c", critical_disorder(spec, p, k_target)}};
            });
        } else if (op == "localization_length") {
            pred[op] = guarded([&] {
                return ojson{{"E", an.localization_energy},
                             {"w", w},
                             {"xi", localization_length(spec, an.localization_energy, w)}};
            });
        } else if (op == "ssh_velocity") {
            pred[op] = guarded([&] { return ojson{{"v_h", ssh_hermitian_velocity(spec)}}; });
        } else if (op == "ssh_period") {
            pred[op] = guarded([&] { return ojson{{"period", ssh_edge_period(spec)}}; });
        } else if (op == "saddle_peak") {
            pred[op] = per_sigma([&](const GaussianPacket& p) {
                ojson arr = ojson::array();
                for (double t : cfg.evolution.times) {
                    if (t == 0) continue;
                    arr.push_back(guarded([&] { return saddle_peak(p, spec, t); }));
                }
                return arr;
            });
        }
    }
    return pred;
}

}  // namespace

double eval_scalar(const std::string& s) { return ExprParser(s).parse(); }

ScenarioConfig parse_scenario(const std::string& text_in, bool strict, std::vector<std::string>* warnings) {
    YAML::Node root;
    try {
        root = YAML::Load(text_in);
    } catch (const YAML::Exception& e) {
        const int line = e.mark.line >= 0 ? e.mark.line + 1 : 0;
        throw ConfigError(where("yaml", line) + ": " + e.msg, "", line);
    }
    if (!root.IsMap()) throw ConfigError("scenario must be a YAML mapping", "", 0);
    Reader rd(strict, warnings);
    rd.check_keys(root, "", {"name", "seed", "model", "initial", "evolution", "analysis", "ensemble", "output"});

    ScenarioConfig cfg;
    if (root["name"]) cfg.name = text(root["name"], "name");
    if (root["seed"]) {
        const int s = integer(root["seed"], "seed");
        if (s < 0) bad("seed", root["seed"], "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    bool seed_in_disorder = false;
    parse_model(rd, require(root, "", "model"), cfg, seed_in_disorder);
    if (cfg.model.disorder && !seed_in_disorder) cfg.model.disorder->seed = cfg.seed;
    parse_initial(rd, require(root, "", "initial"), cfg);
    parse_evolution(rd, require(root, "", "evolution"), cfg);
    if (root["analysis"]) parse_analysis(rd, root["analysis"], cfg);
    if (const YAML::Node e = root["ensemble"]) {
        rd.check_keys(e, "ensemble", {"realizations"});
        if (e["realizations"]) {
            cfg.realizations = integer(e["realizations"], "ensemble.realizations");
            if (cfg.realizations < 1) bad("ensemble.realizations", e["realizations"], "must be at least 1");
        }
    }
    if (root["output"]) parse_output(rd, root["output"], cfg);
    if (cfg.evolution.backend == Backend::SpectralTransform &&
        (!cfg.model.clean() || cfg.model.boundary != Boundary::Open))
        bad("evolution.backend", root["evolution"]["backend"],
            "spectral-transform requires a clean open chain; use precision-stepper");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path, bool strict, std::vector<std::string>* warnings) {
    std::ifstream f(path);
    if (!f) throw std::ios_base::failure("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str(), strict, warnings);
}

double amplified_momentum(const ModelSpec& spec) {
    const double tl = std::fabs(spec.hn.t_l.value());
    const double tr = std::fabs(spec.hn.t_r.value());
    return (tl >= tr ? -0.5 : 0.5) * kPi / spec.a;
}

PrecisionAssessment assess_precision(const ScenarioConfig& cfg, Bits bits) {
    PrecisionAssessment pa;
    const ModelSpec& spec = cfg.model;
    if (spec.variant != Variant::HatanoNelson || cfg.initial.kind != InitialKind::Gaussian) return pa;
    if (spec.hn.t_l.value() == spec.hn.t_r.value()) return pa;
    const double k = amplified_momentum(spec);
    const double hop = std::fabs(spec.hn.t_l.value()) + std::fabs(spec.hn.t_r.value());
    const double margin = cfg.analysis.precision_margin;
    try {
        Bits worst = 0;
        double spurious = 0, physical = 0;
        bool sufficient = true;
        for (double sigma : cfg.initial.sigmas) {
            const GaussianPacket p{cfg.initial.n0, sigma, cfg.initial.k0, spec.a};
            double phys = gaussian_momentum_weight(spec, p, k);
            if (!spec.clean()) phys = std::max(phys, disorder_prediction(spec, p, k, spec.disorder->w).V_s);
            const auto floor_at = [&](Bits b) {
                return disorder_prediction(spec, p, k, std::ldexp(hop, -static_cast<int>(b))).V_s;
            };
            Bits need = mp::kDoubleBits;
            while (floor_at(need) * margin >= phys && need < 65536) ++need;
            if (need > worst) {
                worst = need;
                spurious = floor_at(bits);
                physical = phys;
            }
            if (floor_at(bits) * margin >= phys) sufficient = false;
        }
        pa.applicable = true;
        pa.sufficient = sufficient;
        pa.minimum_bits = worst;
        pa.spurious_floor = spurious;
        pa.physical_floor = physical;
    } catch (const DomainError&) {
        // carrier already at the amplified momentum: nothing to seed
    }
    return pa;
}

StateVector initial_state(const ScenarioConfig& cfg, double sigma, Bits bits) {
    const ModelSpec& spec = cfg.model;
    const InitialSpec& in = cfg.initial;
    StateVector psi;
    if (in.kind == InitialKind::Delta) {
        psi = delta_state(in.site, spec.dim(), bits);
    } else if (spec.variant == Variant::HatanoNelson) {
        psi = gaussian_state({in.n0, sigma, in.k0, spec.a}, spec.N, bits);
    } else {
        const StateVector cells = gaussian_state({in.n0, sigma, in.k0, spec.a}, spec.N, bits);
        psi.amplitudes = kernels::zeros(static_cast<std::size_t>(spec.dim()), bits);
        const std::size_t off = in.on_b_sublattice ? 1 : 0;
        for (std::size_t n = 0; n < cells.size(); ++n) psi.amplitudes[2 * n + off] = cells.amplitudes[n];
    }
    if (in.l2_normalize) psi = l2_normalized(std::move(psi));
    return psi;
}

std::string predict_json(const ScenarioConfig& cfg) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["code_version"] = kCodeVersion;
    j["scenario"] = cfg.name;
    j["model"] = ojson::parse(model_json(cfg.model));
    j["initial"] = initial_json(cfg.initial);
    j["predictions"] = analytics(cfg);
    const PrecisionAssessment pa = assess_precision(cfg, cfg.evolution.precision_bits);
    if (pa.applicable) j["precision"] = precision_json(pa, cfg.evolution.precision_bits);
    return j.dump(2);
}

int predict(ScenarioConfig cfg, const RunOptions& opt, std::ostream& out, std::ostream& log) {
    apply_options(cfg, opt);
    std::string doc;
    try {
        doc = predict_json(cfg);
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
    out << doc << '\n';
    try {
        const std::filesystem::path dir(cfg.output.directory);
        std::filesystem::create_directories(dir);
        write_text(dir / (sanitize(cfg.name) + ".analytics.json"), doc);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

int run_scenario(ScenarioConfig cfg, const RunOptions& opt, std::ostream& log) {
    apply_options(cfg, opt);
    const auto started = std::chrono::steady_clock::now();
    const std::string started_utc = utc_now();
    const Bits bits = cfg.evolution.precision_bits;

    const PrecisionAssessment pa = assess_precision(cfg, bits);
    if (cfg.analysis.precision_check && pa.applicable && !pa.sufficient) {
        log << "error: " << bits << "-bit arithmetic seeds the amplified momentum at about "
            << pa.spurious_floor << ", above the physical seed " << pa.physical_floor
            << " / margin. The long-time dynamics would be precision artifacts.\n"
            << "hint: rerun with --precision-bits " << pa.minimum_bits << " or higher\n";
        return 2;
    }

    const std::filesystem::path dir(cfg.output.directory);
    try {
        std::filesystem::create_directories(dir);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 3;
    }

    std::string analytics_doc;
    try {
        analytics_doc = predict_json(cfg);
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }

    const std::vector<Member> members = make_members(cfg);
    std::vector<MemberResult> results(members.size());
    std::vector<std::exception_ptr> errors(members.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < members.size(); i = next++) {
            try {
                results[i] = run_member(cfg, members[i], dir);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int jobs = std::clamp(opt.jobs, 1, static_cast<int>(members.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const PrecisionError& e) {
            log << "error: " << members[i].label << ": " << e.what() << '\n'
                << "hint: rerun with --precision-bits " << e.suggested_bits() << " or higher\n";
            return 2;
        } catch (const std::ios_base::failure& e) {
            log << "error: " << e.what() << '\n';
            return 3;
        } catch (const InvalidParameter& e) {
            log << "error: " << members[i].label << ": " << e.what() << '\n';
            return 1;
        } catch (const DimensionError& e) {
            log << "error: " << members[i].label << ": " << e.what() << '\n';
            return 1;
        } catch (const Unsupported& e) {
            log << "error: " << members[i].label << ": " << e.what() << '\n';
            return 1;
        } catch (const std::exception& e) {
            log << "error: " << members[i].label << ": " << e.what() << '\n';
            return 2;
        }
    }

    ojson events;
    events["schema_version"] = kSchemaVersion;
    events["scenario"] = cfg.name;
    ojson mem = ojson::array();
    std::vector<double> firsts;
    for (const auto& r : results) {
        mem.push_back(r.summary);
        if (r.first_jump) firsts.push_back(*r.first_jump);
    }
    events["members"] = mem;
    ojson summary;
    summary["members"] = members.size();
    summary["members_with_transition"] = firsts.size();
    if (!firsts.empty()) {
        double s = 0;
        for (double f : firsts) s += f;
        summary["mean_first_transition"] = s / firsts.size();
    } else {
        summary["mean_first_transition"] = nullptr;
    }
    events["summary"] = summary;

    const EvolutionConfig ec = evolution_config(cfg);
    ojson meta;
    meta["schema_version"] = kSchemaVersion;
    meta["code_version"] = kCodeVersion;
    meta["scenario"] = cfg.name;
    meta["seed"] = cfg.seed;
    meta["model"] = ojson::parse(model_json(cfg.model));
    meta["initial"] = initial_json(cfg.initial);
    meta["evolution"] = ojson::parse(config_json(ec));
    meta["times"] = {{"count", cfg.evolution.times.size()},
                     {"first", cfg.evolution.times.front()},
                     {"last", cfg.evolution.times.back()}};
    meta["output_normalization"] = to_string(cfg.output.normalization);
    meta["precision"] = precision_json(pa, bits);
    ojson files = ojson::array();
    for (const auto& m : members)
        if (cfg.output.csv) files.push_back(m.label + ".csv");
    meta["trajectories"] = files;
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    meta["timestamp"] = {{"started_utc", started_utc}, {"runtime_seconds", runtime}};

    try {
        const std::string base = sanitize(cfg.name);
        if (cfg.output.json) {
            write_text(dir / (base + ".meta.json"), meta.dump(2));
            write_text(dir / (base + ".analytics.json"), analytics_doc);
            write_text(dir / (base + ".events.json"), events.dump(2));
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 3;
    }
    log << cfg.name << ": " << members.size() << " run(s), " << runtime << " s, output in " << dir.string() << '\n';
    return 0;
}

}  // namespace nhwave
