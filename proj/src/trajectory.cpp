#include "nhwave/io.hpp"

#include "nhwave/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace nhwave {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,site,log10_abs2,re_phase,im_phase_or_blank,normalized_abs2\n";
    std::string line;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const Snapshot& s = traj.snapshots[k];
        const std::vector<double> norm = traj.normalized_abs2(k);
        const std::string t = format_double(s.t);
        for (std::size_t i = 0; i < s.log10_abs2.size(); ++i) {
            const bool zero = std::isinf(s.log10_abs2[i]) && s.log10_abs2[i] < 0;
            line.clear();
            line += t;
            line += ',';
            line += std::to_string(i + 1);
            line += ',';
            line += format_double(s.log10_abs2[i]);
            line += ',';
            line += format_double(zero ? 1.0 : std::cos(s.phase[i]));
            line += ',';
            if (!zero) line += format_double(std::sin(s.phase[i]));
            line += ',';
            line += format_double(norm[i]);
            line += '\n';
            os << line;
        }
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
    write_trajectory_csv(traj, f);
    if (!f) throw std::ios_base::failure("write failed: " + path);
}

std::string model_json(const ModelSpec& spec) {
    nlohmann::ordered_json j;
    j["variant"] = to_string(spec.variant);
    j["N"] = spec.N;
    j["a"] = spec.a;
    j["boundary"] = to_string(spec.boundary);
    if (spec.variant == Variant::HatanoNelson) {
        j["t_l"] = spec.hn.t_l.text();
        j["t_r"] = spec.hn.t_r.text();
    } else {
        j["t1"] = spec.ssh.t1.text();
        j["t2"] = spec.ssh.t2.text();
        j["gamma"] = spec.ssh.gamma.text();
    }
    if (spec.disorder) j["disorder"] = {{"w", spec.disorder->w}, {"seed", spec.disorder->seed}};
    return j.dump();
}

std::string config_json(const EvolutionConfig& cfg) {
    nlohmann::ordered_json j;
    j["backend"] = to_string(cfg.backend);
    j["precision_bits"] = cfg.precision_bits;
    j["stepper_tolerance"] = cfg.effective_tolerance();
    j["max_step"] = cfg.max_step;
    j["tail_floor_log10"] = cfg.tail_floor_log10;
    j["max_terms"] = cfg.max_terms;
    return j.dump();
}

}  // namespace nhwave
