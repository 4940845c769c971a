#include "nhwave/scenario.hpp"

namespace nhwave {

namespace {

const char* kFig1 = R"(name: fig1
model: {variant: hatano-nelson, N: 200, t_l: 2, t_r: 0.2}
initial: {kind: delta, site: 100}
evolution:
  backend: spectral-transform
  precision_bits: 256
  times: {start: 0, stop: 60, step: 1}
analysis:
  ops: [velocities, edge_timestamps]
  threshold_log10: -10
  front_fit: [5, 40]
output: {directory: out/fig1}
)";

const char* kFig2 = R"(name: fig2
model: {variant: hatano-nelson, N: 200, t_l: 2, t_r: 0.2}
initial: {kind: delta, site: 100}
evolution:
  backend: spectral-transform
  precision_bits: 256
  times: {start: 0, stop: 300, step: 1}
analysis:
  ops: [velocities, edge_timestamps]
  edge_site: 1
  edge_features: true
  transitions: false
output: {directory: out/fig2}
)";

const char* kFig3 = R"(name: fig3
model: {variant: hatano-nelson, N: 400, t_l: 2, t_r: 1.5}
initial: {kind: gaussian, n0: 300, sigma: 3, k0: 0}
evolution:
  backend: spectral-transform
  precision_bits: 256
  times: {start: 0, stop: 80, step: 1}
analysis:
  ops: [velocities, transformed_gaussian, peak_expansion, continuum]
output: {directory: out/fig3}
)";

const char* kFig4 = R"(name: fig4
model: {variant: hatano-nelson, N: 400, t_l: 2, t_r: 1.5}
initial: {kind: gaussian, n0: 300, sigma: 3, k0: pi/4}
evolution:
  backend: spectral-transform
  precision_bits: 166
  times: {start: 0, stop: 100, step: 1}
analysis:
  ops: [velocities, transformed_gaussian, continuum, reflection, critical_sigma_reflection]
  min_jump_sites: 5
output: {directory: out/fig4}
)";

const char* kFig5 = R"(name: fig5
model: {variant: hatano-nelson, N: 400, t_l: sqrt(3), t_r: sqrt(3)}
initial: {kind: gaussian, n0: 300, sigma: 3, k0: pi/4}
evolution:
  backend: spectral-transform
  precision_bits: 128
  times: [30.8248, 40.8248, 50.8248]
analysis:
  ops: [velocities, reflection]
  transitions: false
output: {directory: out/fig5}
)";

const char* kFig6 = R"(name: fig6
seed: 1
model:
  variant: hatano-nelson
  N: 400
  t_l: 2
  t_r: 1.5
  disorder: {w: 1e-7}
initial: {kind: gaussian, n0: 300, sigma: 3, k0: pi/4}
evolution:
  backend: precision-stepper
  precision_bits: 166
  times: {start: 0, stop: 40, step: 1}
analysis:
  ops: [velocities, disorder, critical_sigma_disorder, critical_disorder, localization_length]
  min_jump_sites: 5
ensemble: {realizations: 5}
output: {directory: out/fig6}
)";

const char* kFig6Edge = R"(name: fig6-edge
model: {variant: hatano-nelson, N: 400, t_l: 2, t_r: 1.5}
initial: {kind: gaussian, n0: 300, sigma: 3, k0: pi/4}
evolution:
  backend: spectral-transform
  precision_bits: 256
  times: {start: 0, stop: 450, step: 1}
analysis:
  ops: [velocities, edge_timestamps]
  x0: 300
  edge_site: 1
  edge_features: true
  transitions: false
output: {directory: out/fig6-edge}
)";

const char* kFig7 = R"(name: fig7-ssh
model: {variant: nh-ssh, N: 100, t1: 0.4, t2: 1, gamma: 0.5}
initial: {kind: delta, site: 1}
evolution:
  backend: spectral-transform
  precision_bits: 64
  times: {start: 0, stop: 2100, step: 1}
analysis:
  ops: [ssh_velocity, ssh_period]
  edge_site: 1
  period: true
  period_min_separation: 100
  edge_normalization: series-max
  edge_mean_from: 100
  transitions: false
output: {directory: out/fig7-ssh, normalization: series-max}
)";

const char* kFig8 = R"(name: fig8-ssh-gaussian
model: {variant: nh-ssh, N: 200, t1: 0.4, t2: 1, gamma: 0.5}
initial: {kind: gaussian, n0: 150, sigma: 3, k0: pi/4, sublattice: A}
evolution:
  backend: spectral-transform
  precision_bits: 128
  times: [0, 1, 50, 100]
analysis:
  ops: [ssh_velocity]
  transitions: false
output: {directory: out/fig8-ssh-gaussian}
)";

const char* kAppA = R"(name: appendixA
model: {variant: hatano-nelson, N: 400, t_l: sqrt(3), t_r: sqrt(3)}
initial: {kind: gaussian, n0: 200, sigma: 3, k0: pi/4}
evolution:
  backend: spectral-transform
  precision_bits: 128
  times: [0, 10, 30, 50]
analysis:
  ops: [velocities, saddle_peak]
  transitions: false
output: {directory: out/appendixA}
)";

const char* kAppD = R"(name: appendixD-sigma-sweep
model: {variant: hatano-nelson, N: 400, t_l: 2, t_r: 1.5}
initial: {kind: gaussian, n0: 350, sigma: [2.5, 2, 1.5], k0: pi/4}
evolution:
  backend: spectral-transform
  precision_bits: 212
  times: {start: 0, stop: 60, step: 0.5}
analysis:
  ops: [reflection, critical_sigma_reflection]
  critical_d: [50, 60, 70]
  min_jump_sites: 5
output: {directory: out/appendixD-sigma-sweep}
)";

const char* kAppE = R"(name: appendixE-critical
seed: 1
model:
  variant: hatano-nelson
  N: 400
  t_l: 2
  t_r: 1.5
  disorder: {w: 1e-4}
initial: {kind: gaussian, n0: 300, sigma: [1.0, 2.5], k0: pi/4}
evolution:
  backend: precision-stepper
  precision_bits: 128
  times: {start: 0, stop: 30, step: 0.5}
analysis:
  ops: [disorder, critical_sigma_disorder, critical_disorder]
  min_jump_sites: 5
output: {directory: out/appendixE-critical}
)";

}  // namespace

const std::vector<PresetInfo>& list_presets() {
    static const std::vector<PresetInfo> presets{
        {"fig1", "HN delta packet, t_l=2 t_r=0.2, N=200, snapshots to t=60", kFig1},
        {"fig2", "HN delta packet edge series |psi_1(t)|^2 to t=300", kFig2},
        {"fig3", "HN Gaussian k0=0, peak drift toward the amplified edge", kFig3},
        {"fig4", "HN Gaussian k0=pi/4, wall reflection transition near t=70", kFig4},
        {"fig5", "Hermitian Gaussian reflection around t_hit", kFig5},
        {"fig6", "HN Gaussian with w=1e-7 disorder, 5 seeds", kFig6},
        {"fig6-edge", "HN Gaussian edge series, x0=300", kFig6Edge},
        {"fig7-ssh", "NH-SSH delta at the edge, periodic edge revivals", kFig7},
        {"fig8-ssh-gaussian", "NH-SSH Gaussian snapshots t=1, 50, 100", kFig8},
        {"appendixA", "Hermitian Gaussian vs saddle-point amplitude", kAppA},
        {"appendixD-sigma-sweep", "Reflection transition vs sigma at d=50", kAppD},
        {"appendixE-critical", "Disorder transition for sigma below and above critical", kAppE},
    };
    return presets;
}

const PresetInfo* find_preset(const std::string& name) {
    for (const auto& p : list_presets())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace nhwave
