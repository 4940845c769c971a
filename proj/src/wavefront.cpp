#include "nhwave/wavefront.hpp"

#include "nhwave/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhwave {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

std::string to_string(FrontKind k) {
    switch (k) {
        case FrontKind::NhFrontArrival: return "nh-front-arrival";
        case FrontKind::HermitianFrontArrival: return "hermitian-front-arrival";
        case FrontKind::ReflectionOnset: return "reflection-onset";
        case FrontKind::TransitionJump: return "transition-jump";
    }
    return "unknown";
}

std::vector<PeakSample> peak_trace(const Trajectory& traj) {
    std::vector<PeakSample> out;
    out.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) {
        if (s.log10_abs2.empty()) throw DimensionError("empty snapshot");
        const std::size_t i = argmax(s.log10_abs2);
        out.push_back({s.t, static_cast<int>(i) + 1, s.log10_abs2[i]});
    }
    return out;
}

Trajectory hermitian_frame(const Trajectory& traj) {
    const SimilarityTransform s = make_transform(traj.model, mp::kDoubleBits);
    if (s.dim() != traj.dim()) throw DimensionError("trajectory and model dimensions differ");
    Trajectory out = traj;
    out.states.clear();
    const double to_log10 = 2.0 / std::log(10.0);
    for (auto& snap : out.snapshots)
        for (std::size_t i = 0; i < snap.log10_abs2.size(); ++i) snap.log10_abs2[i] -= to_log10 * s.log_diag[i];
    return out;
}

std::vector<FrontSample> front_position(const Trajectory& traj, double threshold_log10) {
    if (!(threshold_log10 < 0)) throw InvalidParameter("front threshold must be negative (relative to the peak)");
    std::vector<FrontSample> out;
    out.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) {
        const auto& row = s.log10_abs2;
        const double level = row[argmax(row)] + threshold_log10;
        std::size_t lo = 0;
        while (row[lo] < level) ++lo;
        std::size_t hi = row.size() - 1;
        while (row[hi] < level) --hi;
        out.push_back({s.t, static_cast<int>(lo) + 1, static_cast<int>(hi) + 1});
    }
    return out;
}

LinearFit linear_fit(const std::vector<std::pair<double, double>>& xy, double x_lo, double x_hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : xy) {
        if (x < x_lo || x > x_hi) continue;
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2 || den == 0) throw InvalidParameter("linear fit needs at least two distinct points in range");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

std::vector<FrontEvent> detect_transition(const std::vector<PeakSample>& trace, int min_jump_sites, double max_speed,
                                          double a, const Trajectory* traj) {
    if (min_jump_sites < 3) throw InvalidParameter("min_jump_sites must be at least 3");
    if (!(max_speed >= 0)) throw InvalidParameter("max_speed must be non-negative");
    std::vector<FrontEvent> events;
    for (std::size_t k = 1; k < trace.size(); ++k) {
        const double dt = trace[k].t - trace[k - 1].t;
        const double ceiling = max_speed * dt / a + min_jump_sites;
        const int jump = trace[k].site - trace[k - 1].site;
        if (std::abs(jump) <= ceiling) continue;
        FrontEvent e;
        e.time = trace[k].t;
        e.site = trace[k].site;
        e.kind = FrontKind::TransitionJump;
        e.confidence = std::numeric_limits<double>::quiet_NaN();
        if (traj != nullptr && k < traj->snapshots.size()) {
            const auto& row = traj->snapshots[k].log10_abs2;
            e.confidence = trace[k].log10_abs2 - row[static_cast<std::size_t>(trace[k - 1].site - 1)];
        }
        events.push_back(e);
    }
    return events;
}

std::vector<FrontEvent> detect_edge_features(const Trajectory& traj, int site, const EdgeFeatureOptions& opt) {
    if (site < 1 || static_cast<std::size_t>(site) > traj.dim()) throw DimensionError("edge site outside the lattice");
    const std::size_t idx = static_cast<std::size_t>(site - 1);
    const auto& snaps = traj.snapshots;
    const std::size_t n = snaps.size();
    std::vector<FrontEvent> events;

    std::size_t start = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& row = snaps[k].log10_abs2;
        if (argmax(row) != idx) continue;
        double others = kNegInf;
        for (std::size_t i = 0; i < row.size(); ++i)
            if (i != idx) others = std::max(others, row[i]);
        events.push_back({snaps[k].t, site, FrontKind::NhFrontArrival, row[idx] - others});
        start = k;
        break;
    }

    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = snaps[k].log10_abs2[idx];

    std::vector<std::size_t> maxima;
    double floor_value = std::numeric_limits<double>::infinity();
    double last_detection = kNegInf;
    bool first_front = true;
    for (std::size_t k = start; k < n; ++k) {
        floor_value = std::min(floor_value, v[k]);
        if (k == start || k + 1 >= n || !std::isfinite(v[k])) continue;
        if (!(v[k] > v[k - 1] && v[k] >= v[k + 1])) continue;
        const double t = snaps[k].t;
        double baseline = kNegInf;
        for (std::size_t j : maxima)
            if (snaps[j].t > t - opt.window) baseline = std::max(baseline, v[j]);
        if (!std::isfinite(baseline) && !maxima.empty()) baseline = v[maxima.back()];
        maxima.push_back(k);
        const double rise = v[k] - (std::isfinite(baseline) ? baseline : floor_value);
        if (rise < opt.rise_log10 || t - last_detection <= opt.window) continue;
        last_detection = t;

        const double level = v[k] - opt.half_level;
        std::size_t j = k;
        while (j > start && v[j - 1] >= level) --j;
        double onset = snaps[j].t;
        if (j > start) {
            const double f = (level - v[j - 1]) / (v[j] - v[j - 1]);
            onset = snaps[j - 1].t + f * (snaps[j].t - snaps[j - 1].t);
        }
        events.push_back({onset, site, first_front ? FrontKind::HermitianFrontArrival : FrontKind::ReflectionOnset, rise});
        first_front = false;
    }
    std::stable_sort(events.begin(), events.end(), [](const FrontEvent& x, const FrontEvent& y) { return x.time < y.time; });
    return events;
}

double oscillation_period(const std::vector<std::pair<double, double>>& series, double min_separation) {
    const std::size_t n = series.size();
    double top = kNegInf;
    for (const auto& p : series) top = std::max(top, p.second);
    std::vector<std::pair<double, double>> found;  // (height, time)
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double y = series[k].second;
        if (!(y > series[k - 1].second)) continue;
        std::size_t plateau = k;
        while (plateau + 1 < n && series[plateau + 1].second == y) ++plateau;
        if (plateau + 1 >= n || !(series[plateau + 1].second < y)) continue;
        double left_min = y;
        for (std::size_t j = k; j-- > 0;) {
            if (series[j].second > y) break;
            left_min = std::min(left_min, series[j].second);
        }
        double right_min = y;
        for (std::size_t j = plateau + 1; j < n; ++j) {
            if (series[j].second > y) break;
            right_min = std::min(right_min, series[j].second);
        }
        const double prominence = y - std::max(left_min, right_min);
        if (prominence >= 0.1 * top) found.emplace_back(y, 0.5 * (series[k].first + series[plateau].first));
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<double> peaks;
    for (const auto& [y, t] : found) {
        bool clear = true;
        for (double kept : peaks)
            if (std::fabs(t - kept) < min_separation) clear = false;
        if (clear) peaks.push_back(t);
    }
    std::sort(peaks.begin(), peaks.end());
    if (peaks.size() < 3)
        throw InsufficientPeaks("oscillation period needs at least 3 prominent peaks, found " + std::to_string(peaks.size()));
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace nhwave
