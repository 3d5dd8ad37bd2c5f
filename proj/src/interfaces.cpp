#include "hch/interfaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hch {

namespace {

std::vector<double> dedup_within(std::vector<double> pts, double tol) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts)
        if (out.empty() || p - out.back() > tol) out.push_back(p);
    return out;
}

std::string format_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", t);
    return buf;
}

}  // namespace

bool KBand::contains(double y) const {
    for (const auto& iv : intervals)
        if (y >= iv[0] && y <= iv[1]) return true;
    return false;
}

KBand make_kband(std::vector<std::array<double, 2>> intervals, const ScalarPotential& p) {
    if (intervals.empty()) throw std::invalid_argument("make_kband: empty interval list");
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const auto& iv = intervals[k];
        if (!(iv[0] <= iv[1]))
            throw std::invalid_argument("make_kband: interval with lo > hi at index " +
                                        std::to_string(k));
        if (k > 0 && intervals[k - 1][1] >= iv[0])
            throw std::invalid_argument("make_kband: overlapping intervals at index " +
                                        std::to_string(k));
        for (double well : p.wells)
            if (well >= iv[0] && well <= iv[1])
                throw std::invalid_argument("make_kband: interval contains the well at " +
                                            std::to_string(well));
    }
    KBand K;
    K.intervals = std::move(intervals);
    return K;
}

InterfaceSet interface_of_function(const GridFunction& u, const KBand& K) {
    const std::size_t n = u.n();
    const double dx = u.dx();
    std::vector<double> pts;

    // Crossing of the band boundary between an outside and an inside node:
    // the boundary value passed is the nearer edge of the entered interval.
    const auto refine = [&](std::size_t out, std::size_t in) {
        const double uo = u.values[out], ui = u.values[in];
        double edge = ui;
        for (const auto& iv : K.intervals) {
            if (ui < iv[0] || ui > iv[1]) continue;
            edge = uo < iv[0] ? iv[0] : iv[1];
            break;
        }
        const double du = ui - uo;
        const double frac = std::abs(du) > 0.0 ? (edge - uo) / du : 0.5;
        return u.x(out) + frac * (u.x(in) > u.x(out) ? dx : -dx);
    };

    std::size_t i = 0;
    while (i < n) {
        if (!K.contains(u.values[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && K.contains(u.values[j + 1])) ++j;
        pts.push_back(i == 0 ? u.a : refine(i - 1, i));
        pts.push_back(j == n - 1 ? u.b : refine(j + 1, j));
        i = j + 1;
    }
    InterfaceSet s;
    s.points = dedup_within(std::move(pts), 0.5 * dx);
    return s;
}

double hausdorff(const InterfaceSet& A, const InterfaceSet& B) {
    if (A.empty() || B.empty()) throw std::runtime_error("empty interface");
    const auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (double a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (double b : to) best = std::min(best, std::abs(a - b));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(A.points, B.points), directed(B.points, A.points));
}

InterfaceSet locate_layers(const GridFunction& u) {
    const std::size_t n = u.n();
    std::vector<double> pts;
    for (std::size_t i = 0; i < n; ++i) {
        if (u.values[i] == 0.0) {
            pts.push_back(u.x(i));
            continue;
        }
        if (i + 1 < n && u.values[i] * u.values[i + 1] < 0.0) {
            const double frac = u.values[i] / (u.values[i] - u.values[i + 1]);
            pts.push_back(u.x(i) + frac * u.dx());
        }
    }
    InterfaceSet s;
    s.points = dedup_within(std::move(pts), 0.5 * u.dx());
    return s;
}

void track_append(LayerTrack& track, double t, const GridFunction& u) {
    if (!(track.matching_radius > 0.0))
        throw std::invalid_argument("track_append: matching_radius must be positive");
    if (!track.times.empty() && t <= track.times.back())
        throw std::invalid_argument("track_append: times must be strictly increasing");

    const InterfaceSet iface = interface_of_function(u, track.kband);
    if (track.times.empty()) {
        if (iface.empty())
            throw std::runtime_error("track_append: empty interface at the initial time");
        track.initial = iface;
        track.hausdorff_from_init.push_back(0.0);
    } else if (iface.empty()) {
        // The solution left K entirely (e.g. annihilation completed between
        // strides): record the event and an infinite excursion.
        track.hausdorff_from_init.push_back(std::numeric_limits<double>::infinity());
        track.events.push_back("t=" + format_time(t) + ": interface left K");
    } else {
        track.hausdorff_from_init.push_back(hausdorff(iface, track.initial));
    }

    const InterfaceSet layers = locate_layers(u);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::size_t cols = track.layer_positions.empty() ? 0 : track.layer_positions[0].size();
    std::vector<double> row(cols, nan);

    std::vector<bool> used(layers.points.size(), false);
    if (!track.layer_positions.empty()) {
        const std::vector<double>& prev = track.layer_positions.back();
        for (std::size_t c = 0; c < cols; ++c) {
            if (std::isnan(prev[c])) continue;
            double best = track.matching_radius;
            std::size_t pick = layers.points.size();
            for (std::size_t k = 0; k < layers.points.size(); ++k) {
                if (used[k]) continue;
                const double d = std::abs(layers.points[k] - prev[c]);
                if (d <= best) {
                    best = d;
                    pick = k;
                }
            }
            if (pick < layers.points.size()) {
                used[pick] = true;
                row[c] = layers.points[pick];
            } else {
                track.events.push_back("t=" + format_time(t) + ": layer " + std::to_string(c + 1) +
                                       " lost");
            }
        }
    }
    for (std::size_t k = 0; k < layers.points.size(); ++k) {
        if (used[k] && !track.layer_positions.empty()) continue;
        if (track.layer_positions.empty()) {
            row.push_back(layers.points[k]);
            continue;
        }
        if (!used[k]) {
            // New column: pad history with NaN.
            for (auto& past : track.layer_positions) past.push_back(nan);
            row.push_back(layers.points[k]);
            track.events.push_back("t=" + format_time(t) + ": layer " +
                                   std::to_string(row.size()) + " appeared");
        }
    }
    track.times.push_back(t);
    track.layer_positions.push_back(std::move(row));
}

std::optional<double> exit_time_monitor(const LayerTrack& track, double delta1) {
    if (!(delta1 > 0.0))
        throw std::invalid_argument("exit_time_monitor: delta1 must be positive");
    for (std::size_t k = 0; k < track.times.size(); ++k)
        if (track.hausdorff_from_init[k] > delta1) return track.times[k];
    return std::nullopt;
}

std::vector<std::pair<double, double>> layer_velocity(const LayerTrack& track, std::size_t i) {
    const std::size_t m = track.times.size();
    if (m < 3) throw std::invalid_argument("layer_velocity: need at least 3 recorded times");
    for (std::size_t k = 0; k < m; ++k) {
        if (i >= track.layer_positions[k].size() || std::isnan(track.layer_positions[k][i]))
            throw std::runtime_error("layer identity lost");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(m - 2);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        const double dh = track.layer_positions[k + 1][i] - track.layer_positions[k - 1][i];
        const double dt = track.times[k + 1] - track.times[k - 1];
        out.emplace_back(track.times[k], dh / dt);
    }
    return out;
}

}  // namespace hch
