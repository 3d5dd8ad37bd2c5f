#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hch/grid.hpp"
#include "hch/potential.hpp"

namespace hch {

// Finite set of interface positions, sorted, deduplicated within dx/2 of the
// producing grid.
struct InterfaceSet {
    std::vector<double> points;
    bool empty() const { return points.empty(); }
};

// Finite union of closed intervals in value space, each keeping positive
// distance from every well.
struct KBand {
    std::vector<std::array<double, 2>> intervals;  // sorted, disjoint
    bool contains(double y) const;
};

// Validates interval ordering, disjointness and well exclusion.
KBand make_kband(std::vector<std::array<double, 2>> intervals, const ScalarPotential& p);

// Layer history appended once per observed stride. Column identity is kept
// by nearest-neighbor matching within matching_radius; a failed match closes
// the column (annihilation) or opens a new one (creation) and records an
// event line instead of re-indexing.
struct LayerTrack {
    KBand kband;
    double matching_radius = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> layer_positions;  // per time, NaN = absent
    std::vector<double> hausdorff_from_init;
    std::vector<std::string> events;
    InterfaceSet initial;  // I_K at the first appended time
};

// Endpoints of the maximal intervals where u lies in K, the crossing of the
// band boundary refined by linear interpolation.
InterfaceSet interface_of_function(const GridFunction& u, const KBand& K);

// Exact max of the two directed sup-min distances over the finite sets.
// Throws "empty interface" when either set is empty.
double hausdorff(const InterfaceSet& A, const InterfaceSet& B);

// Zero crossings of u, linearly interpolated between bracketing nodes.
InterfaceSet locate_layers(const GridFunction& u);

// Appends one observation: layer positions from zero crossings, Hausdorff
// distance of I_K[u] from the initial interface. Times must increase.
void track_append(LayerTrack& track, double t, const GridFunction& u);

// First recorded time with hausdorff_from_init > delta1, if any.
std::optional<double> exit_time_monitor(const LayerTrack& track, double delta1);

// Centered differences of h_i(t) at interior recorded times. Throws
// "layer identity lost" when column i is absent anywhere in the track.
std::vector<std::pair<double, double>> layer_velocity(const LayerTrack& track, std::size_t i);

}  // namespace hch
