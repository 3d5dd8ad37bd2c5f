#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hch/grid.hpp"

namespace hch {

// One saved instant. For m = 1 the columns are x, u and (formulation
// dependent) u_t or the face flux J; for m > 1 the u and w components are
// interleaved per row. Flux J lives on the n-1 right faces; its snapshot
// column is padded with a trailing zero so every row has the same width.
struct Snapshot {
    std::size_t n = 0;
    std::size_t m = 1;
    double a = 0.0;
    double b = 1.0;
    double eps = 0.0;
    double tau = 0.0;
    double t = 0.0;
    std::string formulation = "second-order";
    std::vector<GridFunction> u;
    std::vector<GridFunction> w;  // empty for classic; faces for flux
};

// Header "HCH1 n= m= a= b= eps= tau= t= formulation=", then one
// whitespace-separated row per node, 17 significant digits.
void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

// Two-column (x, value) plain text with 17 significant digits; reading
// requires strictly increasing, uniformly spaced x.
void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path);

// printf %.17g.
std::string format17(double v);

}  // namespace hch
