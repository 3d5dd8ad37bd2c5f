#include "hch/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hch {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::runtime_error("snapshot " + path + ": " + msg);
}

double parse_number(const std::string& path, const std::string& token) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) fail(path, "trailing characters in number \"" + token + "\"");
        return v;
    } catch (const std::invalid_argument&) {
        fail(path, "expected a number, got \"" + token + "\"");
    } catch (const std::out_of_range&) {
        fail(path, "number out of range: \"" + token + "\"");
    }
}

std::string header_field(const std::string& path, std::istringstream& line, const char* key) {
    std::string token;
    if (!(line >> token)) fail(path, std::string("missing header field ") + key);
    const std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0)
        fail(path, "expected header field " + prefix + "..., got \"" + token + "\"");
    return token.substr(prefix.size());
}

}  // namespace

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_snapshot(const std::string& path, const Snapshot& s) {
    if (s.u.size() != s.m || (!s.w.empty() && s.w.size() != s.m))
        fail(path, "component count does not match m");
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out << "HCH1 n=" << s.n << " m=" << s.m << " a=" << format17(s.a) << " b=" << format17(s.b)
        << " eps=" << format17(s.eps) << " tau=" << format17(s.tau) << " t=" << format17(s.t)
        << " formulation=" << s.formulation << "\n";
    const GridFunction grid(s.a, s.b, std::vector<double>(s.n, 0.0));
    for (std::size_t i = 0; i < s.n; ++i) {
        out << format17(grid.x(i));
        for (const GridFunction& c : s.u) out << " " << format17(c.values[i]);
        for (const GridFunction& c : s.w)
            out << " " << format17(i < c.n() ? c.values[i] : 0.0);
        out << "\n";
    }
    if (!out) fail(path, "write failed");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open for reading");
    std::string first;
    if (!std::getline(in, first)) fail(path, "empty file");
    std::istringstream head(first);
    std::string magic;
    head >> magic;
    if (magic != "HCH1") fail(path, "missing HCH1 magic");
    Snapshot s;
    s.n = static_cast<std::size_t>(parse_number(path, header_field(path, head, "n")));
    s.m = static_cast<std::size_t>(parse_number(path, header_field(path, head, "m")));
    s.a = parse_number(path, header_field(path, head, "a"));
    s.b = parse_number(path, header_field(path, head, "b"));
    s.eps = parse_number(path, header_field(path, head, "eps"));
    s.tau = parse_number(path, header_field(path, head, "tau"));
    s.t = parse_number(path, header_field(path, head, "t"));
    s.formulation = header_field(path, head, "formulation");
    if (s.n < 2) fail(path, "n must be at least 2");
    if (s.m < 1) fail(path, "m must be at least 1");
    if (!(s.a < s.b)) fail(path, "requires a < b");

    const bool has_w = s.formulation != "classic";
    const std::size_t width = 1 + s.m * (has_w ? 2 : 1);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        std::string token;
        while (ls >> token) row.push_back(parse_number(path, token));
        if (row.empty()) continue;
        if (row.size() != width)
            fail(path, "row " + std::to_string(rows.size() + 1) + " has " +
                           std::to_string(row.size()) + " columns, expected " +
                           std::to_string(width));
        rows.push_back(std::move(row));
    }
    if (rows.size() != s.n)
        fail(path, "found " + std::to_string(rows.size()) + " rows, header says n=" +
                       std::to_string(s.n));

    const GridFunction grid(s.a, s.b, std::vector<double>(s.n, 0.0));
    for (std::size_t i = 0; i < s.n; ++i)
        if (std::abs(rows[i][0] - grid.x(i)) > 1e-9 * (s.b - s.a))
            fail(path, "row " + std::to_string(i + 1) + " x does not match the uniform grid");

    for (std::size_t c = 0; c < s.m; ++c) {
        GridFunction uc(s.a, s.b, std::vector<double>(s.n, 0.0));
        for (std::size_t i = 0; i < s.n; ++i) uc.values[i] = rows[i][1 + c];
        s.u.push_back(std::move(uc));
    }
    if (has_w) {
        const bool faces = s.formulation == "flux";
        for (std::size_t c = 0; c < s.m; ++c) {
            if (faces) {
                const double dx = (s.b - s.a) / static_cast<double>(s.n - 1);
                GridFunction J(s.a + 0.5 * dx, s.b - 0.5 * dx,
                               std::vector<double>(s.n - 1, 0.0));
                for (std::size_t i = 0; i + 1 < s.n; ++i) J.values[i] = rows[i][1 + s.m + c];
                s.w.push_back(std::move(J));
            } else {
                GridFunction wc(s.a, s.b, std::vector<double>(s.n, 0.0));
                for (std::size_t i = 0; i < s.n; ++i) wc.values[i] = rows[i][1 + s.m + c];
                s.w.push_back(std::move(wc));
            }
        }
    }
    return s;
}

void write_grid_function(const std::string& path, const GridFunction& f) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    for (std::size_t i = 0; i < f.n(); ++i)
        out << format17(f.x(i)) << " " << format17(f.values[i]) << "\n";
    if (!out) fail(path, "write failed");
}

GridFunction read_grid_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open for reading");
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string t1, t2, extra;
        if (!(ls >> t1)) continue;
        if (!(ls >> t2)) fail(path, "row with a single column");
        if (ls >> extra) fail(path, "row with more than two columns");
        xs.push_back(parse_number(path, t1));
        vs.push_back(parse_number(path, t2));
    }
    if (xs.size() < 2) fail(path, "need at least 2 rows");
    const double dx = xs[1] - xs[0];
    if (!(dx > 0.0)) fail(path, "x must be strictly increasing");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - xs[0] - dx * static_cast<double>(i)) > 1e-9 * std::abs(dx))
            fail(path, "x must be uniformly spaced (row " + std::to_string(i + 1) + ")");
    return GridFunction(xs.front(), xs.back(), std::move(vs));
}

}  // namespace hch
