#include "netelast/presets.hpp"

#include <cmath>
#include <string>

#include "netelast/error.hpp"

namespace netelast {

PresetName parse_preset_name(std::string_view name) {
    if (name == "hexagonal") return PresetName::hexagonal;
    if (name == "square") return PresetName::square;
    if (name == "cubic") return PresetName::cubic;
    if (name == "single_vertex" || name == "single-vertex") return PresetName::single_vertex;
    throw ValidationError("unknown lattice preset '" + std::string(name) + "'");
}

Preset hexagonal_lattice(double l, double w0, double w1) {
    if (!(l > 0.0) || w0 < 0.0 || !(w1 > 0.0)) throw ValidationError("hexagonal preset needs l > 0, w0 >= 0, w1 > 0");
    const double s3 = std::sqrt(3.0);
    std::vector<EdgeOrbit> edges{
        {0, 1, {0, 0}, w1},   // e1 = ( √3/2 l,  l/2)
        {0, 1, {-1, 0}, w1},  // e2 = (-√3/2 l,  l/2)
        {0, 1, {0, -1}, w1},  // e3 = (0, -l)
    };
    edges.push_back({0, 0, {0, 0}, w0});
    edges.push_back({1, 1, {0, 0}, w0});
    Matrix basis(2, 2, {s3 * l, 0.5 * s3 * l, 0.0, 1.5 * l});
    return Preset{build_graph(2, 2, std::move(edges)), PeriodMap(std::move(basis)),
                  {{0.0, 0.0}, {0.5 * s3 * l, 0.5 * l}}};
}

Preset cubic_lattice(std::size_t N, double a, int m) {
    if (N < 1 || a < 0.0 || m < 1) throw ValidationError("cubic preset needs N >= 1, a >= 0, m >= 1");
    std::vector<EdgeOrbit> edges;
    edges.push_back({0, 0, Offset(N, 0), a});
    for (std::size_t k = 0; k < N; ++k) {
        Offset g(N, 0);
        g[k] = m;
        edges.push_back({0, 0, g, 1.0});
    }
    return Preset{build_graph(N, 1, std::move(edges)), PeriodMap(Matrix::identity(N)), {Vector(N, 0.0)}};
}

namespace {

Preset square_lattice(double l, double w0, double w1) {
    if (!(l > 0.0) || w0 < 0.0 || !(w1 > 0.0)) throw ValidationError("square preset needs l > 0, w0 >= 0, w1 > 0");
    std::vector<EdgeOrbit> edges{{0, 0, {1, 0}, w1}, {0, 0, {0, 1}, w1}};
    edges.push_back({0, 0, {0, 0}, w0});
    return Preset{build_graph(2, 1, std::move(edges)), PeriodMap(Matrix::identity(2) * l), {{0.0, 0.0}}};
}

Preset single_vertex_lattice(const PresetParams& p) {
    if (p.N < 1 || !(p.l > 0.0) || p.a < 0.0) throw ValidationError("single_vertex preset needs N >= 1, l > 0, a >= 0");
    std::vector<EdgeOrbit> edges;
    edges.push_back({0, 0, Offset(p.N, 0), p.a});
    for (const auto& [g, w] : p.table) {
        if (g.size() != p.N) throw ValidationError("single_vertex table offset has wrong length");
        if (is_zero(g)) throw ValidationError("single_vertex table must not contain the zero offset; use a");
        edges.push_back({0, 0, g, w});
    }
    return Preset{build_graph(p.N, 1, std::move(edges)), PeriodMap(Matrix::identity(p.N) * p.l),
                  {Vector(p.N, 0.0)}};
}

}  // namespace

Preset lattice_preset(PresetName name, const PresetParams& params) {
    switch (name) {
        case PresetName::hexagonal: return hexagonal_lattice(params.l, params.w0, params.w1);
        case PresetName::square: return square_lattice(params.l, params.w0, params.w1);
        case PresetName::cubic: return cubic_lattice(params.N, params.a, params.m);
        case PresetName::single_vertex: return single_vertex_lattice(params);
    }
    throw ValidationError("unknown lattice preset");
}

}  // namespace netelast
