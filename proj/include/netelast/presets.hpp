#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "netelast/graph.hpp"

namespace netelast {

enum class PresetName { hexagonal, square, cubic, single_vertex };

PresetName parse_preset_name(std::string_view name);

struct PresetParams {
    double l = 1.0;    // edge length / lattice spacing
    double w0 = 1.0;   // loop weight (hexagonal, square)
    double w1 = 1.0;   // non-loop edge weight (hexagonal, square)
    double a = 1.0;    // loop weight (cubic, single_vertex)
    int m = 1;         // edge span in lattice steps (cubic)
    std::size_t N = 2; // dimension (cubic, single_vertex)
    // single_vertex only: one entry per ± pair of lattice offsets.
    std::vector<std::pair<Offset, double>> table;
};

struct Preset {
    QuotientGraph graph;
    PeriodMap period;
    // The textbook placement of the representatives (harmonic for every preset).
    std::vector<Vector> positions;
};

Preset lattice_preset(PresetName name, const PresetParams& params);

// Hexagonal tiling with one loop per vertex. Period u1 = (√3 l, 0),
// u2 = (√3 l / 2, 3 l / 2); v0 at the origin and v1 at (√3 l / 2, l / 2).
Preset hexagonal_lattice(double l, double w0, double w1);

// Z^N with unit spacing: one vertex, loop weight a, edges ±m e_k of weight 1.
Preset cubic_lattice(std::size_t N, double a, int m);

}  // namespace netelast
