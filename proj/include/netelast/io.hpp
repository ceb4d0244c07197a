#pragma once

// Net files, trace JSON, stress-strain CSV and SVG snapshots.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netelast/deform.hpp"
#include "netelast/graph.hpp"

namespace netelast {

// A net file: the quotient graph, its period (row-major, basis vectors as
// columns), vertex names and optional positions. Serialized as JSON with one
// edge per line and numbers printed with 17 significant digits.
struct NetFile {
    QuotientGraph graph;
    PeriodMap period;
    std::vector<std::string> names;
    std::optional<std::vector<Vector>> positions;
};

NetFile parse_net(std::string_view text);
std::string serialize_net(const NetFile& net);

// Default names v0, v1, ...
std::vector<std::string> default_names(std::size_t count);

std::string format_number(double x);

std::string trace_to_json(const DeformationTrace& trace);

// Restores what curve evaluation needs: mode, rotation, volume and the
// segment tensors with their λ ranges. Segment graphs are left empty.
DeformationTrace trace_from_json(std::string_view text);

bool looks_like_trace(std::string_view text);

std::string curve_csv(const std::vector<CurvePoint>& points);

struct SvgOptions {
    double pixels = 480.0;
    double vertex_radius = 0.0;  // 0 picks a size from the cell
};

// 2D only. Draws one period cell, the vertices and edges of the
// representatives, loops as small circles, and the tension ellipse
// {x : x^T T_w^{-1} x = 1} centred in the cell.
std::string render_svg(const QuotientGraph& g, const Realization& r, const SvgOptions& options = {});

}  // namespace netelast
