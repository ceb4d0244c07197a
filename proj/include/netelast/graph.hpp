#pragma once

// Weighted periodic graphs, stored as their finite quotient: vertex orbits
// indexed 0..n and edge orbits carrying an integer lattice offset.

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "netelast/linalg.hpp"

namespace netelast {

// Element of the period lattice Z^N.
using Offset = std::vector<int>;

Offset negated(const Offset& g);
bool is_zero(const Offset& g);

// Edge from vertex `tail` in cell 0 to vertex `head` in cell `offset`.
// (i, j, g, w) and (j, i, -g, w) describe the same orbit.
struct EdgeOrbit {
    std::size_t tail = 0;
    std::size_t head = 0;
    Offset offset;
    double weight = 0.0;

    [[nodiscard]] bool is_true_loop() const { return tail == head && is_zero(offset); }
    [[nodiscard]] bool is_self_edge() const { return tail == head; }

    friend bool operator==(const EdgeOrbit&, const EdgeOrbit&) = default;
};

// The representative of an oriented edge at one of its endpoints.
struct Dart {
    std::size_t edge = 0;   // index into QuotientGraph::edges()
    bool forward = true;    // false when the dart runs head -> tail
    std::size_t origin = 0;
    std::size_t terminal = 0;
    Offset offset;          // cell of `terminal` relative to `origin`
    double weight = 0.0;
};

class QuotientGraph {
public:
    QuotientGraph() = default;

    [[nodiscard]] std::size_t dimension() const { return dimension_; }
    [[nodiscard]] std::size_t vertex_count() const { return vertex_count_; }
    [[nodiscard]] const std::vector<EdgeOrbit>& edges() const { return edges_; }

    // Σ w over unoriented orbits.
    [[nodiscard]] double total_weight() const;

    friend bool operator==(const QuotientGraph&, const QuotientGraph&) = default;

private:
    friend QuotientGraph build_graph(std::size_t, std::size_t, std::vector<EdgeOrbit>);

    std::size_t dimension_ = 0;
    std::size_t vertex_count_ = 0;
    std::vector<EdgeOrbit> edges_;
};

// Validates, canonicalizes each orbit to the lexicographically smaller of its
// two orientations, sorts, and merges parallel orbits by summing weights.
QuotientGraph build_graph(std::size_t dimension, std::size_t vertex_count, std::vector<EdgeOrbit> edges);

EdgeOrbit canonical(EdgeOrbit e);

// Both orientations of self-edges appear; a true loop yields two darts.
std::vector<Dart> darts_at(const QuotientGraph& g, std::size_t v);

// Loop weight counts twice.
double degree(const QuotientGraph& g, std::size_t v);

// Connectivity of the positive-weight edges with offsets ignored.
bool is_positively_connected(const QuotientGraph& g);

// Columns are the images of the standard generators of Z^N.
class PeriodMap {
public:
    PeriodMap() = default;
    explicit PeriodMap(Matrix basis);

    [[nodiscard]] const Matrix& basis() const { return basis_; }
    [[nodiscard]] std::size_t dimension() const { return basis_.rows(); }
    [[nodiscard]] double covolume() const;
    [[nodiscard]] Vector apply(const Offset& g) const;

    friend bool operator==(const PeriodMap&, const PeriodMap&) = default;

private:
    Matrix basis_;
};

// Calls visit(γ, ρ(γ) + shift) for every γ with |ρ(γ) + shift| <= radius,
// in lexicographic order of γ.
void for_each_lattice_point(const PeriodMap& period, std::span<const double> shift, double radius,
                            const std::function<void(const Offset&, const Vector&)>& visit);

struct Realization {
    std::vector<Vector> positions;
    PeriodMap period;

    // x_j + ρ(γ) - x_i for the orbit (i, j, γ).
    [[nodiscard]] Vector edge_vector(const EdgeOrbit& e) const;
    [[nodiscard]] Vector dart_vector(const Dart& d) const;
};

}  // namespace netelast
