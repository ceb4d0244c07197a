#include "netelast/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "netelast/error.hpp"

namespace netelast {

Offset negated(const Offset& g) {
    Offset out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = -g[k];
    return out;
}

bool is_zero(const Offset& g) {
    return std::all_of(g.begin(), g.end(), [](int c) { return c == 0; });
}

namespace {

auto orbit_key(const EdgeOrbit& e) { return std::tie(e.tail, e.head, e.offset); }

}  // namespace

EdgeOrbit canonical(EdgeOrbit e) {
    EdgeOrbit rev{e.head, e.tail, negated(e.offset), e.weight};
    if (orbit_key(rev) < orbit_key(e)) return rev;
    return e;
}

double QuotientGraph::total_weight() const {
    double s = 0.0;
    for (const auto& e : edges_) s += e.weight;
    return s;
}

QuotientGraph build_graph(std::size_t dimension, std::size_t vertex_count, std::vector<EdgeOrbit> edges) {
    if (dimension < 1) throw ValidationError("graph dimension must be at least 1");
    if (vertex_count < 1) throw ValidationError("graph needs at least one vertex orbit");
    for (auto& e : edges) {
        if (e.tail >= vertex_count || e.head >= vertex_count) {
            throw ValidationError("edge endpoint " + std::to_string(std::max(e.tail, e.head)) +
                                  " out of range for " + std::to_string(vertex_count) + " vertices");
        }
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw ValidationError("edge weight must be finite and non-negative");
        }
        if (e.offset.size() != dimension) {
            throw ValidationError("edge offset has length " + std::to_string(e.offset.size()) +
                                  ", expected " + std::to_string(dimension));
        }
        e = canonical(std::move(e));
    }
    std::stable_sort(edges.begin(), edges.end(),
                     [](const EdgeOrbit& a, const EdgeOrbit& b) { return orbit_key(a) < orbit_key(b); });

    QuotientGraph g;
    g.dimension_ = dimension;
    g.vertex_count_ = vertex_count;
    for (auto& e : edges) {
        if (!g.edges_.empty() && orbit_key(g.edges_.back()) == orbit_key(e)) {
            g.edges_.back().weight += e.weight;
        } else {
            g.edges_.push_back(std::move(e));
        }
    }
    return g;
}

std::vector<Dart> darts_at(const QuotientGraph& g, std::size_t v) {
    if (v >= g.vertex_count()) throw ValidationError("vertex index out of range");
    std::vector<Dart> out;
    const auto& edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        if (e.tail == v) out.push_back(Dart{k, true, e.tail, e.head, e.offset, e.weight});
        if (e.head == v) out.push_back(Dart{k, false, e.head, e.tail, negated(e.offset), e.weight});
    }
    return out;
}

double degree(const QuotientGraph& g, std::size_t v) {
    double d = 0.0;
    for (const auto& dart : darts_at(g, v)) d += dart.weight;
    return d;
}

bool is_positively_connected(const QuotientGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n;
    for (const auto& e : g.edges()) {
        if (e.weight <= 0.0) continue;
        const auto a = find(e.tail);
        const auto b = find(e.head);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

PeriodMap::PeriodMap(Matrix basis) : basis_(std::move(basis)) {
    if (!basis_.square() || basis_.rows() == 0) throw ValidationError("period basis must be a square matrix");
    for (double v : basis_.row_major())
        if (!std::isfinite(v)) throw ValidationError("period basis has non-finite entries");
    if (determinant(basis_) == 0.0) throw ValidationError("period basis is singular");
}

double PeriodMap::covolume() const { return std::abs(determinant(basis_)); }

Vector PeriodMap::apply(const Offset& g) const {
    const std::size_t n = basis_.rows();
    Vector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) out[i] += basis_(i, k) * g[k];
    return out;
}

void for_each_lattice_point(const PeriodMap& period, std::span<const double> shift, double radius,
                            const std::function<void(const Offset&, const Vector&)>& visit) {
    const std::size_t N = period.dimension();
    if (shift.size() != N) throw ValidationError("lattice shift has the wrong dimension");
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("lattice radius must be finite and >= 0");
    // γ = ρ^{-1}(y - shift) with |y| <= radius bounds each component by the
    // row norms of ρ^{-1}.
    const Matrix inv = inverse(period.basis());
    std::vector<int> lo(N), hi(N);
    for (std::size_t k = 0; k < N; ++k) {
        double c = 0.0;
        double row = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            c -= inv(k, j) * shift[j];
            row += inv(k, j) * inv(k, j);
        }
        const double span = radius * std::sqrt(row);
        const double a = std::floor(c - span - 1e-9);
        const double b = std::ceil(c + span + 1e-9);
        if (b - a > 1e7) throw ValidationError("lattice enumeration box is too large");
        lo[k] = static_cast<int>(a);
        hi[k] = static_cast<int>(b);
    }
    Offset g(lo.begin(), lo.end());
    const double r2 = radius * radius;
    while (true) {
        Vector y = period.apply(g);
        double d2 = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            y[k] += shift[k];
            d2 += y[k] * y[k];
        }
        if (d2 <= r2) visit(g, y);
        std::size_t k = N;
        while (k > 0) {
            --k;
            if (g[k] < hi[k]) {
                ++g[k];
                break;
            }
            g[k] = lo[k];
            if (k == 0) return;
        }
    }
}

Vector Realization::edge_vector(const EdgeOrbit& e) const {
    Vector v = period.apply(e.offset);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += positions[e.head][k] - positions[e.tail][k];
    return v;
}

Vector Realization::dart_vector(const Dart& d) const {
    Vector v = period.apply(d.offset);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += positions[d.terminal][k] - positions[d.origin][k];
    return v;
}

}  // namespace netelast
