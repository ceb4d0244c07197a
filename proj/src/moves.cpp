#include "netelast/moves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "netelast/error.hpp"
#include "netelast/solver.hpp"

namespace netelast {

Firmness Firmness::constant(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("firmness constant must be positive");
    return Firmness(Kind::constant, k, 0.0);
}

Firmness Firmness::linear(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ValidationError("firmness slope must be positive");
    return Firmness(Kind::linear, kappa, 1.0);
}

Firmness Firmness::power(double k, double exponent) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("firmness scale must be positive");
    if (!std::isfinite(exponent)) throw ValidationError("firmness exponent must be finite");
    return Firmness(Kind::power, k, exponent);
}

double Firmness::operator()(double degree) const {
    switch (kind_) {
    case Kind::constant: return value_;
    case Kind::linear: return value_ * degree;
    case Kind::power: break;
    }
    // A vertex without darts never splits, whatever the sign of the exponent.
    if (!(degree > 0.0)) return std::numeric_limits<double>::infinity();
    return value_ * std::pow(degree, exponent_);
}

void MoveParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("contraction threshold delta must be positive");
    if (p0 < 0.0 || p1 < 0.0 || p01 < 0.0) throw ValidationError("loop redistribution fractions must be >= 0");
    if (std::abs(p0 + p1 + p01 - 1.0) > 1e-12) throw ValidationError("p0 + p1 + p01 must equal 1");
}

std::vector<ContractionCandidate> find_contractions(const QuotientGraph& g, const Realization& r, double delta) {
    if (!(delta > 0.0)) throw ValidationError("contraction threshold delta must be positive");
    std::vector<ContractionCandidate> out;
    const std::size_t n = g.vertex_count();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vector d = sub(r.positions[j], r.positions[i]);
            for_each_lattice_point(r.period, d, delta, [&](const Offset& gamma, const Vector& y) {
                out.push_back({i, j, gamma, norm(y)});
            });
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.distance < b.distance; });
    return out;
}

QuotientGraph apply_contraction(const QuotientGraph& g, const ContractionCandidate& c) {
    const std::size_t n = g.vertex_count();
    if (c.v0 >= n || c.v1 >= n || c.v0 == c.v1) throw ValidationError("contraction needs two distinct vertex orbits");
    if (c.offset.size() != g.dimension()) throw ValidationError("contraction offset has the wrong dimension");

    // Keep the smaller index. The copy of `hi` in cell s is identified with
    // `lo` in cell 0, so `hi` at cell c becomes the merged vertex at c - s.
    std::size_t lo = c.v0;
    std::size_t hi = c.v1;
    Offset s = c.offset;
    if (lo > hi) {
        std::swap(lo, hi);
        s = negated(s);
    }
    auto index = [&](std::size_t v) { return v == hi ? lo : (v > hi ? v - 1 : v); };
    auto cell = [&](std::size_t v, std::size_t k) { return v == hi ? -s[k] : 0; };

    std::vector<EdgeOrbit> edges;
    edges.reserve(g.edges().size());
    for (const auto& e : g.edges()) {
        EdgeOrbit f{index(e.tail), index(e.head), e.offset, e.weight};
        for (std::size_t k = 0; k < f.offset.size(); ++k) f.offset[k] += cell(e.head, k) - cell(e.tail, k);
        edges.push_back(std::move(f));
    }
    return build_graph(g.dimension(), n - 1, std::move(edges));
}

SplittingCandidate splitting_candidate(const QuotientGraph& g, const Realization& r, std::size_t v, const Vector& u,
                                       const Firmness& firmness) {
    if (v >= g.vertex_count()) throw ValidationError("vertex index out of range");
    if (u.size() != g.dimension()) throw ValidationError("split direction has the wrong dimension");
    const double un = norm(u);
    if (!(un > 0.0)) throw ValidationError("split direction must be nonzero");

    SplittingCandidate s;
    s.v = v;
    s.u = scaled(u, 1.0 / un);
    s.threshold = firmness(degree(g, v));
    s.darts = darts_at(g, v);
    s.side.reserve(s.darts.size());

    const TensionTensor t = local_tension(g, r, v);
    const SymmetricEigen eig = jacobi_eigen(t.matrix);
    s.lambda_max = eig.values.front();
    if (eig.values.size() > 1) s.eigen_gap = eig.values[0] - eig.values[1] > 1e-9 * std::abs(eig.values[0]);

    // A dart whose length is rounding noise next to the longest one (a
    // pendant neighbour sitting on v) has no meaningful side either.
    double longest = 0.0;
    for (const auto& d : s.darts)
        if (d.weight > 0.0 && !g.edges()[d.edge].is_true_loop()) longest = std::max(longest, norm(r.dart_vector(d)));
    for (const auto& d : s.darts) {
        if (g.edges()[d.edge].is_true_loop()) {
            s.side.push_back(-1);
            continue;
        }
        const Vector phi = r.dart_vector(d);
        const double proj = dot(s.u, phi);
        const double length = norm(phi);
        if (d.weight > 0.0 && (!(std::abs(proj) > 1e-9 * length) || !(length > 1e-12 * longest))) s.transversal = false;
        s.side.push_back(proj > 0.0 ? 1 : 0);
    }
    return s;
}

std::vector<SplittingCandidate> find_splittings(const QuotientGraph& g, const Realization& r, const Firmness& firmness) {
    std::vector<SplittingCandidate> out;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const TensionTensor t = local_tension(g, r, v);
        const SymmetricEigen eig = jacobi_eigen(t.matrix);
        if (eig.values.front() < firmness(degree(g, v))) continue;
        SplittingCandidate s = splitting_candidate(g, r, v, eig.vectors.column(0), firmness);
        s.eigen_gap = eig.values.size() < 2 || eig.values[0] - eig.values[1] > 1e-9 * std::abs(eig.values[0]);
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.margin() > b.margin(); });
    return out;
}

SplitResult apply_splitting(const QuotientGraph& g, const Realization& r, const SplittingCandidate& s,
                            const MoveParams& params) {
    params.validate();
    if (s.v >= g.vertex_count()) throw ValidationError("vertex index out of range");
    if (s.darts.size() != s.side.size()) throw ValidationError("malformed splitting candidate");
    if (!s.generic()) {
        throw NonGenericError("vertex " + std::to_string(s.v) +
                                  (s.eigen_gap ? " has a dart perpendicular to the split direction"
                                               : " has a repeated top eigenvalue"),
                              s.v);
    }

    const std::size_t v0 = s.v;
    const std::size_t v1 = g.vertex_count();
    std::map<std::pair<std::size_t, bool>, int> side_of;
    for (std::size_t k = 0; k < s.darts.size(); ++k) side_of[{s.darts[k].edge, s.darts[k].forward}] = s.side[k];
    auto end_vertex = [&](std::size_t edge, bool forward) { return side_of.at({edge, forward}) == 1 ? v1 : v0; };

    std::vector<EdgeOrbit> edges;
    edges.reserve(g.edges().size() + 2);
    const Offset zero(g.dimension(), 0);
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
        const EdgeOrbit& e = g.edges()[k];
        if (e.tail != s.v && e.head != s.v) {
            edges.push_back(e);
        } else if (e.is_true_loop()) {
            edges.push_back({v0, v0, zero, params.p0 * e.weight});
            edges.push_back({v1, v1, zero, params.p1 * e.weight});
            edges.push_back({v0, v1, zero, params.p01 * e.weight});
        } else {
            EdgeOrbit f = e;
            if (e.tail == s.v) f.tail = end_vertex(k, true);
            if (e.head == s.v) f.head = end_vertex(k, false);
            edges.push_back(std::move(f));
        }
    }

    SplitResult out{build_graph(g.dimension(), g.vertex_count() + 1, std::move(edges)), r, v0, v1};
    out.immediate.positions.push_back(r.positions[s.v]);
    return out;
}

double compatibility_lower_bound(double degree, double firmness) {
    if (!(degree > 0.0) || !(firmness > 0.0)) throw ValidationError("compatibility bound needs deg > 0 and K > 0");
    return std::sqrt(2.0 * firmness) / degree;
}

}  // namespace netelast
