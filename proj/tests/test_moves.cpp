#include "doctest.h"

#include <cmath>

#include "netelast/analysis.hpp"
#include "netelast/error.hpp"
#include "netelast/mechanics.hpp"
#include "netelast/moves.hpp"
#include "netelast/presets.hpp"
#include "netelast/solver.hpp"
#include "support.hpp"

using namespace netelast;
using testing::Rng;

namespace {

// Weights that are multiples of 1/8 keep every sum below exact.
QuotientGraph dyadic_graph(Rng& rng, std::size_t N) {
    QuotientGraph g = testing::random_graph(rng, N, {.integer_weights = true});
    std::vector<EdgeOrbit> edges = g.edges();
    for (auto& e : edges) e.weight = rng.integer(1, 24) / 8.0;
    return build_graph(N, g.vertex_count(), std::move(edges));
}

double weight_total(const QuotientGraph& g) {
    double s = 0.0;
    for (const auto& e : g.edges()) s += e.weight;
    return s;
}

// Move the representative of v to cell gamma.
QuotientGraph rebase(const QuotientGraph& g, std::size_t v, const Offset& gamma) {
    std::vector<EdgeOrbit> edges;
    for (auto e : g.edges()) {
        if (e.tail == v && e.head != v)
            for (std::size_t c = 0; c < gamma.size(); ++c) e.offset[c] += gamma[c];
        if (e.head == v && e.tail != v)
            for (std::size_t c = 0; c < gamma.size(); ++c) e.offset[c] -= gamma[c];
        edges.push_back(e);
    }
    return build_graph(g.dimension(), g.vertex_count(), std::move(edges));
}

// A random harmonic net and the split of its most tense vertex, with K set
// to that vertex's top eigenvalue so the vertex sits exactly at threshold.
struct Scenario {
    QuotientGraph graph;
    Realization realization;
    SplittingCandidate candidate;
    MoveParams params;
};

std::optional<Scenario> top_split(Rng& rng, QuotientGraph g, std::size_t N) {
    const Realization r = harmonic_realize(g, testing::random_period(rng, N));
    std::size_t best = 0;
    double top = -1.0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const double l = jacobi_eigen(local_tension(g, r, v).matrix).values[0];
        if (l > top) {
            top = l;
            best = v;
        }
    }
    MoveParams params;
    params.firmness = Firmness::constant(top);
    const auto eig = jacobi_eigen(local_tension(g, r, best).matrix);
    const SplittingCandidate c = splitting_candidate(g, r, best, eig.vectors.column(0), params.firmness);
    if (!c.generic()) return std::nullopt;
    return Scenario{std::move(g), r, c, params};
}

std::size_t count_sides(const SplittingCandidate& c, int side) {
    std::size_t k = 0;
    for (std::size_t d = 0; d < c.darts.size(); ++d) k += (c.side[d] == side && c.darts[d].weight > 0.0) ? 1 : 0;
    return k;
}

}  // namespace

TEST_CASE("hexagonal e3 contracts at lambda = l / delta") {
    const auto p = hexagonal_lattice(1.0, 1.0, 1.0);
    const Realization r0 = harmonic_realize(p.graph, p.period);
    const double delta = 0.8;
    const double lc = 1.0 / delta;
    const Realization before = apply_linear(r0, uniaxial_map(lc * (1 - 1e-9), 2, rotation_2d(0.0)));
    CHECK(find_contractions(p.graph, before, delta).empty());
    const Realization after = apply_linear(r0, uniaxial_map(lc * (1 + 1e-9), 2, rotation_2d(0.0)));
    const auto c = find_contractions(p.graph, after, delta);
    REQUIRE(c.size() == 1);
    CHECK(c[0].v0 == 0);
    CHECK(c[0].v1 == 1);
    CHECK(c[0].offset == Offset{0, -1});
    CHECK(c[0].distance == doctest::Approx(delta).epsilon(1e-8));

    const QuotientGraph x1 = apply_contraction(p.graph, c[0]);
    CHECK(x1.vertex_count() == 1);
    std::size_t loops = 0;
    for (const auto& e : x1.edges()) {
        if (e.is_true_loop()) {
            ++loops;
            CHECK(e.weight == 3.0);  // 2 w0 + w1
        }
    }
    CHECK(loops == 1);
    CHECK(x1.edges().size() == 3);  // loop plus the two square-lattice directions
}

TEST_CASE("hexagonal contracted net splits at sqrt(K / 3)") {
    const auto p = hexagonal_lattice(1.0, 1.0, 1.0);
    const Realization r0 = harmonic_realize(p.graph, p.period);
    const auto c = find_contractions(p.graph, apply_linear(r0, uniaxial_map(1.4, 2, rotation_2d(0.0))), 1.0 / 1.3);
    REQUIRE(c.size() == 1);
    const QuotientGraph x1 = apply_contraction(p.graph, c[0]);
    const double K = 8.0;
    const Realization ref = harmonic_realize(x1, p.period);
    const double ls = std::sqrt(K / 3.0);
    CHECK(find_splittings(x1, apply_linear(ref, uniaxial_map(ls * (1 - 1e-9), 2, rotation_2d(0.0))),
                          Firmness::constant(K)).empty());
    const auto s = find_splittings(x1, apply_linear(ref, uniaxial_map(ls * (1 + 1e-9), 2, rotation_2d(0.0))),
                                   Firmness::constant(K));
    REQUIRE(s.size() == 1);
    CHECK(s[0].lambda_max == doctest::Approx(K).epsilon(1e-8));
    CHECK(std::abs(s[0].u[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s[0].generic());
}

TEST_CASE("firmness presets") {
    CHECK(Firmness::constant(3.0)(7.0) == 3.0);
    CHECK(Firmness::linear(0.5)(4.0) == 2.0);
    CHECK(Firmness::power(100.0, -2.0)(5.0) == doctest::Approx(4.0));
    CHECK(std::isinf(Firmness::power(1.0, -1.0)(0.0)));
    CHECK_THROWS_AS(Firmness::constant(0.0), ValidationError);
    CHECK_THROWS_AS(Firmness::linear(-1.0), ValidationError);
    MoveParams bad;
    bad.p0 = 0.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK(compatibility_lower_bound(4.0, 8.0) == doctest::Approx(1.0));
}

TEST_CASE("splitting a true loop redistributes its weight") {
    // square lattice, loop weight 2, split along a direction tilted off both axes
    PresetParams sq;
    sq.w0 = 2.0;
    const auto p = lattice_preset(PresetName::square, sq);
    Realization r = harmonic_realize(p.graph, p.period);
    r = apply_linear(r, uniaxial_map(1.5, 2, rotation_2d(0.0)));
    const auto c = splitting_candidate(p.graph, r, 0, {std::cos(0.3), std::sin(0.3)}, Firmness::constant(1.0));
    REQUIRE(c.generic());
    MoveParams params;
    const SplitResult s = apply_splitting(p.graph, r, c, params);
    CHECK(s.v0 == 0);
    CHECK(s.v1 == 1);
    CHECK(s.graph.vertex_count() == 2);
    double loop0 = 0, loop1 = 0, link = 0;
    for (const auto& e : s.graph.edges()) {
        if (e.is_true_loop() && e.tail == 0) loop0 += e.weight;
        if (e.is_true_loop() && e.tail == 1) loop1 += e.weight;
        if (e.tail == 0 && e.head == 1 && is_zero(e.offset)) link += e.weight;
    }
    CHECK(loop0 == 0.5);
    CHECK(loop1 == 0.5);
    CHECK(link == 1.0);
    // the immediate realization keeps both halves at the old position
    CHECK(s.immediate.positions[0] == r.positions[0]);
    CHECK(s.immediate.positions[1] == r.positions[0]);
    CHECK(energy(s.graph, s.immediate) == doctest::Approx(energy(p.graph, r)).epsilon(1e-14));
}

TEST_CASE("darts are assigned by the sign of their projection") {
    Rng rng(41);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 50; ++trial) {
        const std::size_t N = 1 + rng.index(3);
        auto s = top_split(rng, testing::random_graph(rng, N), N);
        if (!s) continue;
        ++checked;
        for (std::size_t d = 0; d < s->candidate.darts.size(); ++d) {
            const auto& dart = s->candidate.darts[d];
            const Vector v = s->realization.dart_vector(dart);
            if (s->graph.edges()[dart.edge].is_true_loop()) {
                CHECK(s->candidate.side[d] == -1);
            } else {
                CHECK(s->candidate.side[d] == (dot(v, s->candidate.u) > 0.0 ? 1 : 0));
            }
        }
        // harmonic at v: a generic top split has darts on both sides
        CHECK(count_sides(s->candidate, 0) > 0);
        CHECK(count_sides(s->candidate, 1) > 0);
    }
    CHECK(checked == 50);
}

TEST_CASE("non-generic candidates are refused") {
    // square lattice at the standard period: isotropic local tension
    PresetParams sq;
    const auto p = lattice_preset(PresetName::square, sq);
    const Realization r = harmonic_realize(p.graph, p.period);
    const auto found = find_splittings(p.graph, r, Firmness::constant(1.0));
    REQUIRE(found.size() == 1);
    CHECK_FALSE(found[0].eigen_gap);
    CHECK_THROWS_AS(apply_splitting(p.graph, r, found[0], MoveParams{}), NonGenericError);

    // a dart perpendicular to the split direction
    const Realization stretched = apply_linear(r, uniaxial_map(1.5, 2, rotation_2d(0.0)));
    const auto c = splitting_candidate(p.graph, stretched, 0, {1.0, 0.0}, Firmness::constant(1.0));
    CHECK_FALSE(c.transversal);
    try {
        apply_splitting(p.graph, stretched, c, MoveParams{});
        FAIL("expected NonGenericError");
    } catch (const NonGenericError& e) {
        CHECK(e.vertex() == 0);
    }

    // a pendant neighbour sits on its vertex, so its dart has no side
    const auto pendant = build_graph(2, 2, {{0, 0, {1, 0}, 1.0}, {0, 0, {0, 1}, 2.0}, {0, 1, {0, 0}, 1.0}});
    const Realization pr = harmonic_realize(pendant, PeriodMap(Matrix(2, 2, {1.0, 0.3, 0.0, 1.1})));
    CHECK(norm(sub(pr.positions[1], pr.positions[0])) < 1e-12);
    CHECK_FALSE(splitting_candidate(pendant, pr, 0, {std::cos(0.4), std::sin(0.4)}, Firmness::constant(1.0)).transversal);
}

TEST_CASE("moves conserve total weight exactly") {
    Rng rng(42);
    int splits = 0, contractions = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t N = 1 + rng.index(3);
        const QuotientGraph g = dyadic_graph(rng, N);
        const double total = weight_total(g);
        if (auto s = top_split(rng, g, N)) {
            const SplitResult out = apply_splitting(s->graph, s->realization, s->candidate, s->params);
            CHECK(weight_total(out.graph) == total);
            ++splits;
        }
        const Realization r = harmonic_realize(g, testing::random_period(rng, N));
        const auto c = find_contractions(g, r, 1.5);
        if (!c.empty()) {
            CHECK(weight_total(apply_contraction(g, c[rng.index(c.size())])) == total);
            ++contractions;
        }
    }
    CHECK(splits >= 100);
    CHECK(contractions >= 100);
}

TEST_CASE("contracting the two halves of a split restores the graph") {
    Rng rng(43);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 100; ++trial) {
        const std::size_t N = 1 + rng.index(3);
        auto s = top_split(rng, dyadic_graph(rng, N), N);
        if (!s) continue;
        ++checked;
        const SplitResult out = apply_splitting(s->graph, s->realization, s->candidate, s->params);
        const QuotientGraph back = apply_contraction(out.graph, {out.v0, out.v1, Offset(N, 0), 0.0});
        // zero-weight loops left by p0 = 0 or p1 = 0 would not show here; the defaults are positive
        CHECK(back == s->graph);
    }
    CHECK(checked == 100);
}

TEST_CASE("a generic split lowers the harmonic energy") {
    Rng rng(44);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 100; ++trial) {
        const std::size_t N = 1 + rng.index(3);
        auto s = top_split(rng, testing::random_graph(rng, N), N);
        if (!s) continue;
        ++checked;
        const SplitResult out = apply_splitting(s->graph, s->realization, s->candidate, s->params);
        const double before = energy(s->graph, s->realization);
        const double after = energy(out.graph, harmonic_realize(out.graph, s->realization.period));
        CHECK(after < before);
    }
    CHECK(checked == 100);
}

TEST_CASE("splitting commutes with moving a representative to another cell") {
    Rng rng(45);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 100; ++trial) {
        const std::size_t N = 1 + rng.index(3);
        auto s = top_split(rng, testing::random_graph(rng, N), N);
        if (!s) continue;
        ++checked;
        const std::size_t v = s->candidate.v;
        const Offset gamma = rng.offset(N, 2);

        const SplitResult direct = apply_splitting(s->graph, s->realization, s->candidate, s->params);
        QuotientGraph expected = rebase(rebase(direct.graph, direct.v0, gamma), direct.v1, gamma);

        const QuotientGraph moved = rebase(s->graph, v, gamma);
        Realization r = s->realization;
        const Vector shift = r.period.apply(gamma);
        r.positions[v] = add(r.positions[v], shift);
        const SplittingCandidate c = splitting_candidate(moved, r, v, s->candidate.u, s->params.firmness);
        REQUIRE(c.generic());
        const SplitResult via = apply_splitting(moved, r, c, s->params);
        CHECK(via.graph == expected);
    }
    CHECK(checked == 100);
}

TEST_CASE("split edge length respects the compatibility bound for integer weights") {
    Rng rng(46);
    int checked = 0;
    for (int trial = 0; trial < 600 && checked < 100; ++trial) {
        const std::size_t N = 1 + rng.index(3);
        auto s = top_split(rng, testing::random_graph(rng, N, {.integer_weights = true}), N);
        if (!s) continue;
        ++checked;
        const SplitResult out = apply_splitting(s->graph, s->realization, s->candidate, s->params);
        const Realization full = harmonic_realize(out.graph, s->realization.period);
        const double length = norm(sub(full.positions[out.v1], full.positions[out.v0]));
        const double deg = degree(s->graph, s->candidate.v);
        CHECK(length >= compatibility_lower_bound(deg, s->candidate.lambda_max) - 1e-10);
    }
    CHECK(checked == 100);
}
