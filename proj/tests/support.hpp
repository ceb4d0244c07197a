#pragma once

// Shared helpers for the test suites: seeded random nets and an Eigen-based
// harmonic solve that does not go through the library's own solver.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "netelast/graph.hpp"
#include "netelast/linalg.hpp"

namespace testing {

using netelast::EdgeOrbit;
using netelast::Matrix;
using netelast::Offset;
using netelast::PeriodMap;
using netelast::QuotientGraph;
using netelast::Vector;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }

    Offset offset(std::size_t N, int span = 1) {
        Offset g(N);
        for (auto& c : g) c = integer(-span, span);
        return g;
    }

private:
    std::mt19937_64 engine_;
};

struct GraphOptions {
    std::size_t min_vertices = 2;
    std::size_t max_vertices = 6;
    std::size_t extra_edges = 4;
    bool integer_weights = false;
    bool loops = true;
    bool designated_edge = true;  // always include a positive (0, 1, 0) orbit
};

// A positively connected quotient graph. A random spanning tree keeps it
// connected; extra edges get random offsets so the lift spans R^N.
inline QuotientGraph random_graph(Rng& rng, std::size_t N, const GraphOptions& opt = {}) {
    const std::size_t n = opt.min_vertices + rng.index(opt.max_vertices - opt.min_vertices + 1);
    auto weight = [&] { return opt.integer_weights ? static_cast<double>(rng.integer(1, 3)) : rng.uniform(0.2, 2.0); };
    std::vector<EdgeOrbit> edges;
    if (opt.designated_edge && n >= 2) edges.push_back({0, 1, Offset(N, 0), weight()});
    for (std::size_t v = 1; v < n; ++v) {
        if (opt.designated_edge && v == 1) continue;
        edges.push_back({rng.index(v), v, rng.offset(N), weight()});
    }
    for (std::size_t k = 0; k < opt.extra_edges + N; ++k) {
        const std::size_t i = rng.index(n);
        const std::size_t j = rng.index(n);
        Offset g = rng.offset(N);
        if (i == j && netelast::is_zero(g)) g[rng.index(N)] = 1;
        edges.push_back({i, j, g, weight()});
    }
    // one unit lattice step per coordinate so the net is not degenerate
    for (std::size_t c = 0; c < N; ++c) {
        Offset g(N, 0);
        g[c] = 1;
        const std::size_t v = rng.index(n);
        edges.push_back({v, v, g, weight()});
    }
    if (opt.loops) {
        for (std::size_t v = 0; v < n; ++v) {
            if (rng.coin()) edges.push_back({v, v, Offset(N, 0), opt.integer_weights ? 2.0 * rng.integer(1, 2) : weight()});
        }
    }
    return netelast::build_graph(N, n, std::move(edges));
}

inline Matrix random_matrix(Rng& rng, std::size_t N, double spread) {
    Matrix a = Matrix::identity(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) a(i, j) += rng.uniform(-spread, spread);
    return a;
}

// Well-conditioned random period.
inline PeriodMap random_period(Rng& rng, std::size_t N) {
    while (true) {
        Matrix a = random_matrix(rng, N, 0.4);
        if (std::abs(netelast::determinant(a)) > 0.4) return PeriodMap(a);
    }
}

// Random map with determinant one.
inline Matrix random_unimodular(Rng& rng, std::size_t N) {
    while (true) {
        Matrix a = random_matrix(rng, N, 0.5);
        const double d = netelast::determinant(a);
        if (d > 0.3) return a * std::pow(d, -1.0 / static_cast<double>(N));
    }
}

inline Eigen::MatrixXd to_eigen(const Matrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

// Harmonic positions (x_0 = 0) from the weighted Laplacian assembled here.
inline std::vector<Vector> eigen_harmonic(const QuotientGraph& g, const PeriodMap& period) {
    const std::size_t n = g.vertex_count();
    const std::size_t N = g.dimension();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, N);
    const Eigen::MatrixXd rho = to_eigen(period.basis());
    for (const auto& e : g.edges()) {
        if (e.tail == e.head) continue;
        Eigen::VectorXd gam(N);
        for (std::size_t c = 0; c < N; ++c) gam(c) = e.offset[c];
        const Eigen::VectorXd shift = rho * gam;
        L(e.tail, e.tail) += e.weight;
        L(e.head, e.head) += e.weight;
        L(e.tail, e.head) -= e.weight;
        L(e.head, e.tail) -= e.weight;
        b.row(e.tail) += e.weight * shift.transpose();
        b.row(e.head) -= e.weight * shift.transpose();
    }
    std::vector<Vector> x(n, Vector(N, 0.0));
    if (n > 1) {
        const Eigen::MatrixXd sol = L.bottomRightCorner(n - 1, n - 1).ldlt().solve(b.bottomRows(n - 1));
        for (std::size_t v = 1; v < n; ++v)
            for (std::size_t c = 0; c < N; ++c) x[v][c] = sol(v - 1, c);
    }
    return x;
}

inline double relative_gap(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

}  // namespace testing
