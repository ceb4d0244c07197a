#include "netelast/solver.hpp"

#include <cmath>
#include <string>

#include "netelast/error.hpp"

namespace netelast {

namespace {

void check_compatible(const QuotientGraph& g, const PeriodMap& period) {
    if (period.dimension() != g.dimension()) {
        throw ValidationError("period dimension " + std::to_string(period.dimension()) +
                              " does not match graph dimension " + std::to_string(g.dimension()));
    }
}

}  // namespace

LaplacianSystem laplacian_system(const QuotientGraph& g, const PeriodMap& period) {
    check_compatible(g, period);
    const std::size_t n = g.vertex_count() - 1;
    const std::size_t N = g.dimension();
    LaplacianSystem sys{Matrix(n, n), Matrix(n, N)};
    for (const auto& e : g.edges()) {
        if (e.is_self_edge() || e.weight == 0.0) continue;
        const Vector rho = period.apply(e.offset);
        // dart tail -> head contributes w ρ(γ) to c_tail; the reverse dart
        // contributes -w ρ(γ) to c_head.
        if (e.tail > 0) {
            sys.b00(e.tail - 1, e.tail - 1) += e.weight;
            for (std::size_t k = 0; k < N; ++k) sys.rhs(e.tail - 1, k) += e.weight * rho[k];
        }
        if (e.head > 0) {
            sys.b00(e.head - 1, e.head - 1) += e.weight;
            for (std::size_t k = 0; k < N; ++k) sys.rhs(e.head - 1, k) -= e.weight * rho[k];
        }
        if (e.tail > 0 && e.head > 0) {
            sys.b00(e.tail - 1, e.head - 1) -= e.weight;
            sys.b00(e.head - 1, e.tail - 1) -= e.weight;
        }
    }
    return sys;
}

Realization harmonic_realize(const QuotientGraph& g, const PeriodMap& period) {
    check_compatible(g, period);
    if (!is_positively_connected(g)) {
        throw SingularSystemError("graph is not connected by positive-weight edges");
    }
    const std::size_t n = g.vertex_count() - 1;
    const std::size_t N = g.dimension();
    Realization r{std::vector<Vector>(g.vertex_count(), Vector(N, 0.0)), period};
    if (n == 0) return r;

    const LaplacianSystem sys = laplacian_system(g, period);
    const Cholesky chol(sys.b00);
    for (std::size_t k = 0; k < N; ++k) {
        const Vector x = chol.solve(sys.rhs.column(k));
        for (std::size_t i = 0; i < n; ++i) r.positions[i + 1][k] = x[i];
    }
    return r;
}

std::vector<Vector> harmonic_residuals(const QuotientGraph& g, const Realization& r) {
    const std::size_t N = g.dimension();
    std::vector<Vector> res(g.vertex_count(), Vector(N, 0.0));
    for (const auto& e : g.edges()) {
        if (e.is_self_edge()) continue;
        const Vector v = r.edge_vector(e);
        for (std::size_t k = 0; k < N; ++k) {
            res[e.tail][k] += e.weight * v[k];
            res[e.head][k] -= e.weight * v[k];
        }
    }
    return res;
}

double energy(const QuotientGraph& g, const Realization& r) {
    double s = 0.0;
    for (const auto& e : g.edges()) {
        if (e.is_true_loop()) continue;
        const Vector v = r.edge_vector(e);
        s += e.weight * dot(v, v);
    }
    return s;
}

TensionTensor local_tension(const QuotientGraph& g, const Realization& r, std::size_t v) {
    TensionTensor t{Matrix(g.dimension(), g.dimension())};
    for (const auto& d : darts_at(g, v)) {
        if (g.edges()[d.edge].is_true_loop()) continue;
        add_outer(t.matrix, r.dart_vector(d), d.weight);
    }
    return t;
}

TensionTensor global_tension(const QuotientGraph& g, const Realization& r) {
    TensionTensor t{Matrix(g.dimension(), g.dimension())};
    for (const auto& e : g.edges()) {
        if (e.is_true_loop()) continue;
        add_outer(t.matrix, r.edge_vector(e), e.weight);
    }
    return t;
}

TensionTensor per_weight_tension(const QuotientGraph& g, const Realization& r) {
    const double w = g.total_weight();
    if (!(w > 0.0)) throw ValidationError("per-weight tension needs positive total weight");
    TensionTensor t = global_tension(g, r);
    t.matrix *= 1.0 / w;
    return t;
}

Matrix ellipsoid_matrix(const QuotientGraph& g, const Realization& r) {
    const TensionTensor tw = per_weight_tension(g, r);
    const SymmetricEigen eig = jacobi_eigen(tw.matrix);
    const double top = eig.values.front();
    if (!(eig.values.back() > 1e-12 * top)) {
        throw NumericalError("per-weight tension is singular; the net is flat in some direction");
    }
    return symmetric_function(eig, [](double x) { return 1.0 / x; });
}

Realization apply_linear(const Realization& r, const Matrix& a) {
    if (std::abs(determinant(a)) == 0.0) throw ValidationError("linear map is singular");
    Realization out;
    out.positions.reserve(r.positions.size());
    for (const auto& x : r.positions) out.positions.push_back(a * x);
    out.period = PeriodMap(a * r.period.basis());
    return out;
}

TensionTensor conjugated(const TensionTensor& t, const Matrix& a) {
    return TensionTensor{a * t.matrix * a.transposed()};
}

Standardized standardize(const QuotientGraph& g, const PeriodMap& period) {
    const Realization h = harmonic_realize(g, period);
    const TensionTensor t = global_tension(g, h);
    const SymmetricEigen eig = jacobi_eigen(t.matrix);
    if (!(eig.values.back() > 1e-12 * eig.values.front())) {
        throw NumericalError("tension tensor is not positive definite; the net is flat in some direction");
    }
    Matrix s = symmetric_function(eig, [](double x) { return 1.0 / std::sqrt(x); });
    const double n = static_cast<double>(g.dimension());
    s *= std::pow(determinant(s), -1.0 / n);
    Realization out = apply_linear(h, s);
    return Standardized{std::move(out), std::move(s)};
}

}  // namespace netelast
