#include "netelast/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "netelast/error.hpp"
#include "netelast/moves.hpp"

namespace netelast {

namespace {

void check_pair(const QuotientGraph& g, std::size_t v0, std::size_t v1) {
    if (v0 >= g.vertex_count() || v1 >= g.vertex_count() || v0 == v1) {
        throw ValidationError("designated edge must join two distinct vertex orbits");
    }
}

double max_basis_norm(const PeriodMap& period) {
    double m = 0.0;
    for (std::size_t k = 0; k < period.dimension(); ++k) m = std::max(m, norm(period.basis().column(k)));
    return m;
}

// v_i oriented into I.
Vector oriented(const PeriodMap& period, const IndexSet& in_I, const Offset& i) {
    if (is_zero(i)) throw ValidationError("lattice edge at the zero index; use the loop weight");
    Vector v = period.apply(i);
    if (!in_I(i)) {
        if (!in_I(negated(i))) throw ValidationError("index set must contain exactly one of i and -i");
        v = scaled(v, -1.0);
    }
    return v;
}

}  // namespace

QuotientGraph with_edge_weight(const QuotientGraph& g, std::size_t v0, std::size_t v1, double w) {
    check_pair(g, v0, v1);
    const std::size_t a = std::min(v0, v1);
    const std::size_t b = std::max(v0, v1);
    std::vector<EdgeOrbit> edges;
    for (const auto& e : g.edges())
        if (!(e.tail == a && e.head == b && is_zero(e.offset))) edges.push_back(e);
    edges.push_back({a, b, Offset(g.dimension(), 0), w});
    return build_graph(g.dimension(), g.vertex_count(), std::move(edges));
}

Vector designated_edge_vector(const QuotientGraph& g, const PeriodMap& period, std::size_t v0, std::size_t v1) {
    check_pair(g, v0, v1);
    const Realization r = harmonic_realize(g, period);
    return sub(r.positions[v1], r.positions[v0]);
}

LossFit extract_zW(const QuotientGraph& g, const PeriodMap& period, std::size_t v0, std::size_t v1,
                   std::array<double, 3> probes) {
    check_pair(g, v0, v1);
    const auto [wa, wb, wc] = probes;
    if (wa == wb || wa == wc || wb == wc) throw ValidationError("probe weights must be distinct");
    const Vector da = designated_edge_vector(with_edge_weight(g, v0, v1, wa), period, v0, v1);
    const Vector db = designated_edge_vector(with_edge_weight(g, v0, v1, wb), period, v0, v1);
    const Vector dc = designated_edge_vector(with_edge_weight(g, v0, v1, wc), period, v0, v1);

    LossFit fit{v0, v1, Vector(g.dimension(), 0.0), std::nullopt, 0.0, 0.0};
    const double na = norm(da);
    const double nb = norm(db);
    const double scale = max_basis_norm(period);
    if (std::max(na, nb) <= 1e-12 * scale) {
        fit.residual = norm(dc);
        fit.relative_residual = fit.residual / scale;
        return fit;
    }
    // Φ_a and Φ_b are positive multiples of the same z.
    if (dot(da, db) <= 0.0 || norm(sub(scaled(da, 1.0 / na), scaled(db, 1.0 / nb))) > 1e-7) {
        throw NumericalError("designated edge vectors are not collinear across probes");
    }
    const double r = na / nb;
    if (std::abs(1.0 - r) <= 1e-14) throw NumericalError("probe responses are indistinguishable");
    const double W = (r * wa - wb) / (1.0 - r);
    fit.W = W;
    fit.z = scaled(da, wa + W);
    const Vector predicted = scaled(fit.z, 1.0 / (wc + W));
    fit.residual = norm(sub(dc, predicted));
    fit.relative_residual = fit.residual / std::max(norm(dc), 1e-300);
    return fit;
}

double weight_bound(const QuotientGraph& g, std::size_t v0, std::size_t v1) {
    check_pair(g, v0, v1);
    double b = 0.0;
    double designated = 0.0;
    for (const auto& d : darts_at(g, v1)) {
        if (d.terminal == v1) continue;
        b += d.weight;
        if (d.terminal == v0 && is_zero(d.offset)) designated += d.weight;
    }
    return b - designated;
}

LossIdentityReport verify_loss_identity(const QuotientGraph& g, const PeriodMap& period, const LossFit& fit, double w) {
    const QuotientGraph x = with_edge_weight(g, fit.v0, fit.v1, w);
    const QuotientGraph xc = apply_contraction(x, {fit.v0, fit.v1, Offset(g.dimension(), 0), 0.0});
    const Realization r = harmonic_realize(x, period);
    const Realization rc = harmonic_realize(xc, period);

    LossIdentityReport rep;
    rep.tension = global_tension(x, r);
    rep.contracted_tension = global_tension(xc, rc);
    rep.energy = energy(x, r);
    rep.contracted_energy = energy(xc, rc);

    Matrix predicted(g.dimension(), g.dimension());
    double predicted_energy = 0.0;
    if (fit.W) {
        const double denom = w + *fit.W;
        add_outer(predicted, fit.z, 1.0 / denom);
        const Vector phi = sub(r.positions[fit.v1], r.positions[fit.v0]);
        predicted_energy = denom * dot(phi, phi);
    }
    const Matrix gap = rep.contracted_tension.matrix - rep.tension.matrix;
    const double tn = std::max(rep.contracted_tension.matrix.frobenius_norm(), 1e-300);
    rep.tensor_gap_deviation = (gap - predicted).frobenius_norm() / tn;
    rep.energy_gap_deviation =
        std::abs(rep.contracted_energy - rep.energy - predicted_energy) / std::max(rep.contracted_energy, 1e-300);
    return rep;
}

std::vector<Vector> contracted_anchor(const QuotientGraph& g, const PeriodMap& period, std::size_t v0, std::size_t v1) {
    check_pair(g, v0, v1);
    const QuotientGraph xc = apply_contraction(g, {v0, v1, Offset(g.dimension(), 0), 0.0});
    const Realization rc = harmonic_realize(xc, period);
    const std::size_t lo = std::min(v0, v1);
    const std::size_t hi = std::max(v0, v1);
    std::vector<Vector> out;
    out.reserve(g.vertex_count());
    for (std::size_t k = 0; k < g.vertex_count(); ++k) out.push_back(rc.positions[k == hi ? lo : (k > hi ? k - 1 : k)]);
    return out;
}

Realization auxiliary_realization(const QuotientGraph& g, const PeriodMap& period, std::size_t v1,
                                  const std::vector<Vector>& anchored) {
    if (v1 >= g.vertex_count()) throw ValidationError("vertex index out of range");
    if (anchored.size() != g.vertex_count()) throw ValidationError("one anchored position per vertex is required");
    Realization r{anchored, period};
    Vector sum(g.dimension(), 0.0);
    double total = 0.0;
    for (const auto& d : darts_at(g, v1)) {
        if (d.terminal == v1 || d.weight == 0.0) continue;
        const Vector y = add(anchored[d.terminal], period.apply(d.offset));
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += d.weight * y[k];
        total += d.weight;
    }
    if (!(total > 0.0)) throw ValidationError("vertex has no positive-weight neighbours");
    r.positions[v1] = scaled(sum, 1.0 / total);
    return r;
}

IndexSet half_space(const PeriodMap& period, const Vector& u) {
    if (u.size() != period.dimension() || !(norm(u) > 0.0)) throw ValidationError("half-space normal must be a nonzero N-vector");
    return [period, u](const Offset& i) {
        const Vector v = period.apply(i);
        const double d = dot(u, v);
        const double tol = 1e-12 * norm(u) * norm(v);
        if (d > tol) return true;
        if (d < -tol) return false;
        for (int c : i)
            if (c != 0) return c > 0;
        return false;
    };
}

SingleVertexSplit single_vertex_split(const std::vector<LatticeEdge>& edges, const PeriodMap& period,
                                      const IndexSet& in_I, double loop, double p) {
    if (loop < 0.0 || p < 0.0 || p > 1.0) throw ValidationError("loop weight must be >= 0 and p in [0, 1]");
    const std::size_t N = period.dimension();
    SingleVertexSplit out;
    out.z.assign(N, 0.0);
    double sum = 0.0;
    for (const auto& e : edges) {
        if (e.index.size() != N) throw ValidationError("lattice edge index has the wrong dimension");
        if (e.weight < 0.0) throw ValidationError("lattice edge weight must be >= 0");
        const Vector v = oriented(period, in_I, e.index);
        for (std::size_t k = 0; k < N; ++k) out.z[k] += e.weight * v[k];
        sum += e.weight;
        out.energy0 += e.weight * dot(v, v);
    }
    out.W = p * loop + sum;
    if (!(out.W > 0.0)) throw ValidationError("the split side carries no weight");
    if (!(out.energy0 > 0.0)) throw ValidationError("single-vertex net has zero energy");
    out.x = scaled(out.z, 1.0 / out.W);
    out.energy_drop = dot(out.z, out.z) / out.W;
    out.ratio = out.energy_drop / out.energy0;
    return out;
}

double gaussian_density(std::span<const double> x, double sigma) {
    const double n = static_cast<double>(x.size());
    const double s2 = sigma * sigma;
    return std::pow(2.0 * std::numbers::pi * s2, -0.5 * n) * std::exp(-dot(x, x) / (2.0 * s2));
}

WeightFunction WeightFunction::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
    WeightFunction f;
    f.kind = Kind::gaussian;
    f.sigma = sigma;
    return f;
}

WeightFunction WeightFunction::gaussian_blend(double sigma0, double sigma1, double mix) {
    if (!(sigma0 > 0.0) || !(sigma1 > 0.0)) throw ValidationError("sigma must be positive");
    if (mix < 0.0 || mix > 1.0) throw ValidationError("blend fraction must lie in [0, 1]");
    WeightFunction f;
    f.kind = Kind::gaussian_blend;
    f.sigma = sigma0;
    f.sigma1 = sigma1;
    f.mix = mix;
    return f;
}

double WeightFunction::operator()(std::span<const double> x) const {
    switch (kind) {
        case Kind::gaussian: return gaussian_density(x, sigma);
        case Kind::gaussian_blend: return (1.0 - mix) * gaussian_density(x, sigma) + mix * gaussian_density(x, sigma1);
        case Kind::custom: return custom(x);
    }
    return 0.0;
}

double upper_regularized_gamma(double a, double x) {
    if (x < 0.0) throw ValidationError("gamma argument must be >= 0");
    const double twice = 2.0 * a;
    if (!(a > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
        throw ValidationError("only integer and half-integer orders are supported");
    }
    // Q(a + 1, x) = Q(a, x) + x^a e^{-x} / Γ(a + 1)
    const bool half = static_cast<long>(std::round(twice)) % 2 == 1;
    double b = half ? 0.5 : 1.0;
    double q = half ? std::erfc(std::sqrt(x)) : std::exp(-x);
    while (b < a - 1e-12) {
        if (x > 0.0) q += std::exp(b * std::log(x) - x - std::lgamma(b + 1.0));
        b += 1.0;
    }
    return q;
}

double gaussian_truncation_radius(const PeriodMap& period, double sigma, double tail) {
    if (!(sigma > 0.0) || !(tail > 0.0)) throw ValidationError("sigma and tail must be positive");
    const double a = 0.5 * static_cast<double>(period.dimension()) + 1.0;
    double hi = 1.0;
    while (upper_regularized_gamma(a, hi) >= tail) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (upper_regularized_gamma(a, mid) >= tail ? lo : hi) = mid;
    }
    return std::max(sigma * std::sqrt(2.0 * hi), 2.0 * max_basis_norm(period));
}

namespace {

double lattice_ratio(const WeightFunction& f, const PeriodMap& period, const IndexSet& in_I, double p, double s,
                     double radius) {
    const std::size_t N = period.dimension();
    const Vector origin(N, 0.0);
    double s0 = 0.0;
    double s2 = 0.0;
    Vector s1(N, 0.0);
    for_each_lattice_point(period, origin, radius, [&](const Offset& i, const Vector& v) {
        if (is_zero(i) || !in_I(i)) return;
        const double w = f(scaled(v, s));
        s0 += w;
        s2 += w * dot(v, v);
        for (std::size_t k = 0; k < N; ++k) s1[k] += w * v[k];
    });
    const double f0 = f(origin);
    if (s0 == 0.0) {
        if (p * f0 > 0.0) return 0.0;
        throw NumericalError("all lattice weights vanish at s = " + std::to_string(s));
    }
    if (!std::isfinite(s2)) throw NumericalError("lattice sum diverges at s = " + std::to_string(s));
    return dot(s1, s1) / ((p * f0 + s0) * s2);
}

}  // namespace

std::vector<RatioSample> limit_ratio(const WeightFunction& f, const PeriodMap& period, const Vector& u, double p,
                                     const std::vector<double>& s_grid, double radius, bool refine) {
    if (p < 0.0 || p > 1.0) throw ValidationError("p must lie in [0, 1]");
    const IndexSet in_I = half_space(period, u);
    std::vector<RatioSample> out;
    for (double s : s_grid) {
        if (!(s > 0.0)) throw ValidationError("scale s must be positive");
        double rad = radius;
        if (rad <= 0.0) {
            if (f.kind == WeightFunction::Kind::custom) throw ValidationError("custom weight functions need an explicit radius");
            const double sigma = f.kind == WeightFunction::Kind::gaussian ? f.sigma : std::max(f.sigma, f.sigma1);
            rad = gaussian_truncation_radius(period, sigma / s);
        }
        RatioSample r{s, lattice_ratio(f, period, in_I, p, s, rad), rad, std::nullopt};
        if (refine) r.refined = lattice_ratio(f, period, in_I, p, s, 2.0 * rad);
        out.push_back(r);
    }
    return out;
}

BlendComponent blend_component(const std::vector<LatticeEdge>& edges, const PeriodMap& period, const IndexSet& in_I,
                               double loop, double p) {
    const SingleVertexSplit s = single_vertex_split(edges, period, in_I, loop, p);
    return BlendComponent{s.z, s.W, s.energy0, s.ratio};
}

double blend_ratio(const BlendComponent& a, const BlendComponent& b, double s) {
    if (s < 0.0 || s > 1.0) throw ValidationError("blend fraction must lie in [0, 1]");
    Vector z(a.z.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = (1.0 - s) * a.z[k] + s * b.z[k];
    const double W = (1.0 - s) * a.W + s * b.W;
    const double E = (1.0 - s) * a.energy + s * b.energy;
    return dot(z, z) / (W * E);
}

BlendResult blend_analysis(const BlendComponent& a, const BlendComponent& b, const std::vector<double>& s_grid) {
    if (!(a.energy > 0.0) || !(b.energy > 0.0) || !(a.W > 0.0) || !(b.W > 0.0)) {
        throw ValidationError("blend components need positive energy and weight");
    }
    if (a.z.size() != b.z.size()) throw ValidationError("blend components have different dimensions");
    BlendResult out{a, b, {}, 0.0, 0.0, 0.0};
    double best = 0.0;
    for (double s : s_grid) {
        const double r = blend_ratio(a, b, s);
        out.curve.emplace_back(s, r);
        if (out.curve.size() == 1 || r < best) {
            best = r;
            out.grid_argmin = s;
        }
    }
    const double ra = std::sqrt(a.W * a.energy);
    const double rb = std::sqrt(b.W * b.energy);
    out.s_hat = ra / (ra + rb);
    out.ratio_at_s_hat = blend_ratio(a, b, out.s_hat);
    return out;
}

double gaussian_blend_limit(std::size_t N, double mu, double s) {
    if (N < 1 || !(mu > 0.0)) throw ValidationError("need N >= 1 and mu > 0");
    const double num = 1.0 - s + s * mu;
    return 2.0 * num * num / (static_cast<double>(N) * std::numbers::pi * (1.0 - s + s * mu * mu));
}

std::vector<LatticeEdge> cube_edges(std::size_t N, int m) {
    if (N < 1 || m < 1) throw ValidationError("cube lattice needs N >= 1 and m >= 1");
    std::vector<LatticeEdge> out;
    for (std::size_t k = 0; k < N; ++k) {
        Offset i(N, 0);
        i[k] = m;
        out.push_back({i, 1.0});
    }
    return out;
}

}  // namespace netelast
