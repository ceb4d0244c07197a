#pragma once

// Weight-variation and plasticity analytics: the reciprocal law for the
// length of a designated edge as its weight varies, auxiliary realizations,
// single-vertex split closed forms, lattice-sum loss ratios and blends.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "netelast/graph.hpp"
#include "netelast/linalg.hpp"
#include "netelast/solver.hpp"

namespace netelast {

// Φ(e) = z / (w + W) for the edge (v0, v1, 0) of weight w.
struct LossFit {
    std::size_t v0 = 0;
    std::size_t v1 = 0;
    Vector z;
    std::optional<double> W;   // undefined when z = 0
    double residual = 0.0;     // |Φ_c - z/(w_c + W)| on the validation probe
    double relative_residual = 0.0;
};

// The graph with the weight of orbit (v0, v1, 0) replaced by w.
QuotientGraph with_edge_weight(const QuotientGraph& g, std::size_t v0, std::size_t v1, double w);

// x_{v1} - x_{v0} of the harmonic realization.
Vector designated_edge_vector(const QuotientGraph& g, const PeriodMap& period, std::size_t v0, std::size_t v1);

LossFit extract_zW(const QuotientGraph& g, const PeriodMap& period, std::size_t v0, std::size_t v1,
                   std::array<double, 3> probes);

// b11 - w100: total weight of the non-self darts at v1 other than the designated edge.
double weight_bound(const QuotientGraph& g, std::size_t v0, std::size_t v1);

struct LossIdentityReport {
    double tensor_gap_deviation = 0.0;  // relative to |T(contracted)|
    double energy_gap_deviation = 0.0;  // relative to E(contracted)
    TensionTensor tension;               // at weight w
    TensionTensor contracted_tension;
    double energy = 0.0;
    double contracted_energy = 0.0;
};

LossIdentityReport verify_loss_identity(const QuotientGraph& g, const PeriodMap& period, const LossFit& fit, double w);

// Positions of the merged net pulled back to the vertices of g: every
// vertex sits where its image in the contraction of (v0, v1, 0) sits.
std::vector<Vector> contracted_anchor(const QuotientGraph& g, const PeriodMap& period, std::size_t v0, std::size_t v1);

// Everything fixed at `anchored` except v1, which moves to the weighted mean
// of its neighbours (self-edges excluded).
Realization auxiliary_realization(const QuotientGraph& g, const PeriodMap& period, std::size_t v1,
                                  const std::vector<Vector>& anchored);

// One lattice edge of a single-vertex net: the orbit joining 0 and `index`.
struct LatticeEdge {
    Offset index;
    double weight = 0.0;
};

// Membership in I, where Z^N = I ⊔ -I ⊔ {0}.
using IndexSet = std::function<bool(const Offset&)>;

// I_u plus the lexicographically positive points on the boundary hyperplane.
IndexSet half_space(const PeriodMap& period, const Vector& u);

struct SingleVertexSplit {
    Vector x;            // position of v1 with v0 at the origin
    Vector z;            // Σ_I w_i v_i
    double W = 0.0;      // p a + Σ_I w_i
    double energy0 = 0.0;
    double energy_drop = 0.0;
    double ratio = 0.0;
};

// Split the vertex of a single-vertex net with loop weight `loop` so that the
// edges indexed by I end at v1; a fraction p of the loop becomes the new edge.
SingleVertexSplit single_vertex_split(const std::vector<LatticeEdge>& edges, const PeriodMap& period,
                                      const IndexSet& in_I, double loop, double p);

// Weight as a function of the edge vector.
struct WeightFunction {
    enum class Kind { gaussian, gaussian_blend, custom };

    Kind kind = Kind::gaussian;
    double sigma = 1.0;   // gaussian; gaussian_blend: first component
    double sigma1 = 1.0;  // gaussian_blend: second component
    double mix = 0.0;     // gaussian_blend: (1 - mix) F_sigma + mix F_sigma1
    std::function<double(std::span<const double>)> custom;

    static WeightFunction gaussian(double sigma);
    static WeightFunction gaussian_blend(double sigma0, double sigma1, double mix);

    [[nodiscard]] double operator()(std::span<const double> x) const;
};

// Normalized N-dimensional Gaussian density.
double gaussian_density(std::span<const double> x, double sigma);

struct RatioSample {
    double s = 0.0;
    double ratio = 0.0;
    double radius = 0.0;
    std::optional<double> refined;  // the same sum at twice the radius
};

// R(s, p) for weights w_i = F(s v_i) on a single-vertex net with loop weight
// F(0). A radius of 0 picks one from the Gaussian tail bound.
std::vector<RatioSample> limit_ratio(const WeightFunction& f, const PeriodMap& period, const Vector& u, double p,
                                     const std::vector<double>& s_grid, double radius = 0.0, bool refine = false);

// Lattice radius beyond which the Gaussian-weighted second moment has
// relative tail below `tail` (never less than twice the longest basis vector).
double gaussian_truncation_radius(const PeriodMap& period, double sigma, double tail = 1e-10);

// Q(a, x) for half-integer or integer a.
double upper_regularized_gamma(double a, double x);

struct BlendComponent {
    Vector z;
    double W = 0.0;
    double energy = 0.0;
    double ratio = 0.0;
};

struct BlendResult {
    BlendComponent first;
    BlendComponent second;
    std::vector<std::pair<double, double>> curve;  // (s, R_s)
    double s_hat = 0.0;
    double ratio_at_s_hat = 0.0;
    double grid_argmin = 0.0;
};

BlendComponent blend_component(const std::vector<LatticeEdge>& edges, const PeriodMap& period, const IndexSet& in_I,
                               double loop, double p);

// R_s for w_s = (1 - s) w0 + s w1, evaluated from the two components.
double blend_ratio(const BlendComponent& a, const BlendComponent& b, double s);

BlendResult blend_analysis(const BlendComponent& a, const BlendComponent& b, const std::vector<double>& s_grid);

// lim R_s for two Gaussian weight tables with σ1 = μ σ0 as σ0 grows.
double gaussian_blend_limit(std::size_t N, double mu, double s);

// Tables for the cube-lattice example: edges ± m e_k of weight 1.
std::vector<LatticeEdge> cube_edges(std::size_t N, int m);

}  // namespace netelast
