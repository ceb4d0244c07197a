#pragma once

// Contraction and splitting of vertex orbits.

#include <cstddef>
#include <utility>
#include <vector>

#include "netelast/graph.hpp"
#include "netelast/linalg.hpp"

namespace netelast {

// Merge v0 with the copy of v1 in cell `offset`.
struct ContractionCandidate {
    std::size_t v0 = 0;
    std::size_t v1 = 0;
    Offset offset;
    double distance = 0.0;  // |x_{v1} + ρ(offset) - x_{v0}|
};

// Degree-dependent splitting threshold K_d.
class Firmness {
public:
    enum class Kind { constant, linear, power };

    static Firmness constant(double k);
    static Firmness linear(double kappa);             // K_d = kappa * d
    static Firmness power(double k, double exponent);  // K_d = k * d^exponent

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double parameter() const { return value_; }
    [[nodiscard]] double exponent() const { return exponent_; }
    [[nodiscard]] double operator()(double degree) const;

private:
    Firmness(Kind kind, double value, double exponent) : kind_(kind), value_(value), exponent_(exponent) {}

    Kind kind_ = Kind::constant;
    double value_ = 1.0;
    double exponent_ = 0.0;
};

struct MoveParams {
    double delta = 0.1;
    Firmness firmness = Firmness::constant(1.0);
    double p0 = 0.25;
    double p1 = 0.25;
    double p01 = 0.5;

    // Throws ValidationError unless δ > 0 and p0 + p1 + p01 = 1 (to 1e-12).
    void validate() const;
};

struct SplittingCandidate {
    std::size_t v = 0;
    double lambda_max = 0.0;
    double threshold = 0.0;  // K_deg(v)
    Vector u;                // unit eigenvector for lambda_max
    std::vector<Dart> darts; // darts_at(v)
    std::vector<int> side;   // per dart: 0, 1, or -1 for a true loop
    bool eigen_gap = true;   // λ1 - λ2 > 1e-9 λ1
    bool transversal = true; // no positive-weight dart nearly perpendicular to u

    [[nodiscard]] bool generic() const { return eigen_gap && transversal; }
    [[nodiscard]] double margin() const { return lambda_max - threshold; }
};

// All pairs v0 < v1 whose representatives come within δ, nearest first.
std::vector<ContractionCandidate> find_contractions(const QuotientGraph& g, const Realization& r, double delta);

QuotientGraph apply_contraction(const QuotientGraph& g, const ContractionCandidate& c);

// The split of v in direction u at the current realization; threshold and
// lambda_max are filled from `firmness` and the local tension.
SplittingCandidate splitting_candidate(const QuotientGraph& g, const Realization& r, std::size_t v, const Vector& u,
                                       const Firmness& firmness);

// Vertices with λ_max(T(v)) >= K_deg(v), by decreasing λ_max - K.
std::vector<SplittingCandidate> find_splittings(const QuotientGraph& g, const Realization& r, const Firmness& firmness);

struct SplitResult {
    QuotientGraph graph;
    Realization immediate;  // both halves placed at the old position
    std::size_t v0 = 0;     // keeps the old index
    std::size_t v1 = 0;     // new last index
};

// Throws NonGenericError for a non-generic candidate.
SplitResult apply_splitting(const QuotientGraph& g, const Realization& r, const SplittingCandidate& s,
                            const MoveParams& params);

// sqrt(2K) / deg
double compatibility_lower_bound(double degree, double firmness);

}  // namespace netelast
