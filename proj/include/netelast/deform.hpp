#pragma once

// Fast and slow deformation engines. Both keep the period fixed at A ρ0 (or
// A_t ρ0), apply one move at a time, and re-solve harmonically after every
// move. Each graph produced along the way is recorded together with its
// tension at the reference period ρ0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netelast/graph.hpp"
#include "netelast/linalg.hpp"
#include "netelast/moves.hpp"
#include "netelast/solver.hpp"

namespace netelast {

struct EngineCaps {
    std::size_t max_moves = 0;  // 0 means 10 x initial vertex count
    double scan_step = 1e-3;
    double tol_t = 1e-10;
    // Return the trace recorded so far, marked incomplete, instead of
    // throwing MoveCapExceeded.
    bool partial_on_cap = false;
};

struct SlowSchedule {
    double lambda_target = 1.0;
    Matrix rotation = Matrix::identity(2);  // first column is the extension axis
    EngineCaps caps;
};

enum class MoveKind { contraction, splitting };

struct MoveEvent {
    double t = 1.0;
    double lambda = 1.0;
    MoveKind kind = MoveKind::contraction;
    // contraction: the merged pair and offset; splitting: v0 = split vertex,
    // v1 = the new vertex.
    std::size_t v0 = 0;
    std::size_t v1 = 0;
    Offset offset;
    double margin = 0.0;        // relative: (λmax - K)/K or (δ - d)/δ
    bool triggered = false;     // first move at this t (the one found by the scan)
    std::size_t graph_id = 0;   // index of the segment that starts here
};

struct Segment {
    double t_begin = 0.0;
    double t_end = 1.0;
    double lambda_begin = 1.0;
    double lambda_end = 1.0;
    QuotientGraph graph;
    TensionTensor tension;  // at the reference period
    double energy = 0.0;    // trace of `tension`
};

struct DeformationTrace {
    bool slow = true;
    bool complete = true;   // false when the move cap stopped the run
    std::size_t dimension = 2;
    double lambda_target = 1.0;
    Matrix rotation;
    Matrix map;             // fast mode: A; slow mode: A(λ_target)
    PeriodMap reference_period;
    double volume = 0.0;
    std::vector<MoveEvent> events;
    std::vector<Segment> segments;
    QuotientGraph final_graph;
    Realization final_realization;  // harmonic at the final period

    [[nodiscard]] double initial_energy() const { return segments.front().energy; }
    // Energy loss ratio of segment m (0 for the initial graph).
    [[nodiscard]] double loss_ratio(std::size_t segment) const;
};

// Apply A at once, then exhaust moves: splittings (best first) until none
// remain, then contractions (nearest first) until none remain, alternating
// until quiescent. Non-generic split candidates raise NonGenericError.
DeformationTrace fast_deform(const QuotientGraph& g, const Realization& standard, const Matrix& a,
                             const MoveParams& params, EngineCaps caps = {});

// Uniaxial extension A_t = A(λ_target^t), t in [0, 1], with first-hitting
// times located by scanning and bisection. Non-generic split candidates are
// held back until the deformation makes them generic.
DeformationTrace slow_deform(const QuotientGraph& g, const Realization& standard, const SlowSchedule& schedule,
                             const MoveParams& params);

struct CurvePoint {
    double strain = 0.0;
    double sigma_eng = 0.0;
    double sigma_true = 0.0;
    double energy = 0.0;
};

// Right-continuous in λ: at an event λ the post-move segment is used.
CurvePoint curve_point(const DeformationTrace& trace, double lambda);
std::vector<CurvePoint> stress_strain_curve(const DeformationTrace& trace, const std::vector<double>& lambdas,
                                            std::size_t threads = 1);

// 1 - E_final / E_initial at the reference period.
double energy_loss_ratio(const DeformationTrace& trace);

double final_permanent_strain(const DeformationTrace& trace);

struct StrainBracket {
    double lower = 0.0;
    double upper = 0.0;
    double strain = 0.0;
    bool holds = false;
};

// The bracket on ε₀ for a run from a standard net with splittings only and
// R < 1/N; nullopt when those preconditions do not hold.
std::optional<StrainBracket> check_e0_vs_R(const DeformationTrace& trace);

std::string to_string(MoveKind kind);

}  // namespace netelast
