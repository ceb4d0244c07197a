#include "netelast/deform.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "netelast/error.hpp"
#include "netelast/mechanics.hpp"

namespace netelast {

namespace {

// A graph together with its harmonic realization and tension at ρ0.
struct State {
    QuotientGraph graph;
    Realization reference;
    TensionTensor tension;
};

State make_state(QuotientGraph g, const PeriodMap& rho0) {
    Realization ref = harmonic_realize(g, rho0);
    TensionTensor t = global_tension(g, ref);
    return State{std::move(g), std::move(ref), std::move(t)};
}

struct Move {
    MoveKind kind = MoveKind::contraction;
    double margin = 0.0;
    std::size_t primary = 0;
    ContractionCandidate contraction;
    SplittingCandidate split;
};

struct CapReached {};

// Margins within this distance count as simultaneous; the lower vertex wins.
constexpr double tie_tolerance = 1e-9;

bool better(const Move& a, const Move& b) {
    if (std::abs(a.margin - b.margin) > tie_tolerance) return a.margin > b.margin;
    if (a.primary != b.primary) return a.primary < b.primary;
    return a.kind == MoveKind::contraction && b.kind == MoveKind::splitting;
}

std::optional<Move> best_split(const State& s, const Realization& r, const MoveParams& params, bool strict) {
    std::optional<Move> best;
    std::optional<SplittingCandidate> blocked;
    for (auto& c : find_splittings(s.graph, r, params.firmness)) {
        Move m{MoveKind::splitting, c.margin() / c.threshold, c.v, {}, {}};
        if (!c.generic()) {
            if (strict && (!blocked || m.margin > blocked->margin() / blocked->threshold)) blocked = c;
            continue;
        }
        m.split = std::move(c);
        if (!best || better(m, *best)) best = std::move(m);
    }
    if (strict && blocked && (!best || blocked->margin() / blocked->threshold > best->margin + tie_tolerance)) {
        throw NonGenericError("split candidate at vertex " + std::to_string(blocked->v) +
                                  " is not generic; perturb the deformation",
                              blocked->v);
    }
    return best;
}

std::optional<Move> best_contraction(const State& s, const Realization& r, const MoveParams& params) {
    std::optional<Move> best;
    for (auto& c : find_contractions(s.graph, r, params.delta)) {
        Move m{MoveKind::contraction, (params.delta - c.distance) / params.delta, c.v0, c, {}};
        if (!best || better(m, *best)) best = std::move(m);
    }
    return best;
}

class Engine {
public:
    Engine(const QuotientGraph& g, const PeriodMap& rho0, const MoveParams& params, const EngineCaps& caps)
        : params_(params), caps_(caps), rho0_(rho0), state_(make_state(g, rho0)) {
        params_.validate();
        if (!(caps_.scan_step > 0.0) || !(caps_.tol_t > 0.0)) throw ValidationError("scan step and tolerance must be positive");
        if (caps_.max_moves == 0) caps_.max_moves = 10 * g.vertex_count();
        trace_.dimension = g.dimension();
        trace_.reference_period = rho0;
        trace_.volume = rho0.covolume();
        trace_.segments.push_back(Segment{0.0, 1.0, 1.0, 1.0, state_.graph, state_.tension, state_.tension.trace()});
    }

    [[nodiscard]] Realization realization(const Matrix& a) const { return apply_linear(state_.reference, a); }

    // Whether some move is available at the map `a` (generic splits only).
    [[nodiscard]] bool triggered(const Matrix& a) const {
        const Realization r = realization(a);
        return best_split(state_, r, params_, false).has_value() ||
               best_contraction(state_, r, params_).has_value();
    }

    void apply_best(const Matrix& a, double t, double lambda) {
        const Realization r = realization(a);
        std::optional<Move> m = best_split(state_, r, params_, false);
        std::optional<Move> c = best_contraction(state_, r, params_);
        if (!m || (c && better(*c, *m))) m = std::move(c);
        if (!m) return;
        apply(*m, r, t, lambda, true);
    }

    // Splittings until none, then contractions until none, until neither phase moves.
    void exhaust(const Matrix& a, double t, double lambda, bool strict) {
        while (true) {
            bool moved = false;
            while (true) {
                const Realization r = realization(a);
                auto m = best_split(state_, r, params_, strict);
                if (!m) break;
                apply(*m, r, t, lambda, false);
                moved = true;
            }
            while (true) {
                const Realization r = realization(a);
                auto m = best_contraction(state_, r, params_);
                if (!m) break;
                apply(*m, r, t, lambda, false);
                moved = true;
            }
            if (!moved) return;
        }
    }

    DeformationTrace finish(const Matrix& a, double t_end, double lambda_end) {
        trace_.segments.back().t_end = t_end;
        trace_.segments.back().lambda_end = lambda_end;
        trace_.final_graph = state_.graph;
        trace_.final_realization = realization(a);
        trace_.map = a;
        return std::move(trace_);
    }

    DeformationTrace& trace() { return trace_; }

private:
    void apply(const Move& m, const Realization& r, double t, double lambda, bool first) {
        if (moves_ >= caps_.max_moves) {
            if (caps_.partial_on_cap) throw CapReached{};
            throw MoveCapExceeded("move cap of " + std::to_string(caps_.max_moves) +
                                  " reached; the moves may repeat indefinitely");
        }
        ++moves_;
        MoveEvent ev;
        ev.t = t;
        ev.lambda = lambda;
        ev.kind = m.kind;
        ev.margin = m.margin;
        ev.triggered = first;
        QuotientGraph next;
        if (m.kind == MoveKind::contraction) {
            ev.v0 = m.contraction.v0;
            ev.v1 = m.contraction.v1;
            ev.offset = m.contraction.offset;
            next = apply_contraction(state_.graph, m.contraction);
        } else {
            SplitResult s = apply_splitting(state_.graph, r, m.split, params_);
            ev.v0 = s.v0;
            ev.v1 = s.v1;
            ev.offset = Offset(state_.graph.dimension(), 0);
            next = std::move(s.graph);
        }
        state_ = make_state(std::move(next), rho0_);

        Segment& last = trace_.segments.back();
        last.t_end = t;
        last.lambda_end = lambda;
        ev.graph_id = trace_.segments.size();
        trace_.events.push_back(std::move(ev));
        trace_.segments.push_back(Segment{t, 1.0, lambda, lambda, state_.graph, state_.tension, state_.tension.trace()});
    }

    MoveParams params_;
    EngineCaps caps_;
    PeriodMap rho0_;
    State state_;
    DeformationTrace trace_;
    std::size_t moves_ = 0;
};

void check_map(const Matrix& a, std::size_t N) {
    if (a.rows() != N || a.cols() != N) throw ValidationError("deformation map has the wrong size");
    if (std::abs(determinant(a) - 1.0) > 1e-9) throw ValidationError("deformation map must have determinant 1");
}

}  // namespace

double DeformationTrace::loss_ratio(std::size_t segment) const {
    const double e0 = segments.front().energy;
    if (!(e0 > 0.0)) throw ValidationError("energy loss ratio needs a positive initial energy");
    return 1.0 - segments.at(segment).energy / e0;
}

DeformationTrace fast_deform(const QuotientGraph& g, const Realization& standard, const Matrix& a,
                             const MoveParams& params, EngineCaps caps) {
    check_map(a, g.dimension());
    Engine engine(g, standard.period, params, caps);
    engine.trace().slow = false;
    try {
        engine.exhaust(a, 1.0, 1.0, true);
    } catch (const CapReached&) {
        engine.trace().complete = false;
    }
    return engine.finish(a, 1.0, 1.0);
}

DeformationTrace slow_deform(const QuotientGraph& g, const Realization& standard, const SlowSchedule& schedule,
                             const MoveParams& params) {
    const std::size_t N = g.dimension();
    if (!(schedule.lambda_target > 0.0) || !std::isfinite(schedule.lambda_target)) {
        throw ValidationError("target stretch must be positive");
    }
    const double lt = schedule.lambda_target;
    auto lambda_at = [&](double t) { return std::pow(lt, t); };
    auto map_at = [&](double t) { return uniaxial_map(lambda_at(t), N, schedule.rotation); };

    Engine engine(g, standard.period, params, schedule.caps);
    DeformationTrace& tr = engine.trace();
    tr.slow = true;
    tr.lambda_target = lt;
    tr.rotation = schedule.rotation;

    const double step = schedule.caps.scan_step;
    const double tol = schedule.caps.tol_t;
    double t = 0.0;
    try {
        if (engine.triggered(map_at(0.0))) {
            engine.apply_best(map_at(0.0), 0.0, 1.0);
            engine.exhaust(map_at(0.0), 0.0, 1.0, false);
        }
        while (t < 1.0) {
            const double next = std::min(1.0, t + step);
            if (!engine.triggered(map_at(next))) {
                t = next;
                continue;
            }
            double lo = t;
            double hi = next;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                if (engine.triggered(map_at(mid))) hi = mid;
                else lo = mid;
            }
            t = hi;
            const Matrix a = map_at(t);
            engine.apply_best(a, t, lambda_at(t));
            engine.exhaust(a, t, lambda_at(t), false);
        }
    } catch (const CapReached&) {
        tr.complete = false;
    }
    return engine.finish(map_at(t), t, lambda_at(t));
}

CurvePoint curve_point(const DeformationTrace& trace, double lambda) {
    if (!trace.slow) throw ValidationError("stress-strain curves need a slow deformation trace");
    if (!(lambda > 0.0)) throw ValidationError("stretch ratio must be positive");
    const bool stretching = trace.lambda_target >= 1.0;
    std::size_t k = 0;
    for (std::size_t i = 1; i < trace.segments.size(); ++i) {
        const double b = trace.segments[i].lambda_begin;
        const bool reached = stretching ? lambda >= b * (1.0 - 1e-13) : lambda <= b * (1.0 + 1e-13);
        if (reached) k = i;
    }
    const Segment& s = trace.segments[k];
    const EnergyProfile p = energy_profile(s.tension, lambda, trace.rotation);
    CurvePoint c;
    c.strain = lambda - 1.0;
    c.sigma_eng = p.derivative / trace.volume;
    c.sigma_true = lambda * c.sigma_eng;
    c.energy = p.energy;
    return c;
}

std::vector<CurvePoint> stress_strain_curve(const DeformationTrace& trace, const std::vector<double>& lambdas,
                                            std::size_t threads) {
    std::vector<CurvePoint> out(lambdas.size());
    threads = std::max<std::size_t>(1, std::min(threads, lambdas.size()));
    if (threads == 1) {
        for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = curve_point(trace, lambdas[i]);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < lambdas.size(); i += threads) out[i] = curve_point(trace, lambdas[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

double energy_loss_ratio(const DeformationTrace& trace) { return trace.loss_ratio(trace.segments.size() - 1); }

double final_permanent_strain(const DeformationTrace& trace) {
    return permanent_strain(trace.segments.back().tension, trace.rotation);
}

std::optional<StrainBracket> check_e0_vs_R(const DeformationTrace& trace) {
    const std::size_t N = trace.dimension;
    if (!trace.slow || N < 2) return std::nullopt;
    for (const auto& e : trace.events)
        if (e.kind == MoveKind::contraction) return std::nullopt;
    const Matrix& t0 = trace.segments.front().tension.matrix;
    const double tr = t0.trace();
    if (!(tr > 0.0)) return std::nullopt;
    const Matrix dev = t0 - Matrix::identity(N) * (tr / static_cast<double>(N));
    if (dev.frobenius_norm() > 1e-9 * tr) return std::nullopt;
    const double R = energy_loss_ratio(trace);
    const double n = static_cast<double>(N);
    if (!(R < 1.0 / n)) return std::nullopt;

    StrainBracket b;
    const double q = (n - 1.0) / (2.0 * n);
    b.lower = std::pow(1.0 - n / (n - 1.0) * R, q) - 1.0;
    b.upper = std::pow(1.0 - n * R, -q) - 1.0;
    b.strain = final_permanent_strain(trace);
    b.holds = b.strain >= b.lower - 1e-9 && b.strain <= b.upper + 1e-9;
    return b;
}

std::string to_string(MoveKind kind) { return kind == MoveKind::contraction ? "contraction" : "splitting"; }

}  // namespace netelast
