// netelast: command-line front end for periodic net elasticity.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 move cap.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "netelast/analysis.hpp"
#include "netelast/deform.hpp"
#include "netelast/error.hpp"
#include "netelast/io.hpp"
#include "netelast/mechanics.hpp"
#include "netelast/moves.hpp"
#include "netelast/presets.hpp"
#include "netelast/solver.hpp"

namespace {

using namespace netelast;
using ordered_json = nlohmann::ordered_json;

std::string read_input(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
}

ordered_json vectors_json(const std::vector<Vector>& xs) {
    ordered_json a = ordered_json::array();
    for (const auto& x : xs) a.push_back(x);
    return a;
}

ordered_json matrix_json(const Matrix& m) { return ordered_json(m.row_major()); }

NetFile load_net(const std::string& path) { return parse_net(read_input(path)); }

void require_connected(const QuotientGraph& g) {
    if (!is_positively_connected(g)) {
        throw ValidationError("the positive-weight edges do not connect all vertices; no harmonic realization exists");
    }
}

std::size_t worker_threads() {
    const char* env = std::getenv("NETELAST_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw ValidationError("NETELAST_THREADS must be an integer >= 1");
    return static_cast<std::size_t>(n);
}

Matrix read_square_matrix(const std::string& path, std::size_t N) {
    const auto j = nlohmann::json::parse(read_input(path), nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed matrix file '" + path + "'");
    std::vector<double> v;
    if (j.is_array() && !j.empty() && j.front().is_array()) {
        for (const auto& row : j)
            for (const auto& x : row) v.push_back(x.get<double>());
    } else {
        v = j.get<std::vector<double>>();
    }
    if (v.size() != N * N) throw ValidationError("matrix file must hold an N x N matrix");
    return Matrix::from_row_major(N, N, v);
}

struct DeformOptions {
    std::string mode = "slow";
    double lambda = 1.0;
    double theta = 0.0;
    std::string rotation_file;
    std::string map_file;
    double delta = 0.1;
    double K = 0.0;
    double kappa = 0.0;
    double exponent = 0.0;
    double p0 = 0.25;
    double p1 = 0.25;
    double p01 = 0.5;
    double scan_step = 1e-3;
    double tol_t = 1e-10;
    std::size_t max_moves = 0;
    bool standardize_first = false;

    void add_to(CLI::App* app) {
        app->add_option("--mode", mode, "fast or slow")->check(CLI::IsMember({"fast", "slow"}));
        app->add_option("--lambda", lambda, "target stretch ratio");
        app->add_option("--theta", theta, "extension angle in radians (2D)");
        app->add_option("--rotation-file", rotation_file, "orthogonal N x N matrix (JSON) for N-D extension");
        app->add_option("--map-file", map_file, "fast mode: explicit N x N map with determinant 1 (JSON)");
        app->add_option("--delta", delta, "contraction threshold");
        app->add_option("--K", K, "constant firmness K_d = K");
        app->add_option("--kappa", kappa, "linear firmness K_d = kappa * d");
        app->add_option("--exponent", exponent, "with --K: power-law firmness K_d = K * d^exponent");
        app->add_option("--p0", p0, "loop fraction kept on v0");
        app->add_option("--p1", p1, "loop fraction moved to v1");
        app->add_option("--p01", p01, "loop fraction turned into the v0-v1 edge");
        app->add_option("--scan-step", scan_step, "slow mode scan step in t");
        app->add_option("--tol", tol_t, "slow mode bisection tolerance in t");
        app->add_option("--max-moves", max_moves, "move cap (0: 10 x vertex count)");
        app->add_flag("--standardize", standardize_first, "whiten the input period before deforming");
    }

    [[nodiscard]] MoveParams params() const {
        if ((K > 0.0) == (kappa > 0.0)) throw ValidationError("give exactly one of --K and --kappa");
        MoveParams p;
        p.delta = delta;
        if (exponent != 0.0 && !(K > 0.0)) throw ValidationError("--exponent needs --K");
        if (K > 0.0) p.firmness = exponent == 0.0 ? Firmness::constant(K) : Firmness::power(K, exponent);
        else p.firmness = Firmness::linear(kappa);
        p.p0 = p0;
        p.p1 = p1;
        p.p01 = p01;
        p.validate();
        return p;
    }

    [[nodiscard]] Matrix rotation(std::size_t N) const {
        if (!rotation_file.empty()) return read_square_matrix(rotation_file, N);
        if (N == 2) return rotation_2d(theta);
        if (theta != 0.0) throw ValidationError("--theta applies to 2D nets; use --rotation-file");
        return Matrix::identity(N);
    }

    [[nodiscard]] DeformationTrace run(const NetFile& net) const {
        require_connected(net.graph);
        Realization start = harmonic_realize(net.graph, net.period);
        if (standardize_first) start = standardize(net.graph, net.period).realization;
        const EngineCaps caps{max_moves, scan_step, tol_t, true};
        const std::size_t N = net.graph.dimension();
        if (mode == "fast") {
            const Matrix a = map_file.empty() ? uniaxial_map(lambda, N, rotation(N)) : read_square_matrix(map_file, N);
            return fast_deform(net.graph, start, a, params(), caps);
        }
        SlowSchedule s{lambda, rotation(N), caps};
        return slow_deform(net.graph, start, s, params());
    }
};

ordered_json realization_report(const QuotientGraph& g, const Realization& r) {
    ordered_json j;
    j["positions"] = vectors_json(r.positions);
    j["period"] = matrix_json(r.period.basis());
    j["covolume"] = r.period.covolume();
    j["energy"] = energy(g, r);
    j["tension"] = matrix_json(global_tension(g, r).matrix);
    double res = 0.0;
    for (const auto& x : harmonic_residuals(g, r)) res = std::max(res, norm(x));
    j["max_residual"] = res;
    return j;
}

ordered_json net_json(const QuotientGraph& g, const std::vector<std::string>& names, const Realization& r) {
    return ordered_json::parse(serialize_net(NetFile{g, r.period, names, r.positions}));
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("invalid number '" + item + "'");
        }
    }
    return out;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw ValidationError("grids need at least two points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Elasticity and plasticity of periodic weighted graphs"};
    app.require_subcommand(1);
    std::string input = "-";
    std::string output = "-";

    // lattice
    auto* lattice = app.add_subcommand("lattice", "write a preset net file");
    std::string preset;
    PresetParams pp;
    std::string table;
    lattice->add_option("preset", preset, "hexagonal, square, cubic or single_vertex")->required();
    lattice->add_option("--l", pp.l, "edge length / spacing");
    lattice->add_option("--w0", pp.w0, "loop weight");
    lattice->add_option("--w1", pp.w1, "edge weight");
    lattice->add_option("--a", pp.a, "loop weight (cubic, single_vertex)");
    lattice->add_option("--m", pp.m, "edge span (cubic)");
    lattice->add_option("--N", pp.N, "dimension (cubic, single_vertex)");
    lattice->add_option("--table", table, "single_vertex edges as JSON [[offset, weight], ...]");
    lattice->add_option("-o,--output", output, "output file");

    // harmonic / standardize / tension
    auto* harmonic = app.add_subcommand("harmonic", "solve for the harmonic realization");
    auto* standard = app.add_subcommand("standardize", "whiten to the standard realization");
    auto* tension = app.add_subcommand("tension", "local and global tension, stress and ellipsoid");
    for (auto* sub : {harmonic, standard, tension}) {
        sub->add_option("input", input, "net file ('-' for stdin)");
        sub->add_option("-o,--output", output, "output file");
    }

    // deform / curve
    DeformOptions dopt;
    auto* deform = app.add_subcommand("deform", "run a fast or slow deformation and write the trace");
    deform->add_option("input", input, "net file ('-' for stdin)");
    deform->add_option("-o,--output", output, "output file");
    dopt.add_to(deform);

    std::size_t samples = 201;
    auto* curve = app.add_subcommand("curve", "stress-strain CSV from a trace or a net");
    curve->add_option("input", input, "trace or net file ('-' for stdin)");
    curve->add_option("-o,--output", output, "output file");
    curve->add_option("--samples", samples, "uniform samples in stretch ratio");
    dopt.add_to(curve);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "weight-variation and plasticity analytics");
    analyze->require_subcommand(1);
    auto* zw = analyze->add_subcommand("zw", "fit z and W for the edge (v0, v1, 0)");
    std::size_t v0 = 0;
    std::size_t v1 = 1;
    std::string probes = "0.5,2,8";
    zw->add_option("input", input, "net file ('-' for stdin)");
    zw->add_option("--v0", v0);
    zw->add_option("--v1", v1);
    zw->add_option("--probes", probes, "three distinct weights, comma separated");
    zw->add_option("-o,--output", output, "output file");

    auto* limit = analyze->add_subcommand("limit-ratio", "Gaussian-weighted single-vertex loss ratio");
    std::size_t N = 2;
    std::string sigmas = "1";
    double p = 0.5;
    double radius = 0.0;
    bool refine = false;
    std::string direction;
    limit->add_option("--N", N, "dimension");
    limit->add_option("--sigma", sigmas, "comma separated Gaussian widths");
    limit->add_option("--p", p, "loop fraction turned into the new edge");
    limit->add_option("--radius", radius, "lattice truncation radius (0: automatic)");
    limit->add_flag("--refine", refine, "also evaluate at twice the radius");
    limit->add_option("--u", direction, "split direction, comma separated (default 1,...,1)");
    limit->add_option("-o,--output", output, "output file");

    auto* blend = analyze->add_subcommand("blend", "blend of the cube lattices with spacings 1 and m");
    int m = 2;
    double a = 1.0;
    std::size_t grid_points = 1001;
    blend->add_option("--N", N, "dimension");
    blend->add_option("--m", m, "spacing of the second lattice");
    blend->add_option("--a", a, "loop weight");
    blend->add_option("--p", p, "loop fraction turned into the new edge");
    blend->add_option("--grid", grid_points, "points on the s grid");
    blend->add_option("-o,--output", output, "output file");

    auto* svg = app.add_subcommand("svg", "draw one cell and the tension ellipse");
    svg->add_option("input", input, "net or trace file ('-' for stdin)");
    svg->add_option("-o,--output", output, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (lattice->parsed()) {
        if (!table.empty()) {
            const auto j = nlohmann::json::parse(table, nullptr, false);
            if (j.is_discarded() || !j.is_array()) throw ValidationError("--table must be a JSON list");
            for (const auto& row : j) pp.table.emplace_back(row.at(0).get<Offset>(), row.at(1).get<double>());
        }
        const Preset ps = lattice_preset(parse_preset_name(preset), pp);
        write_output(output, serialize_net(NetFile{ps.graph, ps.period, default_names(ps.graph.vertex_count()),
                                                   ps.positions}));
        return 0;
    }

    if (harmonic->parsed() || standard->parsed() || tension->parsed()) {
        const NetFile net = load_net(input);
        require_connected(net.graph);
        ordered_json j;
        if (harmonic->parsed()) {
            const Realization r = harmonic_realize(net.graph, net.period);
            j = realization_report(net.graph, r);
            j["net"] = net_json(net.graph, net.names, r);
        } else if (standard->parsed()) {
            const Standardized s = standardize(net.graph, net.period);
            j = realization_report(net.graph, s.realization);
            j["transform"] = matrix_json(s.transform);
            j["net"] = net_json(net.graph, net.names, s.realization);
        } else {
            const Realization r = net.positions ? Realization{*net.positions, net.period}
                                                : harmonic_realize(net.graph, net.period);
            const TensionTensor t = global_tension(net.graph, r);
            const StressState st = cauchy_stress(t, net.period.covolume());
            ordered_json local = ordered_json::array();
            for (std::size_t v = 0; v < net.graph.vertex_count(); ++v) {
                ordered_json lv;
                lv["vertex"] = net.names[v];
                lv["degree"] = degree(net.graph, v);
                lv["tension"] = matrix_json(local_tension(net.graph, r, v).matrix);
                local.push_back(std::move(lv));
            }
            j["local"] = std::move(local);
            j["global"] = matrix_json(t.matrix);
            j["energy"] = energy(net.graph, r);
            j["per_weight"] = matrix_json(per_weight_tension(net.graph, r).matrix);
            j["cauchy"] = matrix_json(st.cauchy);
            j["deviatoric"] = matrix_json(st.deviatoric);
            j["volume"] = st.volume;
            try {
                j["ellipsoid"] = matrix_json(ellipsoid_matrix(net.graph, r));
            } catch (const NumericalError&) {
                j["ellipsoid"] = nullptr;
            }
        }
        write_output(output, j.dump(2) + "\n");
        return 0;
    }

    if (deform->parsed()) {
        const DeformationTrace trace = dopt.run(load_net(input));
        write_output(output, trace_to_json(trace));
        if (!trace.complete) {
            std::cerr << "netelast: move cap reached; the moves may repeat indefinitely (partial trace written)\n";
            return 3;
        }
        return 0;
    }

    if (curve->parsed()) {
        const std::string text = read_input(input);
        const DeformationTrace tr = looks_like_trace(text) ? trace_from_json(text) : dopt.run(parse_net(text));
        if (!tr.complete) throw MoveCapExceeded("the trace stopped at the move cap; no curve past that point");
        std::vector<double> lambdas = grid(1.0, tr.lambda_target, std::max<std::size_t>(samples, 2));
        for (std::size_t k = 1; k < tr.segments.size(); ++k) lambdas.push_back(tr.segments[k].lambda_begin);
        if (tr.lambda_target >= 1.0) std::sort(lambdas.begin(), lambdas.end());
        else std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
        lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
        write_output(output, curve_csv(stress_strain_curve(tr, lambdas, worker_threads())));
        return 0;
    }

    if (zw->parsed()) {
        const NetFile net = load_net(input);
        require_connected(net.graph);
        const auto ws = parse_list(probes);
        if (ws.size() != 3) throw ValidationError("--probes needs exactly three weights");
        const LossFit fit = extract_zW(net.graph, net.period, v0, v1, {ws[0], ws[1], ws[2]});
        ordered_json j;
        j["v0"] = v0;
        j["v1"] = v1;
        j["z"] = fit.z;
        if (fit.W) j["W"] = *fit.W;
        else j["W"] = nullptr;
        j["W_bound"] = weight_bound(net.graph, v0, v1);
        j["residual"] = fit.residual;
        j["relative_residual"] = fit.relative_residual;
        write_output(output, j.dump(2) + "\n");
        return 0;
    }

    if (limit->parsed()) {
        if (N < 1) throw ValidationError("--N must be >= 1");
        const PeriodMap period(Matrix::identity(N));
        const Vector u = direction.empty() ? Vector(N, 1.0) : parse_list(direction);
        ordered_json rows = ordered_json::array();
        for (double sigma : parse_list(sigmas)) {
            const auto r = limit_ratio(WeightFunction::gaussian(sigma), period, u, p, {1.0}, radius, refine).front();
            ordered_json row;
            row["sigma"] = sigma;
            row["ratio"] = r.ratio;
            row["radius"] = r.radius;
            if (r.refined) row["refined"] = *r.refined;
            rows.push_back(std::move(row));
        }
        ordered_json j;
        j["N"] = N;
        j["p"] = p;
        j["limit"] = 2.0 / (static_cast<double>(N) * std::numbers::pi);
        j["samples"] = std::move(rows);
        write_output(output, j.dump(2) + "\n");
        return 0;
    }

    if (blend->parsed()) {
        const PeriodMap period(Matrix::identity(N));
        const IndexSet in_I = half_space(period, Vector(N, 1.0));
        const BlendComponent c0 = blend_component(cube_edges(N, 1), period, in_I, a, p);
        const BlendComponent c1 = blend_component(cube_edges(N, m), period, in_I, a, p);
        const BlendResult res = blend_analysis(c0, c1, grid(0.0, 1.0, grid_points));
        ordered_json j;
        j["R0"] = c0.ratio;
        j["R1"] = c1.ratio;
        j["s_hat"] = res.s_hat;
        j["R_s_hat"] = res.ratio_at_s_hat;
        j["grid_argmin"] = res.grid_argmin;
        ordered_json curve_rows = ordered_json::array();
        for (const auto& [s, r] : res.curve) curve_rows.push_back({s, r});
        j["curve"] = std::move(curve_rows);
        write_output(output, j.dump(2) + "\n");
        return 0;
    }

    if (svg->parsed()) {
        const std::string text = read_input(input);
        std::string out;
        if (looks_like_trace(text)) {
            const auto j = nlohmann::json::parse(text);
            const NetFile net = parse_net(j.at("final").dump());
            out = render_svg(net.graph, Realization{*net.positions, net.period});
        } else {
            const NetFile net = parse_net(text);
            require_connected(net.graph);
            const Realization r = net.positions ? Realization{*net.positions, net.period}
                                                : harmonic_realize(net.graph, net.period);
            out = render_svg(net.graph, r);
        }
        write_output(output, out);
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const netelast::NonGenericError& e) {
        std::cerr << "netelast: non-generic state at vertex " << e.vertex() << ": " << e.what() << "\n";
        return 2;
    } catch (const netelast::MoveCapExceeded& e) {
        std::cerr << "netelast: " << e.what() << "\n";
        return 3;
    } catch (const netelast::NumericalError& e) {
        std::cerr << "netelast: numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const netelast::ValidationError& e) {
        std::cerr << "netelast: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "netelast: invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "netelast: " << e.what() << "\n";
        return 1;
    }
}
