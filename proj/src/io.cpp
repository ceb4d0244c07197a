#include "netelast/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "netelast/error.hpp"
#include "netelast/mechanics.hpp"
#include "netelast/solver.hpp"

namespace netelast {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_number(double x) {
    if (!std::isfinite(x)) throw ValidationError("cannot serialize a non-finite number");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> default_names(std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back("v" + std::to_string(i));
    return out;
}

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("field '") + key + "' has the wrong type: " + e.what());
    }
}

std::size_t vertex_ref(const json& j, const std::map<std::string, std::size_t>& index, std::size_t count) {
    if (j.is_string()) {
        const auto it = index.find(j.get<std::string>());
        if (it == index.end()) throw ValidationError("unknown vertex '" + j.get<std::string>() + "'");
        return it->second;
    }
    if (j.is_number_integer()) {
        const auto v = j.get<long long>();
        if (v < 0 || static_cast<std::size_t>(v) >= count) throw ValidationError("vertex index out of range");
        return static_cast<std::size_t>(v);
    }
    throw ValidationError("edge endpoints must be vertex names or indices");
}

std::string number_list(std::span<const double> xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
    return s + "]";
}

std::string int_list(const Offset& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
    return s + "]";
}

ordered_json matrix_json(const Matrix& m) { return ordered_json(m.row_major()); }

Matrix matrix_from(const json& j, std::size_t n, const char* what) {
    std::vector<double> v;
    try {
        v = j.get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ValidationError(std::string(what) + " must be a list of numbers");
    }
    if (v.size() != n * n) throw ValidationError(std::string(what) + " must have N*N entries");
    return Matrix::from_row_major(n, n, v);
}

}  // namespace

NetFile parse_net(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ValidationError("net file must be a JSON object");
    const auto dim = field<long long>(j, "dim");
    if (dim < 1) throw ValidationError("dim must be >= 1");
    const auto N = static_cast<std::size_t>(dim);

    NetFile net;
    net.names = field<std::vector<std::string>>(j, "vertices");
    if (net.names.empty()) throw ValidationError("net needs at least one vertex");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < net.names.size(); ++i) {
        if (!index.emplace(net.names[i], i).second) throw ValidationError("duplicate vertex name '" + net.names[i] + "'");
    }
    net.period = PeriodMap(matrix_from(j.at("period"), N, "period"));

    if (!j.contains("edges") || !j.at("edges").is_array()) throw ValidationError("missing edge list");
    std::vector<EdgeOrbit> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_object()) throw ValidationError("each edge must be an object");
        EdgeOrbit f;
        f.tail = vertex_ref(e.at("from"), index, net.names.size());
        f.head = vertex_ref(e.at("to"), index, net.names.size());
        f.offset = e.contains("offset") ? field<std::vector<int>>(e, "offset") : Offset(N, 0);
        f.weight = field<double>(e, "weight");
        edges.push_back(std::move(f));
    }
    net.graph = build_graph(N, net.names.size(), std::move(edges));

    if (j.contains("positions") && !j.at("positions").is_null()) {
        auto pos = field<std::vector<std::vector<double>>>(j, "positions");
        if (pos.size() != net.names.size()) throw ValidationError("one position per vertex is required");
        for (const auto& p : pos) {
            if (p.size() != N) throw ValidationError("position has the wrong dimension");
            for (double x : p)
                if (!std::isfinite(x)) throw ValidationError("positions must be finite");
        }
        net.positions = std::move(pos);
    }
    return net;
}

std::string serialize_net(const NetFile& net) {
    const QuotientGraph& g = net.graph;
    const std::vector<std::string> names =
        net.names.size() == g.vertex_count() ? net.names : default_names(g.vertex_count());
    std::ostringstream out;
    out << "{\n";
    out << "  \"dim\": " << g.dimension() << ",\n";
    out << "  \"vertices\": " << json(names).dump() << ",\n";
    out << "  \"period\": " << number_list(net.period.basis().row_major()) << ",\n";
    out << "  \"edges\": [";
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
        const EdgeOrbit& e = g.edges()[k];
        out << (k ? ",\n" : "\n") << "    {\"from\": " << json(names[e.tail]).dump() << ", \"to\": "
            << json(names[e.head]).dump() << ", \"offset\": " << int_list(e.offset)
            << ", \"weight\": " << format_number(e.weight) << "}";
    }
    out << (g.edges().empty() ? "]" : "\n  ]");
    if (net.positions) {
        out << ",\n  \"positions\": [";
        for (std::size_t i = 0; i < net.positions->size(); ++i) {
            out << (i ? ",\n" : "\n") << "    " << number_list((*net.positions)[i]);
        }
        out << "\n  ]";
    }
    out << "\n}\n";
    return out.str();
}

std::string trace_to_json(const DeformationTrace& trace) {
    ordered_json j;
    j["mode"] = trace.slow ? "slow" : "fast";
    j["complete"] = trace.complete;
    j["dimension"] = trace.dimension;
    if (trace.slow) {
        j["lambda_target"] = trace.lambda_target;
        j["rotation"] = matrix_json(trace.rotation);
    }
    j["map"] = matrix_json(trace.map);
    j["reference_period"] = matrix_json(trace.reference_period.basis());
    j["volume"] = trace.volume;
    j["initial_energy"] = trace.initial_energy();

    ordered_json events = ordered_json::array();
    for (const auto& e : trace.events) {
        ordered_json ev;
        ev["kind"] = to_string(e.kind);
        ev["t"] = e.t;
        if (trace.slow) ev["lambda"] = e.lambda;
        ev["v0"] = e.v0;
        ev["v1"] = e.v1;
        ev["offset"] = e.offset;
        ev["margin"] = e.margin;
        ev["triggered"] = e.triggered;
        ev["graph_id"] = e.graph_id;
        events.push_back(std::move(ev));
    }
    j["events"] = std::move(events);

    ordered_json segments = ordered_json::array();
    for (std::size_t k = 0; k < trace.segments.size(); ++k) {
        const Segment& s = trace.segments[k];
        ordered_json seg;
        seg["graph_id"] = k;
        seg["t_begin"] = s.t_begin;
        seg["t_end"] = s.t_end;
        if (trace.slow) {
            seg["lambda_begin"] = s.lambda_begin;
            seg["lambda_end"] = s.lambda_end;
        }
        seg["vertex_count"] = s.graph.vertex_count();
        seg["edge_count"] = s.graph.edges().size();
        seg["tension"] = matrix_json(s.tension.matrix);
        seg["energy"] = s.energy;
        seg["loss_ratio"] = trace.loss_ratio(k);
        if (trace.slow && trace.dimension >= 2) {
            try {
                seg["permanent_strain"] = permanent_strain(s.tension, trace.rotation);
            } catch (const ValidationError&) {
                seg["permanent_strain"] = nullptr;
            }
        }
        segments.push_back(std::move(seg));
    }
    j["segments"] = std::move(segments);
    j["loss_ratio"] = energy_loss_ratio(trace);
    if (trace.slow && trace.dimension >= 2) {
        try {
            j["permanent_strain"] = final_permanent_strain(trace);
        } catch (const ValidationError&) {
            j["permanent_strain"] = nullptr;
        }
        const auto bracket = check_e0_vs_R(trace);
        if (bracket) {
            j["strain_bracket"] = {{"lower", bracket->lower}, {"upper", bracket->upper}, {"holds", bracket->holds}};
        } else {
            j["strain_bracket"] = nullptr;
        }
    }
    ordered_json final_net = ordered_json::parse(serialize_net(
        NetFile{trace.final_graph, trace.final_realization.period, default_names(trace.final_graph.vertex_count()),
                trace.final_realization.positions}));
    j["final"] = std::move(final_net);
    return j.dump(2) + "\n";
}

bool looks_like_trace(std::string_view text) {
    try {
        const json j = json::parse(text.begin(), text.end());
        return j.is_object() && j.contains("segments");
    } catch (const json::exception&) {
        return false;
    }
}

DeformationTrace trace_from_json(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("segments")) throw ValidationError("not a deformation trace");
    DeformationTrace tr;
    tr.slow = field<std::string>(j, "mode") == "slow";
    tr.complete = j.value("complete", true);
    const auto N = field<std::size_t>(j, "dimension");
    if (N < 1) throw ValidationError("dimension must be >= 1");
    tr.dimension = N;
    tr.volume = field<double>(j, "volume");
    tr.map = matrix_from(j.at("map"), N, "map");
    tr.reference_period = PeriodMap(matrix_from(j.at("reference_period"), N, "reference_period"));
    if (tr.slow) {
        tr.lambda_target = field<double>(j, "lambda_target");
        tr.rotation = matrix_from(j.at("rotation"), N, "rotation");
    }
    for (const auto& s : j.at("segments")) {
        Segment seg;
        seg.t_begin = field<double>(s, "t_begin");
        seg.t_end = field<double>(s, "t_end");
        if (tr.slow) {
            seg.lambda_begin = field<double>(s, "lambda_begin");
            seg.lambda_end = field<double>(s, "lambda_end");
        }
        seg.tension = TensionTensor{matrix_from(s.at("tension"), N, "tension")};
        seg.energy = field<double>(s, "energy");
        tr.segments.push_back(std::move(seg));
    }
    if (tr.segments.empty()) throw ValidationError("trace has no segments");
    return tr;
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::string out = "strain,sigma_eng,sigma_true,energy\n";
    for (const auto& p : points) {
        out += format_number(p.strain) + "," + format_number(p.sigma_eng) + "," + format_number(p.sigma_true) + "," +
               format_number(p.energy) + "\n";
    }
    return out;
}

std::string render_svg(const QuotientGraph& g, const Realization& r, const SvgOptions& options) {
    if (g.dimension() != 2) throw ValidationError("SVG output supports two-dimensional nets only");
    const Vector u1 = r.period.basis().column(0);
    const Vector u2 = r.period.basis().column(1);
    const Vector centre{0.5 * (u1[0] + u2[0]), 0.5 * (u1[1] + u2[1])};

    const TensionTensor tw = per_weight_tension(g, r);
    const SymmetricEigen eig = jacobi_eigen(tw.matrix);
    const double rx = std::sqrt(std::max(eig.values[0], 0.0));
    const double ry = std::sqrt(std::max(eig.values[1], 0.0));
    const double angle = std::atan2(eig.vectors(1, 0), eig.vectors(0, 0)) * 180.0 / std::numbers::pi;

    // Bounding box of the cell, the edges and the ellipse.
    double xmin = std::min({0.0, u1[0], u2[0], u1[0] + u2[0]});
    double xmax = std::max({0.0, u1[0], u2[0], u1[0] + u2[0]});
    double ymin = std::min({0.0, u1[1], u2[1], u1[1] + u2[1]});
    double ymax = std::max({0.0, u1[1], u2[1], u1[1] + u2[1]});
    auto extend = [&](const Vector& p) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    };
    for (const auto& e : g.edges()) {
        extend(r.positions[e.tail]);
        extend(add(r.positions[e.head], r.period.apply(e.offset)));
    }
    extend({centre[0] - rx, centre[1] - rx});
    extend({centre[0] + rx, centre[1] + rx});
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double pad = 0.08 * span;
    xmin -= pad;
    ymin -= pad;
    xmax += pad;
    ymax += pad;
    const double scale = options.pixels / std::max(xmax - xmin, ymax - ymin);
    const double width = (xmax - xmin) * scale;
    const double height = (ymax - ymin) * scale;
    const double vr = options.vertex_radius > 0.0 ? options.vertex_radius : 0.02 * span;
    const double stroke = 0.004 * span;
    auto f = [](double x) { return format_number(x); };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << f(width) << "\" height=\""
      << f(height) << "\" viewBox=\"0 0 " << f(width) << " " << f(height) << "\">\n";
    o << "<g transform=\"translate(" << f(-xmin * scale) << "," << f(ymax * scale) << ") scale(" << f(scale) << ","
      << f(-scale) << ")\" stroke-width=\"" << f(stroke) << "\">\n";
    o << "<polygon class=\"cell\" fill=\"none\" stroke=\"#999999\" points=\"0,0 " << f(u1[0]) << "," << f(u1[1])
      << " " << f(u1[0] + u2[0]) << "," << f(u1[1] + u2[1]) << " " << f(u2[0]) << "," << f(u2[1]) << "\"/>\n";
    for (const auto& e : g.edges()) {
        const Vector& a = r.positions[e.tail];
        if (e.is_true_loop()) {
            if (e.weight > 0.0) {
                o << "<circle class=\"loop\" fill=\"none\" stroke=\"#3366cc\" cx=\"" << f(a[0] + 1.5 * vr)
                  << "\" cy=\"" << f(a[1] + 1.5 * vr) << "\" r=\"" << f(1.5 * vr) << "\"/>\n";
            }
            continue;
        }
        const Vector b = add(r.positions[e.head], r.period.apply(e.offset));
        o << "<line class=\"edge\" stroke=\"#222222\" x1=\"" << f(a[0]) << "\" y1=\"" << f(a[1]) << "\" x2=\""
          << f(b[0]) << "\" y2=\"" << f(b[1]) << "\"/>\n";
    }
    for (std::size_t i = 0; i < r.positions.size(); ++i) {
        o << "<circle class=\"vertex\" fill=\"#cc3333\" stroke=\"none\" cx=\"" << f(r.positions[i][0])
          << "\" cy=\"" << f(r.positions[i][1]) << "\" r=\"" << f(vr) << "\"/>\n";
    }
    o << "<ellipse class=\"tension\" fill=\"none\" stroke=\"#339933\" cx=\"" << f(centre[0]) << "\" cy=\""
      << f(centre[1]) << "\" rx=\"" << f(rx) << "\" ry=\"" << f(ry) << "\" transform=\"rotate(" << f(angle) << ","
      << f(centre[0]) << "," << f(centre[1]) << ")\"/>\n";
    o << "</g>\n</svg>\n";
    return o.str();
}

}  // namespace netelast
