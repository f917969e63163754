#include "bethe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bethe/error.hpp"

namespace bethe::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

json to_json(const IsingModel& model) {
    json edges = json::array();
    for (const auto& [i, j] : model.graph.edges()) edges.push_back({i, j});
    return {{"n", model.num_nodes()}, {"edges", edges}, {"h", model.h}, {"J", model.J}};
}

Graph graph_from_json(const json& j) {
    const int n = field<int>(j, "n");
    std::vector<Edge> edges;
    for (const auto& e : field<std::vector<std::vector<int>>>(j, "edges")) {
        if (e.size() != 2) throw InvalidArgument("each edge must be a pair [i, j]");
        edges.emplace_back(e[0], e[1]);
    }
    return Graph(n, std::move(edges));
}

IsingModel model_from_json(const json& j) {
    return IsingModel(graph_from_json(j), field<std::vector<double>>(j, "h"), field<std::vector<double>>(j, "J"));
}

json to_json(const Pseudomarginals& q) { return {{"qi_plus", q.qi_plus}, {"qij_pp", q.qij_pp}}; }

Pseudomarginals marginals_from_json(const json& j) {
    return {field<std::vector<double>>(j, "qi_plus"), field<std::vector<double>>(j, "qij_pp")};
}

json to_json(const BPResult& result) {
    return {{"beliefs", to_json(result.beliefs)},
            {"converged", result.converged},
            {"iterations", result.iterations},
            {"final_delta", result.final_delta}};
}

void write_trajectory_jsonl(std::ostream& out, const LearningTrajectory& trajectory) {
    for (const auto& rec : trajectory.records) {
        const json line = {{"iter", rec.iter},
                           {"h", rec.h},
                           {"J", rec.J},
                           {"qi_plus", rec.beliefs.qi_plus},
                           {"qij_pp", rec.beliefs.qij_pp},
                           {"converged", rec.converged},
                           {"mismatch_inf", rec.mismatch_inf}};
        out << line.dump() << '\n';
    }
}

json trajectory_metadata(const LearningTrajectory& t) {
    json graph = json::object();
    graph["n"] = t.graph.num_nodes();
    graph["edges"] = json::array();
    for (const auto& [i, j] : t.graph.edges()) graph["edges"].push_back({i, j});
    const auto& o = t.options;
    return {{"graph", graph},
            {"target", to_json(t.target)},
            {"epsilon", o.epsilon},
            {"iters", o.iters},
            {"theta_init", std::string(to_string(o.theta_init))},
            {"message_init", std::string(to_string(o.message_init))},
            {"seed", o.seed},
            {"bp", {{"damping_tau", o.bp.damping_tau}, {"tol", o.bp.tol}, {"max_iters", o.bp.max_iters}}},
            {"final_theta", t.final_theta},
            {"rng", kRngName}};
}

LearningTrajectory read_trajectory(std::istream& lines, const json& meta) {
    LearningTrajectory t;
    t.graph = graph_from_json(field<json>(meta, "graph"));
    t.target = marginals_from_json(field<json>(meta, "target"));
    t.options.epsilon = field<double>(meta, "epsilon");
    t.options.iters = field<int>(meta, "iters");
    t.options.theta_init = parse_theta_init(field<std::string>(meta, "theta_init"));
    t.options.message_init = parse_message_init(field<std::string>(meta, "message_init"));
    t.options.seed = field<std::uint64_t>(meta, "seed");
    const auto bp = field<json>(meta, "bp");
    t.options.bp.damping_tau = field<double>(bp, "damping_tau");
    t.options.bp.tol = field<double>(bp, "tol");
    t.options.bp.max_iters = field<int>(bp, "max_iters");
    if (meta.contains("final_theta")) t.final_theta = field<std::vector<double>>(meta, "final_theta");

    std::string text;
    std::size_t line_no = 0;
    while (std::getline(lines, text)) {
        ++line_no;
        if (text.empty()) continue;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw InvalidArgument("trajectory line " + std::to_string(line_no) + ": " + e.what());
        }
        LearningRecord rec;
        rec.iter = field<int>(j, "iter");
        rec.h = field<std::vector<double>>(j, "h");
        rec.J = field<std::vector<double>>(j, "J");
        rec.beliefs = {field<std::vector<double>>(j, "qi_plus"), field<std::vector<double>>(j, "qij_pp")};
        rec.converged = field<bool>(j, "converged");
        rec.mismatch_inf = field<double>(j, "mismatch_inf");
        if (rec.h.size() != static_cast<std::size_t>(t.graph.num_nodes()) || rec.J.size() != t.graph.num_edges())
            throw ShapeMismatch("trajectory line " + std::to_string(line_no) + " does not match the graph");
        rec.mismatch = moment_mismatch(t.graph, t.target, rec.beliefs);
        t.records.push_back(std::move(rec));
    }
    return t;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << text;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string metadata_header(const std::map<std::string, std::string>& meta) {
    std::ostringstream os;
    for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
    return os.str();
}

}  // namespace bethe::io
