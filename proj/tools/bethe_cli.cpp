// Command-line front end. Every subcommand writes its result to --out (stdout
// when omitted or "-") and reports failures as one JSON object on stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bethe/bp.hpp"
#include "bethe/ensemble.hpp"
#include "bethe/error.hpp"
#include "bethe/harness.hpp"
#include "bethe/io.hpp"
#include "bethe/learning.hpp"
#include "bethe/model.hpp"
#include "bethe/spectral.hpp"

using namespace bethe;
using io::json;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--out", c.out, "output path (stdout when omitted or '-')");
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        std::cout.flush();
    } else {
        io::write_text_file(c.out, text);
    }
}

void emit(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

struct BPFlags {
    double tau = 5.0;
    double tol = 1e-9;
    int max_iters = 50000;

    void add(CLI::App* cmd) {
        cmd->add_option("--tau", tau, "damping time constant; <= 0 disables damping");
        cmd->add_option("--tol", tol, "convergence threshold on message change");
        cmd->add_option("--max-iters", max_iters, "BP iteration cap");
    }
    BPOptions options() const {
        BPOptions o;
        o.damping_tau = tau;
        o.tol = tol;
        o.max_iters = max_iters;
        return o;
    }
};

BPOptions bp_from_meta(const json& meta) {
    BPOptions o;
    if (meta.contains("bp")) {
        const auto& b = meta.at("bp");
        o.damping_tau = b.value("damping_tau", o.damping_tau);
        o.tol = b.value("tol", o.tol);
        o.max_iters = b.value("max_iters", o.max_iters);
    }
    return o;
}

LearningTrajectory load_trajectory(const std::string& path, std::string meta_path) {
    if (meta_path.empty()) meta_path = path + ".meta.json";
    const json meta = io::read_json_file(meta_path);
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    return io::read_trajectory(in, meta);
}

Graph graph_for_marginals(const std::string& graph_path, const json& marginals_doc) {
    if (!graph_path.empty()) return io::graph_from_json(io::read_json_file(graph_path));
    if (marginals_doc.contains("edges")) return io::graph_from_json(marginals_doc);
    throw InvalidArgument("no graph given: pass --graph or include n/edges in the marginals file");
}

std::vector<double> parse_grid(const std::string& spec) {
    // "a:b:step" or comma-separated values
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(spec);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a)
            throw InvalidArgument("grid must be start:stop:step with step > 0");
        const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long k = 0; k <= count; ++k) grid.push_back(a + static_cast<double>(k) * step);
    } else {
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                grid.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw InvalidArgument("bad grid value '" + tok + "'");
            }
        }
    }
    if (grid.empty()) throw InvalidArgument("sigma_j grid is empty");
    return grid;
}

void report(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Belief propagation, Bethe free energy and ensemble BP for binary pairwise models"};
    app.require_subcommand(1);
    Common common;

    // generate
    auto* gen = app.add_subcommand("generate", "random Ising model JSON");
    int gen_n = 8;
    std::string gen_topology = "full";
    double gen_sh = 1.0 / 3.0, gen_sj = 1.0 / 3.0;
    std::optional<double> gen_four;
    gen->add_option("--n", gen_n, "number of nodes");
    gen->add_option("--topology", gen_topology, "full, chain or tree")->check(CLI::IsMember({"full", "chain", "tree"}));
    gen->add_option("--sigma-h", gen_sh, "std of the fields");
    gen->add_option("--sigma-j", gen_sj, "std of the couplings");
    gen->add_option("--four-node", gen_four, "symmetric 4-node model with this coupling instead");
    add_common(gen, common);

    // exact
    auto* exact = app.add_subcommand("exact", "exact marginals and log partition function");
    std::string exact_model;
    exact->add_option("--model", exact_model, "model JSON")->required();
    add_common(exact, common);

    // bp
    auto* bp = app.add_subcommand("bp", "run loopy BP");
    std::string bp_model, bp_init = "uniform";
    BPFlags bp_flags;
    bp->add_option("--model", bp_model, "model JSON")->required();
    bp->add_option("--init", bp_init, "initial messages")->check(CLI::IsMember({"uniform", "random"}));
    bp_flags.add(bp);
    add_common(bp, common);

    // believability
    auto* bel = app.add_subcommand("believability", "classify marginals by the Bethe Hessian");
    std::string bel_model, bel_marg;
    double bel_tol = kBelievabilityTol;
    bel->add_option("--model", bel_model, "model or graph JSON")->required();
    bel->add_option("--marginals", bel_marg, "marginals JSON (default: exact marginals of --model)");
    bel->add_option("--tol", bel_tol, "classification band around zero");
    add_common(bel, common);

    // pmm
    auto* pmm = app.add_subcommand("pmm", "pseudo-moment matching parameters");
    std::string pmm_marg, pmm_graph;
    pmm->add_option("--marginals", pmm_marg, "marginals JSON")->required();
    pmm->add_option("--graph", pmm_graph, "graph or model JSON");
    add_common(pmm, common);

    // learn
    auto* learn = app.add_subcommand("learn", "Bethe wake-sleep learning; writes a JSON-lines trajectory");
    std::string learn_model, learn_graph, learn_target, learn_theta_init = "pmm", learn_msg_init = "fixed";
    LearningOptions learn_opts;
    BPFlags learn_bp;
    learn->add_option("--model", learn_model, "model JSON; its exact marginals are the target");
    learn->add_option("--graph", learn_graph, "graph JSON (with --target)");
    learn->add_option("--target", learn_target, "target marginals JSON");
    learn->add_option("--epsilon", learn_opts.epsilon, "learning rate");
    learn->add_option("--iters", learn_opts.iters, "learning iterations");
    learn->add_option("--theta-init", learn_theta_init, "pmm, zeros or given")->check(CLI::IsMember({"pmm", "zeros"}));
    learn->add_option("--message-init", learn_msg_init, "fixed, uniform, random or warm")
        ->check(CLI::IsMember({"fixed", "uniform", "random", "warm"}));
    learn_bp.add(learn);
    add_common(learn, common);

    // ebp
    auto* ebp = app.add_subcommand("ebp", "ensemble BP over a learning trajectory");
    std::string ebp_traj, ebp_meta;
    std::size_t ebp_last = 100, ebp_samples = 200, ebp_rank = 2;
    double ebp_vf = 0.99;
    bool ebp_gauss = false;
    ebp->add_option("--trajectory", ebp_traj, "trajectory JSON-lines file")->required();
    ebp->add_option("--meta", ebp_meta, "trajectory metadata (default: <trajectory>.meta.json)");
    ebp->add_option("--last", ebp_last, "window length");
    ebp->add_flag("--gaussian", ebp_gauss, "sample parameters from a fitted Gaussian");
    ebp->add_option("--samples", ebp_samples, "Gaussian samples");
    ebp->add_option("--rank", ebp_rank, "maximum retained covariance rank");
    ebp->add_option("--variance-fraction", ebp_vf, "variance fraction the retained factors should reach");
    add_common(ebp, common);

    // sweep-fraction
    auto* sweep = app.add_subcommand("sweep-fraction", "fraction of unbelievable targets versus sigma_j (CSV)");
    SweepOptions sweep_opts;
    std::string sweep_grid = "0:1:0.05";
    sweep->add_option("--n", sweep_opts.n, "number of nodes");
    sweep->add_option("--sigma-j", sweep_grid, "grid as start:stop:step or comma list");
    sweep->add_option("--sigma-h", sweep_opts.sigma_h, "std of the fields");
    sweep->add_option("--trials", sweep_opts.trials, "targets per grid point");
    add_common(sweep, common);

    // compare
    auto* cmp = app.add_subcommand("compare", "five-model comparison on unbelievable targets (CSV)");
    ComparisonOptions cmp_opts;
    BPFlags cmp_bp;
    std::string cmp_summary, cmp_msg_init = "fixed";
    cmp->add_option("--trials", cmp_opts.trials, "trial slots");
    cmp->add_option("--attempts", cmp_opts.attempts, "draws per slot until an unbelievable target appears");
    cmp->add_option("--n", cmp_opts.n, "number of nodes");
    cmp->add_option("--sigma-j", cmp_opts.sigma_j, "std of the couplings");
    cmp->add_option("--sigma-h", cmp_opts.sigma_h, "std of the fields");
    cmp->add_option("--epsilon", cmp_opts.learning.epsilon, "learning rate");
    cmp->add_option("--iters", cmp_opts.learning.iters, "learning iterations per target");
    cmp->add_option("--message-init", cmp_msg_init, "learning message initialisation")
        ->check(CLI::IsMember({"fixed", "uniform", "random", "warm"}));
    cmp->add_option("--last", cmp_opts.last, "ensemble window");
    cmp->add_option("--samples", cmp_opts.samples, "Gaussian ensemble samples");
    cmp->add_option("--rank", cmp_opts.max_rank, "maximum retained covariance rank");
    cmp->add_option("--variance-fraction", cmp_opts.variance_fraction, "variance fraction for the Gaussian fit");
    cmp->add_option("--summary", cmp_summary, "also write the quartile summary CSV here");
    cmp_bp.add(cmp);
    add_common(cmp, common);

    // project
    auto* proj = app.add_subcommand("project", "principal-component projection of a trajectory (CSV)");
    std::string proj_traj, proj_meta, proj_components;
    std::size_t proj_k = 2;
    proj->add_option("--trajectory", proj_traj, "trajectory JSON-lines file")->required();
    proj->add_option("--meta", proj_meta, "trajectory metadata (default: <trajectory>.meta.json)");
    proj->add_option("--k", proj_k, "number of components")->check(CLI::PositiveNumber);
    proj->add_option("--components", proj_components, "also write component vectors CSV here");
    add_common(proj, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report("usage", e.what());
        return 2;
    }

    try {
        if (*gen) {
            IsingModel m = gen_four ? symmetric_four_node(*gen_four) : [&] {
                if (gen_n < 1) throw InvalidArgument("--n must be positive");
                Graph g = gen_topology == "full" ? Graph::full(gen_n) : gen_topology == "chain" ? Graph::chain(gen_n) : [&] {
                    Rng rng(derive_seed(common.seed, 0));
                    return random_tree(gen_n, rng);
                }();
                return generate_random_ising(g, gen_sh, gen_sj, common.seed);
            }();
            emit(common, io::to_json(m));
        } else if (*exact) {
            const auto r = exact_inference(io::model_from_json(io::read_json_file(exact_model)));
            json j = io::to_json(r.marginals);
            j["log_partition"] = r.log_partition;
            emit(common, j);
        } else if (*bp) {
            const auto m = io::model_from_json(io::read_json_file(bp_model));
            BPOptions o = bp_flags.options();
            if (bp_init == "random") {
                Rng rng(common.seed);
                o.init = MessageSet::random(m.graph, rng);
            }
            emit(common, io::to_json(run_bp(m, o)));
        } else if (*bel) {
            const json doc = io::read_json_file(bel_model);
            const Graph g = io::graph_from_json(doc);
            const Pseudomarginals p =
                bel_marg.empty() ? exact_marginals(io::model_from_json(doc)) : io::marginals_from_json(io::read_json_file(bel_marg));
            const auto r = is_believable(g, p, bel_tol);
            emit(common, json{{"lambda_min", r.spectrum.lambda_min},
                              {"classification", std::string(to_string(r.classification))},
                              {"eigvec", r.spectrum.eigvec}});
        } else if (*pmm) {
            const json doc = io::read_json_file(pmm_marg);
            const Graph g = graph_for_marginals(pmm_graph, doc);
            emit(common, io::to_json(pseudo_moment_matching(g, io::marginals_from_json(doc))));
        } else if (*learn) {
            if (common.out.empty() || common.out == "-") throw InvalidArgument("learn needs --out for the trajectory file");
            std::optional<Graph> g;
            Pseudomarginals target;
            if (!learn_model.empty()) {
                const auto m = io::model_from_json(io::read_json_file(learn_model));
                g = m.graph;
                target = learn_target.empty() ? exact_marginals(m) : io::marginals_from_json(io::read_json_file(learn_target));
            } else {
                if (learn_target.empty()) throw InvalidArgument("learn needs --model or --target");
                const json doc = io::read_json_file(learn_target);
                g = graph_for_marginals(learn_graph, doc);
                target = io::marginals_from_json(doc);
            }
            learn_opts.theta_init = parse_theta_init(learn_theta_init);
            learn_opts.message_init = parse_message_init(learn_msg_init);
            learn_opts.bp = learn_bp.options();
            learn_opts.seed = common.seed;
            const auto traj = bethe_wake_sleep(*g, target, learn_opts);
            std::ostringstream body;
            io::write_trajectory_jsonl(body, traj);
            io::write_text_file(common.out, body.str());
            io::write_text_file(common.out + ".meta.json", io::trajectory_metadata(traj).dump(2) + "\n");
        } else if (*ebp) {
            const auto traj = load_trajectory(ebp_traj, ebp_meta);
            json out;
            if (ebp_gauss) {
                const auto spec = fit_gaussian(traj, ebp_last, ebp_vf, ebp_rank);
                const auto meta = io::read_json_file(ebp_meta.empty() ? ebp_traj + ".meta.json" : ebp_meta);
                const auto r = ebp_gaussian(spec, traj.graph, ebp_samples, common.seed, bp_from_meta(meta), common.threads);
                out["beliefs"] = io::to_json(r.beliefs);
                out["diagnostics"] = {{"method", "gaussian"},     {"window", ebp_last},
                                      {"rank", spec.rank()},      {"variance_captured", spec.variance_captured},
                                      {"factor_values", spec.factor_values},
                                      {"n_samples", ebp_samples}, {"n_converged", r.n_converged},
                                      {"n_failed", r.n_failed},   {"seed", common.seed}};
            } else {
                const auto r = ebp_exact(traj, ebp_last);
                out["beliefs"] = io::to_json(r.beliefs);
                out["diagnostics"] = {{"method", "exact"}, {"window", ebp_last}, {"used", r.used}, {"excluded", r.excluded}};
            }
            double mismatch = 0.0;
            for (double d : moment_mismatch(traj.graph, traj.target, io::marginals_from_json(out["beliefs"])))
                mismatch = std::max(mismatch, std::abs(d));
            out["diagnostics"]["mismatch_inf"] = mismatch;
            emit(common, out);
        } else if (*sweep) {
            sweep_opts.sigma_j_grid = parse_grid(sweep_grid);
            sweep_opts.seed = common.seed;
            sweep_opts.threads = common.threads;
            std::ostringstream os;
            write_sweep_csv(os, sweep_unbelievable_fraction(sweep_opts), sweep_metadata(sweep_opts));
            emit(common, os.str());
        } else if (*cmp) {
            cmp_opts.seed = common.seed;
            cmp_opts.threads = common.threads;
            cmp_opts.learning.bp = cmp_bp.options();
            cmp_opts.learning.message_init = parse_message_init(cmp_msg_init);
            const auto r = five_model_comparison(cmp_opts);
            auto meta = comparison_metadata(cmp_opts);
            meta["targets"] = std::to_string(r.targets);
            meta["skipped_trials"] = std::to_string(r.skipped_trials.size());
            std::ostringstream os;
            write_comparison_csv(os, r.records, meta);
            emit(common, os.str());
            if (!cmp_summary.empty()) {
                std::ostringstream ss;
                write_summary_csv(ss, r.summary);
                io::write_text_file(cmp_summary, ss.str());
            }
        } else if (*proj) {
            const auto p = export_trajectory_projection(load_trajectory(proj_traj, proj_meta), proj_k);
            std::ostringstream os;
            write_projection_csv(os, p);
            emit(common, os.str());
            if (!proj_components.empty()) {
                std::ostringstream cs;
                write_projection_components_csv(cs, p);
                io::write_text_file(proj_components, cs.str());
            }
        }
    } catch (const Error& e) {
        report(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        report("internal", e.what());
        return 1;
    }
    return 0;
}
