#include "graphstein/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "graphstein/coupling.hpp"
#include "graphstein/graph.hpp"
#include "graphstein/graphon.hpp"
#include "graphstein/homogeneity.hpp"
#include "graphstein/jsonw.hpp"
#include "graphstein/montecarlo.hpp"
#include "graphstein/permstat.hpp"

namespace graphstein {

namespace {

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --seed flag if given, otherwise the GRAPHSTEIN_SEED environment variable;
// stochastic commands refuse to run on silent entropy.
uint64_t require_seed(const std::optional<uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("GRAPHSTEIN_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw CLI::ValidationError("GRAPHSTEIN_SEED is not an integer");
    }
    throw CLI::ValidationError("a seed is required: pass --seed or set GRAPHSTEIN_SEED");
}

GraphonKernel parse_kernel(const std::string& spec) {
    if (spec.rfind("const:", 0) == 0) {
        return GraphonKernel::constant(std::stod(spec.substr(6)));
    }
    if (spec.rfind("block:", 0) == 0) {
        const std::string path = spec.substr(6);
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open kernel file: " + path);
        nlohmann::json j;
        in >> j;
        std::vector<double> breaks = j.at("breakpoints").get<std::vector<double>>();
        auto values = j.at("values").get<std::vector<std::vector<double>>>();
        return GraphonKernel::block_step(std::move(breaks), values);
    }
    throw std::runtime_error("kernel must be const:<p> or block:<file>");
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return read_edge_list(in);
}

void emit(const std::string& doc, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << doc << '\n';
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << doc << '\n';
    }
}

void maybe_timestamp(JsonWriter& w, bool no_timestamp) {
    if (!no_timestamp) w.key("timestamp").value(iso_timestamp());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"graph homogeneity statistics, permutation statistics and coupling checks"};
    app.require_subcommand(1);
    app.fallthrough();  // --seed etc. may follow the subcommand name

    std::optional<uint64_t> seed_flag;
    bool no_timestamp = false;
    app.add_option("--seed", seed_flag, "RNG seed (or set GRAPHSTEIN_SEED)");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp field from reports");

    // ---- gen -----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a random graph and write its edge list");
    int gen_n = 0;
    double gen_p = -1;
    std::string gen_kernel, gen_out;
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--p", gen_p, "edge probability (homogeneous model)");
    gen->add_option("--kernel", gen_kernel, "const:<p> or block:<file> (graphon model)");
    gen->add_option("--out", gen_out, "output path (stdout if omitted)");

    // ---- count ---------------------------------------------------------------
    auto* count = app.add_subcommand("count", "count pattern copies in a graph");
    std::string count_in, count_pattern = "c4", count_out;
    count->add_option("--in", count_in, "edge-list file")->required();
    count->add_option("--pattern", count_pattern, "k2, k3 or c4")
        ->check(CLI::IsMember({"k2", "k3", "c4"}));
    count->add_option("--out", count_out, "report path (stdout if omitted)");

    // ---- test / confset --------------------------------------------------------
    auto* test = app.add_subcommand("test", "conservative homogeneity test (exit 1 on reject)");
    auto* confset = app.add_subcommand("confset", "confidence set for the edge probability");
    std::string hom_in, hom_out;
    double hom_alpha = 0.05, hom_plo = 0.01, hom_phi = 0.99, hom_grid = 1e-3;
    for (CLI::App* sc : {test, confset}) {
        sc->add_option("--in", hom_in, "edge-list file")->required();
        sc->add_option("--alpha", hom_alpha, "test level");
        sc->add_option("--p-lo", hom_plo, "lower end of the p search domain");
        sc->add_option("--p-hi", hom_phi, "upper end of the p search domain");
        sc->add_option("--grid", hom_grid, "p grid step");
        sc->add_option("--out", hom_out, "report path (stdout if omitted)");
    }

    // ---- permstat ----------------------------------------------------------------
    auto* perm = app.add_subcommand("permstat", "descent/inversion statistics of permutations");
    std::string perm_in, perm_out;
    int perm_n = 0, perm_reps = 0;
    perm->add_option("--in", perm_in, "permutation file (one-line notation, 1-based)");
    perm->add_option("--n", perm_n, "size for sampling mode");
    perm->add_option("--reps", perm_reps, "number of sampled permutations");
    perm->add_option("--out", perm_out, "CSV path for sampling mode / report path otherwise");

    // ---- verify-coupling ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify-coupling", "check the coupling identity of a built-in model");
    std::string vc_builtin = "graph", vc_mode = "exact", vc_out;
    int vc_n = 5, vc_reps = 20000;
    double vc_p = 0.5;
    verify->add_option("--builtin", vc_builtin, "model name")
        ->check(CLI::IsMember({"graph", "fulman", "coins", "pair", "flip", "sizebias", "sizebias2d"}));
    verify->add_option("--n", vc_n, "model size");
    verify->add_option("--p", vc_p, "model parameter where applicable");
    verify->add_option("--mode", vc_mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    verify->add_option("--reps", vc_reps, "Monte Carlo replications (mc mode)");
    verify->add_option("--out", vc_out, "report path (stdout if omitted)");

    // ---- experiment --------------------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "replication experiments");
    std::string exp_kind, exp_target = "graph", exp_kernel, exp_csv, exp_out;
    std::vector<int> exp_nlist;
    int exp_n = 0, exp_reps = 1000, exp_jobs = 0;
    double exp_p = 0.5, exp_alpha = 0.05;
    exp->add_option("--kind", exp_kind, "coverage, power, distance or rate")
        ->required()
        ->check(CLI::IsMember({"coverage", "power", "distance", "rate"}));
    exp->add_option("--target", exp_target, "graph or perm")->check(CLI::IsMember({"graph", "perm"}));
    exp->add_option("--n", exp_n, "size (coverage/power/distance)");
    exp->add_option("--n-list", exp_nlist, "sizes for rate experiments")->delimiter(',');
    exp->add_option("--p", exp_p, "edge probability");
    exp->add_option("--kernel", exp_kernel, "const:<p> or block:<file>");
    exp->add_option("--alpha", exp_alpha, "test level");
    exp->add_option("--reps", exp_reps, "replications");
    exp->add_option("--jobs", exp_jobs, "worker threads (0 = hardware)");
    exp->add_option("--csv", exp_csv, "write the replication matrix as CSV");
    exp->add_option("--out", exp_out, "report path (stdout if omitted)");

    std::vector<const char*> argv;
    argv.push_back("graphstein");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            const uint64_t seed = require_seed(seed_flag);
            if ((gen_p >= 0) == !gen_kernel.empty())
                throw std::runtime_error("gen: give exactly one of --p and --kernel");
            const Graph g = gen_p >= 0 ? gen_gnp(gen_n, gen_p, seed)
                                       : gen_graphon(gen_n, parse_kernel(gen_kernel), seed);
            if (gen_out.empty()) {
                write_edge_list(g, out);
            } else {
                std::ofstream f(gen_out);
                if (!f) throw std::runtime_error("cannot open output file: " + gen_out);
                write_edge_list(g, f);
                JsonWriter w;
                w.begin_object();
                maybe_timestamp(w, no_timestamp);
                w.key("n").value(g.n());
                w.key("m").value(count_edges(g));
                w.key("out").value(gen_out);
                w.end_object();
                out << w.str() << '\n';
            }
            return 0;
        }

        if (count->parsed()) {
            const Graph g = load_graph(count_in);
            const Pattern f = count_pattern == "k2"   ? Pattern::k2
                              : count_pattern == "k3" ? Pattern::k3
                                                      : Pattern::c4;
            int64_t c = 0;
            switch (f) {
                case Pattern::k2: c = count_edges(g); break;
                case Pattern::k3: c = count_triangles(g); break;
                case Pattern::c4: c = count_four_cycles(g); break;
            }
            JsonWriter w;
            w.begin_object();
            maybe_timestamp(w, no_timestamp);
            w.key("n").value(g.n());
            w.key("pattern").value(count_pattern);
            w.key("count").value(c);
            if (f == Pattern::k2) w.key("t1").value(c);
            if (f == Pattern::c4) w.key("t2").value(c);
            w.end_object();
            emit(w.str(), count_out, out);
            return 0;
        }

        if (test->parsed() || confset->parsed()) {
            const Graph g = load_graph(hom_in);
            const ConfidenceSet cs = confidence_set(g, hom_alpha, hom_plo, hom_phi, hom_grid);
            JsonWriter w;
            w.begin_object();
            maybe_timestamp(w, no_timestamp);
            w.key("n").value(g.n());
            w.key("alpha").value(hom_alpha);
            w.key("p_domain").begin_array().value(hom_plo).value(hom_phi).end_array();
            w.key("grid_step").value(hom_grid);
            if (confset->parsed()) {
                w.key("intervals").begin_array();
                for (const auto& iv : cs.intervals)
                    w.begin_array().value(iv[0]).value(iv[1]).end_array();
                w.end_array();
            }
            w.key("statistic_min").value(cs.statistic_min);
            w.key("argmin_p").value(cs.argmin_p);
            w.key("reject").value(cs.empty());
            w.end_object();
            emit(w.str(), hom_out, out);
            return cs.empty() && test->parsed() ? 1 : 0;
        }

        if (perm->parsed()) {
            if (!perm_in.empty()) {
                std::ifstream in(perm_in);
                if (!in) throw std::runtime_error("cannot open permutation file: " + perm_in);
                const Permutation pi = read_permutation(in);
                const auto [w1, w2] = standardized_descent_inversion(pi);
                JsonWriter w;
                w.begin_object();
                maybe_timestamp(w, no_timestamp);
                w.key("n").value(pi.size());
                w.key("descents").value(static_cast<int64_t>(descents(pi)));
                w.key("inversions").value(inversions(pi));
                w.key("w1").value(w1);
                w.key("w2").value(w2);
                w.end_object();
                emit(w.str(), perm_out, out);
                return 0;
            }
            if (perm_n < 2 || perm_reps < 1)
                throw std::runtime_error("permstat: sampling mode needs --n >= 2 and --reps >= 1");
            if (perm_out.empty()) throw std::runtime_error("permstat: sampling mode needs --out for the CSV");
            const uint64_t seed = require_seed(seed_flag);
            const auto samples = sample_perm_w(perm_n, perm_reps, seed);
            std::ofstream csv(perm_out);
            if (!csv) throw std::runtime_error("cannot open output file: " + perm_out);
            csv << "rep,w1,w2\n";
            double s1 = 0, s2 = 0;
            for (int r = 0; r < perm_reps; ++r) {
                csv << r << ',' << fmt17(samples[static_cast<size_t>(r)][0]) << ','
                    << fmt17(samples[static_cast<size_t>(r)][1]) << '\n';
                s1 += samples[static_cast<size_t>(r)][0];
                s2 += samples[static_cast<size_t>(r)][1];
            }
            JsonWriter w;
            w.begin_object();
            maybe_timestamp(w, no_timestamp);
            w.key("n").value(perm_n);
            w.key("reps").value(perm_reps);
            w.key("seed").value(seed);
            w.key("csv").value(perm_out);
            w.key("mean_w1").value(s1 / perm_reps);
            w.key("mean_w2").value(s2 / perm_reps);
            w.end_object();
            out << w.str() << '\n';
            return 0;
        }

        if (verify->parsed()) {
            CouplingModel model;
            if (vc_builtin == "graph")
                model = graph_coupling_model(vc_n, vc_p);
            else if (vc_builtin == "fulman")
                model = fulman_coupling_model(vc_n);
            else if (vc_builtin == "coins")
                model = iid_coins_model(vc_n, vc_p);
            else if (vc_builtin == "pair")
                model = sign_refresh_pair_model(vc_n);
            else if (vc_builtin == "flip")
                model = flip_sign_model();
            else if (vc_builtin == "sizebias")
                model = size_bias_bernoulli_model(vc_p);
            else
                model = size_bias_overlap_model();

            const VerifyMode mode = vc_mode == "exact" ? VerifyMode::exact : VerifyMode::monte_carlo;
            const uint64_t seed = mode == VerifyMode::monte_carlo ? require_seed(seed_flag) : 0;
            const VerifyReport rep = verify_identity(model, mode, vc_reps, seed);

            JsonWriter w;
            w.begin_object();
            maybe_timestamp(w, no_timestamp);
            w.key("model").value(rep.model);
            w.key("mode").value(rep.mode);
            if (mode == VerifyMode::monte_carlo) {
                w.key("reps").value(rep.reps);
                w.key("seed").value(rep.seed);
            }
            w.key("all_pass").value(rep.all_pass);
            w.key("checks").begin_array();
            for (const auto& c : rep.checks) {
                w.begin_object();
                w.key("function").value(c.function);
                if (c.skipped) {
                    w.key("skipped").value(true);
                } else {
                    w.key("residual").value(c.residual);
                    w.key("scale").value(c.scale);
                    if (mode == VerifyMode::monte_carlo) w.key("std_error").value(c.std_error);
                    w.key("pass").value(c.pass);
                }
                w.end_object();
            }
            w.end_array();
            w.end_object();
            emit(w.str(), vc_out, out);
            return rep.all_pass ? 0 : 1;
        }

        if (exp->parsed()) {
            ExperimentConfig cfg;
            cfg.kind = exp_kind == "coverage"   ? ExperimentConfig::Kind::coverage
                       : exp_kind == "power"    ? ExperimentConfig::Kind::power
                       : exp_kind == "distance" ? ExperimentConfig::Kind::distance
                                                : ExperimentConfig::Kind::rate;
            cfg.target = exp_target;
            cfg.p = exp_p;
            cfg.alpha = exp_alpha;
            cfg.reps = exp_reps;
            cfg.jobs = exp_jobs;
            cfg.seed = require_seed(seed_flag);
            if (!exp_kernel.empty()) cfg.kernel = parse_kernel(exp_kernel);
            if (!exp_nlist.empty())
                cfg.n_list = exp_nlist;
            else if (exp_n > 0)
                cfg.n_list = {exp_n};
            else
                throw std::runtime_error("experiment: give --n or --n-list");

            const ExperimentResult res = run_replications(cfg);

            if (!exp_csv.empty()) {
                std::ofstream csv(exp_csv);
                if (!csv) throw std::runtime_error("cannot open output file: " + exp_csv);
                for (size_t c = 0; c < res.columns.size(); ++c)
                    csv << (c ? "," : "") << res.columns[c];
                csv << '\n';
                for (const auto& row : res.rows) {
                    for (size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << fmt17(row[c]);
                    csv << '\n';
                }
            }

            JsonWriter w;
            w.begin_object();
            maybe_timestamp(w, no_timestamp);
            w.key("kind").value(exp_kind);
            w.key("target").value(cfg.target);
            w.key("n_list").begin_array();
            for (int n : cfg.n_list) w.value(n);
            w.end_array();
            if (cfg.kernel)
                w.key("kernel").value(exp_kernel);
            else
                w.key("p").value(cfg.p);
            w.key("alpha").value(cfg.alpha);
            w.key("reps").value(cfg.reps);
            w.key("seed").value(cfg.seed);
            w.key("jobs").value(cfg.jobs);
            if (!exp_csv.empty()) w.key("csv").value(exp_csv);
            w.key("summary").begin_object();
            for (const auto& [k, v] : res.summary) w.key(k).value(v);
            w.end_object();
            w.end_object();
            emit(w.str(), exp_out, out);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace graphstein
