#include "pcnap/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "pcnap/connectivity.hpp"
#include "pcnap/corpus.hpp"
#include "pcnap/oracle.hpp"
#include "pcnap/solver.hpp"

namespace pcnap {
namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
    std::string instance;
    std::uint64_t seed = 1;
    std::string mode = "rational";
    std::string dump_lp;
    std::string trace;
    std::string out;
    int count = 10;
    int m = 3;
    int round = 1;
    double cap = 1e7;
    bool audit = false;
    CorpusBounds bounds;
};

SolveOptions parse_mode(const std::string& mode) {
    SolveOptions o;
    if (mode == "rational") return o;
    const std::string prefix = "float:";
    if (mode.rfind(prefix, 0) != 0) fail(ErrorKind::validation, "mode must be rational or float:<eps>");
    try {
        size_t used = 0;
        std::string tail = mode.substr(prefix.size());
        o.eps = std::stod(tail, &used);
        if (used != tail.size() || !(o.eps > 0)) throw std::invalid_argument(tail);
    } catch (const std::logic_error&) {
        fail(ErrorKind::validation, "float mode needs a positive eps, got '" + mode + "'");
    }
    o.float_mode = true;
    return o;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::validation, "cannot write " + path);
    f << text;
}

// Demands that take part in augmentation round k on the base graph.
DemandMask round_active(const Instance& inst, int k) {
    Multigraph g = base_graph(inst);
    DemandMask mask = 0;
    for (size_t i = 0; i < inst.demands.size(); ++i) {
        const auto& d = inst.demands[i];
        if (d.r >= k && connectivity(g, inst.kind, inst.terminals(), d.s, d.t) >= k - 1) mask |= DemandMask{1} << i;
    }
    return mask;
}

json weights_json(const Instance& inst, const WeightAssignment& w) {
    json o = json::object();
    for (int v = 0; v < inst.num_nodes(); ++v)
        o[inst.nodes[static_cast<size_t>(v)]] = to_string(inst.weights[w.level[static_cast<size_t>(v)]]);
    return o;
}

json oracle_json(const Instance& inst, const OracleResult& r) {
    json j;
    j["feasible"] = r.feasible;
    j["optimum"] = to_string(r.optimum);
    j["weights"] = weights_json(inst, r.witness);
    j["satisfied"] = r.satisfied;
    return j;
}

std::string cmd_validate(const RunConfig& c) {
    Instance inst = load_instance(c.instance);
    json j;
    j["valid"] = true;
    j["nodes"] = inst.num_nodes();
    j["weights"] = inst.weights.size();
    j["candidate_edges"] = inst.candidate_edges.size();
    j["demands"] = inst.demands.size();
    j["connectivity"] = std::string(to_string(inst.kind));
    return j.dump(2) + "\n";
}

std::string cmd_solve(const RunConfig& c) {
    Instance inst = load_instance(c.instance);
    SolverConfig cfg;
    cfg.lp = parse_mode(c.mode);
    cfg.record_trace = !c.trace.empty();
    std::ostringstream dumps;
    if (!c.dump_lp.empty())
        cfg.on_pclp = [&](int round, const Instance&, const LPProblem& lp) {
            LPProblem named = lp;
            named.name = "PCLP_round_" + std::to_string(round);
            write_lp_dump(named, dumps);
        };
    Solution sol = solve_pcnap(inst, cfg);
    std::optional<AuditReport> rep;
    if (c.audit) {
        OracleOptions oo;
        oo.cap = c.cap;
        rep = audit(inst, sol, brute_force_pcnap(inst, oo).optimum);
    }
    if (!c.dump_lp.empty()) write_file(c.dump_lp, dumps.str());
    if (!c.trace.empty()) {
        std::ostringstream t;
        for (const auto& r : sol.rounds) {
            json line;
            line["round"] = r.round;
            line["trace"] = r.trace;
            t << line.dump() << "\n";
        }
        write_file(c.trace, t.str());
    }
    return solution_json(inst, sol, rep) + "\n";
}

std::string cmd_oracle(const RunConfig& c) {
    Instance inst = load_instance(c.instance);
    OracleOptions oo;
    oo.cap = c.cap;
    return oracle_json(inst, brute_force_pcnap(inst, oo)).dump(2) + "\n";
}

std::string cmd_gap_demo(const RunConfig& c) {
    if (c.m < 2) fail(ErrorKind::validation, "gap-demo needs m >= 2");
    Instance inst = gap_instance(c.m);
    BisetFamily f = build_family(inst, round_active(inst, 1), 1);
    SolveOptions so = parse_mode(c.mode);
    LPSolution natural = solve(build_natural_lp(inst, f).lp, so);
    LPSolution pclp = solve(build_pclp(inst, f).lp, so);
    OracleResult oracle = brute_force_pcnap(inst);
    json j;
    j["m"] = c.m;
    j["family_size"] = f.size();
    j["natural_lp"] = to_string(natural.objective_value);
    j["pclp"] = to_string(pclp.objective_value);
    j["oracle"] = to_string(oracle.optimum);
    return j.dump(2) + "\n";
}

std::string cmd_corpus(const RunConfig& c) {
    c.bounds.validate();
    if (c.count < 0) fail(ErrorKind::validation, "count must be nonnegative");
    if (c.out.empty()) fail(ErrorKind::validation, "corpus needs --out <directory>");
    std::filesystem::create_directories(c.out);
    // One task per instance; results are collected in index order.
    std::vector<std::future<std::pair<std::string, std::optional<std::string>>>> jobs;
    for (int i = 0; i < c.count; ++i)
        jobs.push_back(std::async(std::launch::async, [&c, i] {
            Instance inst = generate_instance(c.seed, i, c.bounds);
            OracleOptions oo;
            oo.cap = c.cap;
            oo.parallel = false;
            OracleResult r = brute_force_pcnap(inst, oo);
            std::optional<std::string> answer;
            if (r.feasible) answer = oracle_json(inst, r).dump(2) + "\n";
            return std::make_pair(serialize_instance(inst) + "\n", answer);
        }));
    json files = json::array();
    for (int i = 0; i < c.count; ++i) {
        auto [text, answer] = jobs[static_cast<size_t>(i)].get();
        char name[32];
        std::snprintf(name, sizeof name, "inst_%04d", i);
        std::filesystem::path base = std::filesystem::path(c.out) / name;
        write_file(base.string() + ".json", text);
        json entry;
        entry["instance"] = std::string(name) + ".json";
        if (answer) {
            write_file(base.string() + ".oracle.json", *answer);
            entry["oracle"] = std::string(name) + ".oracle.json";
        }
        files.push_back(entry);
    }
    json j;
    j["seed"] = c.seed;
    j["count"] = c.count;
    j["files"] = files;
    return j.dump(2) + "\n";
}

std::string cmd_spider_trace(const RunConfig& c) {
    Instance inst = load_instance(c.instance);
    BisetFamily f = build_family(inst, round_active(inst, c.round), c.round);
    if (f.empty()) return "";
    GreedyOptions go;
    go.keep_spiders = true;
    go.audit_simplelp = true;
    go.spider.record_trace = true;
    GreedyResult g = greedy_cover(inst, f, go);
    std::ostringstream os;
    for (size_t q = 0; q < g.spiders.size(); ++q) {
        const auto& s = g.spiders[q];
        json line = json::parse(report_json_line(g.reports[q]));
        line["head"] = inst.nodes[static_cast<size_t>(s.spider.head)];
        json feet = json::array();
        for (const auto& b : s.spider.feet) feet.push_back(format_biset(b, inst.nodes));
        line["foot_sets"] = feet;
        json legs = json::array();
        for (const auto& leg : s.spider.legs) {
            json l = json::array();
            for (const auto& e : leg) l.push_back(inst.candidate_edges[static_cast<size_t>(e.edge)].id);
            legs.push_back(l);
        }
        line["legs"] = legs;
        line["weights"] = weights_json(inst, s.spider.weights);
        line["clock"] = to_string(s.dual.clock);
        line["dual_sum"] = to_string(s.dual.core_sum());
        line["min_cores"] = s.min_core_count;
        auto bad = verify_spider(inst, g.families[q], s);
        line["violations"] = bad;
        line["trace"] = s.trace;
        os << line.dump() << "\n";
    }
    if (!c.trace.empty()) {
        write_file(c.trace, os.str());
        return "";
    }
    return os.str();
}

std::string cmd_lp_audit(const RunConfig& c) {
    Instance inst = load_instance(c.instance);
    SolveOptions so = parse_mode(c.mode);
    BisetFamily f = build_family(inst, round_active(inst, c.round), c.round);
    json j;
    j["round"] = c.round;
    j["family_size"] = f.size();
    j["min_cores"] = min_cores(f).size();
    PclpModel pclp = build_pclp(inst, f);
    if (!c.dump_lp.empty()) {
        std::ostringstream d;
        write_lp_dump(pclp.lp, d);
        write_file(c.dump_lp, d.str());
    }
    auto report = [&](const LPProblem& lp) {
        LPSolution s = solve(lp, so);
        json o;
        o["status"] = to_string(s.status);
        o["value"] = s.status == LPStatus::optimal ? json(to_string(s.objective_value)) : json(nullptr);
        o["method"] = s.method;
        o["rows"] = lp.num_constraints();
        o["columns"] = lp.num_variables();
        return o;
    };
    j["pclp"] = report(pclp.lp);
    j["npclp"] = report(build_npclp(inst, f).lp);
    j["natural_lp"] = report(build_natural_lp(inst, f).lp);
    OracleOptions oo;
    oo.cap = c.cap;
    OracleResult cover = brute_force_cover(inst, f, oo);
    j["cover_optimum"] = to_string(cover.optimum);
    return j.dump(2) + "\n";
}

int exit_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::validation: return exit_validation;
        case ErrorKind::precondition: return exit_validation;
        case ErrorKind::infeasible: return exit_infeasible;
        case ErrorKind::cap_exceeded: return exit_cap;
        case ErrorKind::invariant: return exit_internal;
    }
    return exit_internal;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prize-collecting network activation solver"};
    app.require_subcommand(1);
    RunConfig c;
    auto instance_opt = [&](CLI::App* sub) { sub->add_option("--instance", c.instance, "instance JSON file")->required(); };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", c.out, "write the result here instead of stdout");
        sub->add_option("--mode", c.mode, "rational or float:<eps>");
        sub->add_option("--cap", c.cap, "oracle search cap on |W|^|V|");
    };

    auto* validate = app.add_subcommand("validate", "check an instance file");
    instance_opt(validate);
    common(validate);

    auto* solve_cmd = app.add_subcommand("solve", "run the augmentation-round solver");
    instance_opt(solve_cmd);
    common(solve_cmd);
    solve_cmd->add_option("--dump-lp", c.dump_lp, "write each round's relaxation");
    solve_cmd->add_option("--trace", c.trace, "write spider traces as JSON lines");
    solve_cmd->add_flag("--audit", c.audit, "compare against the exact oracle");

    auto* oracle = app.add_subcommand("oracle", "exact brute-force optimum");
    instance_opt(oracle);
    common(oracle);

    auto* gap = app.add_subcommand("gap-demo", "natural LP, PCLP and optimum on the star gap instance");
    gap->add_option("--m", c.m, "number of leaves (>= 2)");
    common(gap);

    auto* corpus = app.add_subcommand("corpus", "write a seeded instance corpus with oracle answers");
    corpus->add_option("--seed", c.seed, "corpus seed");
    corpus->add_option("--count", c.count, "number of instances");
    corpus->add_option("--min-nodes", c.bounds.min_nodes);
    corpus->add_option("--max-nodes", c.bounds.max_nodes);
    corpus->add_option("--max-weights", c.bounds.max_weights);
    corpus->add_option("--max-requirement", c.bounds.max_requirement);
    corpus->add_option("--max-demands", c.bounds.max_demands);
    corpus->add_option("--max-candidates", c.bounds.max_candidates);
    corpus->add_flag("--infinite-penalties", c.bounds.infinite_penalties);
    common(corpus);

    auto* trace = app.add_subcommand("spider-trace", "greedy spider cover of one round with full traces");
    instance_opt(trace);
    common(trace);
    trace->add_option("--round", c.round, "target connectivity of the round");
    trace->add_option("--trace", c.trace, "write the JSON lines here");

    auto* lp_audit = app.add_subcommand("lp-audit", "relaxation values of one round");
    instance_opt(lp_audit);
    common(lp_audit);
    lp_audit->add_option("--round", c.round, "target connectivity of the round");
    lp_audit->add_option("--dump-lp", c.dump_lp, "write the relaxation");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_usage;
    }

    try {
        std::string result;
        std::string name = app.get_subcommands().front()->get_name();
        if (name == "validate") result = cmd_validate(c);
        else if (name == "solve") result = cmd_solve(c);
        else if (name == "oracle") result = cmd_oracle(c);
        else if (name == "gap-demo") result = cmd_gap_demo(c);
        else if (name == "corpus") result = cmd_corpus(c);
        else if (name == "spider-trace") result = cmd_spider_trace(c);
        else result = cmd_lp_audit(c);
        if (!c.out.empty() && name != "corpus") write_file(c.out, result);
        else out << result;
        return exit_ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e.kind());
    }
}

}  // namespace pcnap
