// Property checks over seeded corpora. One PASS/FAIL line per criterion; exit status is the failure count.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "pcnap/cli.hpp"
#include "pcnap/connectivity.hpp"
#include "pcnap/corpus.hpp"
#include "pcnap/lp_models.hpp"
#include "pcnap/oracle.hpp"
#include "pcnap/solver.hpp"

using namespace pcnap;
namespace fs = std::filesystem;

namespace {

// Pinned parameters. All comparisons are exact rational; only runtimes carry a tolerance.
constexpr std::uint64_t corpus_seed = 20261014;
constexpr int corpus_size = 200;
constexpr int subsets_per_instance = 32;
constexpr int menger_pairs_per_kind = 100;
constexpr int ring_families = 100;
constexpr double gap_seconds = 5.0;
constexpr double relaxation_seconds = 600.0;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
    if (!ok) ++failures;
}

const std::vector<Instance>& corpus() {
    static const std::vector<Instance> c = generate_corpus(corpus_seed, corpus_size);
    return c;
}

// A round at target k works on the instance with earlier rounds' edges already in the base graph.
struct RoundView {
    int k;
    Instance work;
    LPProblem pclp;
};

const std::vector<std::vector<RoundView>>& rounds() {
    static const std::vector<std::vector<RoundView>> all = [] {
        std::vector<std::vector<RoundView>> out;
        for (const auto& inst : corpus()) {
            std::vector<RoundView> v;
            SolverConfig cfg;
            cfg.on_pclp = [&](int k, const Instance& work, const LPProblem& lp) { v.push_back(RoundView{k, work, lp}); };
            solve_pcnap(inst, cfg);
            out.push_back(std::move(v));
        }
        return out;
    }();
    return all;
}

// Demands that ask for k and already reach k - 1 in the working graph.
DemandMask eligible(const Instance& work, int k) {
    DemandMask m = 0;
    Multigraph g = base_graph(work);
    for (size_t d = 0; d < work.demands.size(); ++d) {
        const auto& dm = work.demands[d];
        if (dm.r >= k && connectivity(g, work.kind, work.terminals(), dm.s, dm.t) >= k - 1) m |= DemandMask{1} << d;
    }
    return m;
}

std::vector<std::pair<int, int>> pairs_of(const Instance& inst, const std::vector<int>& ids) {
    std::vector<std::pair<int, int>> p;
    for (int e : ids) p.emplace_back(inst.candidate_edges[static_cast<size_t>(e)].u, inst.candidate_edges[static_cast<size_t>(e)].v);
    return p;
}

void gap_reproduction() {
    bool ok = true;
    std::ostringstream d;
    for (int m : {2, 3, 5}) {
        auto t = Clock::now();
        Instance inst = gap_instance(m);
        BisetFamily f = build_family(inst, 1, 1);
        Rational nat = solve(build_natural_lp(inst, f).lp).objective_value;
        Rational pclp = solve(build_pclp(inst, f).lp).objective_value;
        Extended opt = brute_force_pcnap(inst).optimum;
        double secs = since(t);
        bool here = nat == Rational(1, m) && pclp == 1 && opt == Extended(1) && secs < gap_seconds;
        ok &= here;
        d << "m=" << m << " natural=" << to_string(nat) << " pclp=" << to_string(pclp) << " oracle=" << to_string(opt)
          << " " << secs << "s; ";
    }
    report(1, ok, d.str());
}

void relaxation_validity() {
    auto t = Clock::now();
    int checked = 0, bad = 0;
    for (size_t i = 0; i < corpus().size(); ++i) {
        Extended opt = brute_force_pcnap(corpus()[i]).optimum;
        for (const auto& r : rounds()[i]) {
            LPSolution s = solve(r.pclp);
            ++checked;
            if (s.status != LPStatus::optimal || opt < Extended(s.objective_value)) ++bad;
        }
    }
    double secs = since(t);
    report(2, bad == 0 && secs < relaxation_seconds,
           std::to_string(checked) + " round relaxations, " + std::to_string(bad) + " above the optimum, " +
               std::to_string(secs) + "s");
}

void uncrossability() {
    std::mt19937_64 rng(corpus_seed + 3);
    int families = 0, bad = 0;
    for (const auto& per : rounds())
        for (const auto& r : per)
        for (ConnectivityKind kind : {ConnectivityKind::edge, ConnectivityKind::element}) {
            Instance inst = r.work;
            inst.kind = kind;
            {
                const int k = r.k;
                DemandMask all = eligible(inst, k);
                if (!all) continue;
                std::vector<DemandMask> subs;
                for (DemandMask s = all;; s = (s - 1) & all) {
                    if (s) subs.push_back(s);
                    if (!s) break;
                }
                std::shuffle(subs.begin(), subs.end(), rng);
                if (subs.size() > subsets_per_instance) subs.resize(subsets_per_instance);
                for (DemandMask s : subs) {
                    BisetFamily f = build_family(inst, s, k);
                    ++families;
                    if (!is_uncrossable(f)) ++bad;
                }
            }
        }
    report(3, bad == 0, std::to_string(families) + " families, " + std::to_string(bad) + " not uncrossable");
}

void menger() {
    std::mt19937_64 rng(corpus_seed + 4);
    int pairs = 0, bad = 0;
    for (ConnectivityKind kind : {ConnectivityKind::edge, ConnectivityKind::element}) {
        int done = 0;
        for (int idx = 0; done < menger_pairs_per_kind; ++idx) {
            const auto& per = rounds()[static_cast<size_t>(idx % corpus_size)];
            if (per.empty()) continue;
            const RoundView& r = per[rng() % per.size()];
            Instance inst = r.work;
            inst.kind = kind;
            const int k = r.k;
            DemandMask act = eligible(inst, k);
            if (!act) continue;
            BisetFamily f = build_family(inst, act, k);
            std::vector<int> chosen;
            for (int e = 0; e < static_cast<int>(inst.candidate_edges.size()); ++e)
                if (rng() % 2) chosen.push_back(e);
            BisetFamily left = residual(f, pairs_of(inst, chosen));
            Multigraph g = augmented_graph(inst, chosen);
            for (size_t d = 0; d < inst.demands.size(); ++d) {
                if (!((act >> d) & 1u)) continue;
                bool covered = true;
                for (const auto& [b, l] : left.table())
                    if ((l >> d) & 1u) covered = false;
                const auto& dm = inst.demands[d];
                if (covered != (connectivity(g, kind, inst.terminals(), dm.s, dm.t) >= k)) ++bad;
            }
            ++done;
            ++pairs;
        }
    }
    report(4, bad == 0, std::to_string(pairs) + " (instance, F) pairs, " + std::to_string(bad) + " disagreements");
}

void ring_cover() {
    constexpr int n = 4;
    std::mt19937_64 rng(corpus_seed + 5);
    int covers = 0, bad = 0, made = 0;
    while (made < ring_families) {
        BisetFamily f = oracle_support::random_ring_family(rng, n, 1 + static_cast<int>(rng() % 3));
        if (!is_ring(f)) {
            ++bad;
            ++made;
            continue;
        }
        ++made;
        for (const auto& cover : oracle_support::minimal_arc_covers(f, n)) {
            std::vector<int> in(n, 0), out(n, 0);
            for (auto [t, h] : cover) ++out[static_cast<size_t>(t)], ++in[static_cast<size_t>(h)];
            ++covers;
            for (int v = 0; v < n; ++v)
                if (in[static_cast<size_t>(v)] > 1 || out[static_cast<size_t>(v)] > 1) {
                    ++bad;
                    break;
                }
        }
    }
    report(5, bad == 0, std::to_string(made) + " ring families, " + std::to_string(covers) + " minimal covers, " +
                            std::to_string(bad) + " violations");
}

struct CoverStats {
    int runs = 0, spiders = 0, spider_bad = 0, dual_bad = 0, density_bad = 0;
    int lp_checked = 0, lp_bad = 0;
    int iterations = 0, drop_bad = 0;
    std::vector<std::string> first;
};

void cover_runs(CoverStats& st) {
    for (size_t idx = 0; idx < corpus().size(); ++idx) {
        const Instance& inst = corpus()[idx];
        SolverConfig cfg;
        cfg.on_cover = [&](int, const Instance& work, const BisetFamily& fam) {
            ++st.runs;
            GreedyOptions go;
            go.keep_spiders = true;
            go.spider.observer = [&](const DualState& z) {
                if (!check_dual_feasible(work, z.laminar, z)) ++st.dual_bad;
            };
            GreedyResult g = greedy_cover(work, fam, go);
            for (size_t s = 0; s < g.spiders.size(); ++s) {
                const SpiderResult& r = g.spiders[s];
                const BisetFamily& fs_ = g.families[s];
                ++st.spiders;
                auto bad = verify_spider(work, fs_, r);
                if (!bad.empty()) {
                    ++st.spider_bad;
                    if (st.first.size() < 3) st.first.push_back("instance " + std::to_string(idx) + ": " + bad.front());
                }
                Rational w = r.spider.weights.total(work.weights);
                Rational m = r.min_core_count;
                Rational zsum = r.dual.core_sum();
                LPSolution slp = solve(build_simplelp(work, r.laminar));
                bool dens = slp.status == LPStatus::optimal && w / r.spider.num_feet() <= zsum / m &&
                            zsum / m <= slp.objective_value / m;
                if (!dens) ++st.density_bad;
                LPSolution np = solve(build_npclp(work, fs_).lp);
                ++st.lp_checked;
                if (slp.status != LPStatus::optimal || np.status != LPStatus::optimal ||
                    slp.objective_value > 2 * np.objective_value)
                    ++st.lp_bad;
            }
            for (const auto& it : g.reports) {
                ++st.iterations;
                long drop = it.phi_before - it.phi_after;
                bool ok = it.feet == 1 ? drop >= 1 : 2 * drop >= it.feet - 1;
                if (!ok) ++st.drop_bad;
            }
        };
        solve_pcnap(inst, cfg);
    }
}

void potential_check(const CoverStats& st) {
    bool ok = st.drop_bad == 0 && st.iterations > 0;
    std::ostringstream d;
    d << st.iterations << " iterations, " << st.drop_bad << " short drops; counterexample";
    for (int n = 2; n <= 4; ++n) {
        auto cf = potential_counterexample(n);
        GreedyOptions go;
        go.keep_spiders = true;
        GreedyResult g = greedy_cover(cf.inst, cf.family, go);
        bool here = g.reports.size() >= 2 && g.families.size() >= 2;
        if (here) {
            long drop = g.reports[0].phi_before - g.reports[0].phi_after;
            here = min_cores(g.families[1]).size() == min_cores(cf.family).size() && 2 * drop >= n - 1;
            d << " n=" << n << " |M| " << min_cores(cf.family).size() << "->" << min_cores(g.families[1]).size()
              << " phi " << g.reports[0].phi_before << "->" << g.reports[0].phi_after;
        } else {
            d << " n=" << n << " finished in one spider";
        }
        ok &= here;
    }
    report(8, ok, d.str());
}

void end_to_end() {
    int checked = 0, bad = 0;
    std::optional<Rational> worst;
    int worst_idx = -1;
    for (size_t idx = 0; idx < corpus().size(); ++idx) {
        const Instance& inst = corpus()[idx];
        Extended opt = brute_force_pcnap(inst).optimum;
        Solution s = solve_pcnap(inst);
        AuditReport a = audit(inst, s, opt);
        ++checked;
        bool ok = a.penalty_bound && a.ratio_ok && a.ratio && *a.ratio >= 1 && !s.objective.is_infinite();
        if (!ok) ++bad;
        if (a.ratio && (!worst || *a.ratio > *worst)) worst = *a.ratio, worst_idx = static_cast<int>(idx);
    }
    report(9, bad == 0, std::to_string(checked) + " instances, " + std::to_string(bad) + " violations, worst ratio " +
                            (worst ? to_string(*worst) : std::string("n/a")) + " at instance " + std::to_string(worst_idx));
}

std::string run_capture(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str() + "\n" + err.str();
}

std::string dir_bytes(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        all += f.filename().string() + "\n" + s.str();
    }
    return all;
}

void determinism() {
    fs::path base = fs::temp_directory_path() / "pcnap_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    fs::path corpus_dir = base / "corpus", run_dir = base / "run";
    std::string inst = (corpus_dir / "inst_0003.json").string();
    auto pass = [&] {
        fs::remove_all(corpus_dir);
        fs::remove_all(run_dir);
        fs::create_directories(run_dir);
        std::string all;
        int code = 0;
        all += run_capture({"corpus", "--seed", std::to_string(corpus_seed), "--count", "10", "--out", corpus_dir.string()}, code);
        all += dir_bytes(corpus_dir);
        all += run_capture({"validate", "--instance", inst}, code);
        all += run_capture({"oracle", "--instance", inst}, code);
        all += run_capture({"solve", "--instance", inst, "--audit", "--dump-lp", (run_dir / "lp.txt").string(), "--trace",
                            (run_dir / "trace.jsonl").string()}, code);
        all += run_capture({"solve", "--instance", inst, "--mode", "float:1e-9"}, code);
        all += run_capture({"spider-trace", "--instance", inst}, code);
        all += run_capture({"lp-audit", "--instance", inst}, code);
        all += run_capture({"gap-demo", "--m", "3"}, code);
        all += dir_bytes(run_dir);
        return all;
    };
    std::string first = pass();
    std::string second = pass();
    report(10, first == second && !first.empty(), "two passes of every command, " + std::to_string(first.size()) + " bytes each, " +
                                                     (first == second ? "identical" : "different"));
    fs::remove_all(base);
}

}  // namespace

int main() {
    gap_reproduction();
    relaxation_validity();
    uncrossability();
    menger();
    ring_cover();
    CoverStats st;
    cover_runs(st);
    std::string extra = st.first.empty() ? "" : " (" + st.first.front() + ")";
    report(6, st.spider_bad == 0 && st.dual_bad == 0 && st.density_bad == 0 && st.spiders > 0,
           std::to_string(st.runs) + " cover runs, " + std::to_string(st.spiders) + " spiders, " +
               std::to_string(st.spider_bad) + " invariant failures, " + std::to_string(st.dual_bad) +
               " infeasible duals, " + std::to_string(st.density_bad) + " density failures" + extra);
    report(7, st.lp_bad == 0 && st.lp_checked > 0,
           std::to_string(st.lp_checked) + " laminar families, " + std::to_string(st.lp_bad) + " above twice NPCLP");
    potential_check(st);
    end_to_end();
    determinism();
    return failures;
}
