#include "pcnap/solver.hpp"

#include <algorithm>

#include "json.hpp"

#include "pcnap/connectivity.hpp"

namespace pcnap {

namespace {

DemandMask mask_of(const std::vector<int>& ids) {
    DemandMask m = 0;
    for (int i : ids) m |= DemandMask{1} << i;
    return m;
}

int demand_connectivity(const Instance& work, int i) {
    const auto& d = work.demands[static_cast<size_t>(i)];
    return connectivity(base_graph(work), work.kind, work.terminals(), d.s, d.t);
}

}  // namespace

Solution solve_pcnap(const Instance& inst, const SolverConfig& config) {
    inst.validate();
    if (inst.kind == ConnectivityKind::node)
        fail(ErrorKind::validation, "node connectivity instances are not supported by the solver");
    if (static_cast<int>(inst.demands.size()) > max_demands)
        fail(ErrorKind::validation, "too many demands");

    Instance work = inst;
    std::vector<int> origin(inst.candidate_edges.size());
    for (size_t e = 0; e < origin.size(); ++e) origin[e] = static_cast<int>(e);

    Solution sol;
    sol.weights = WeightAssignment::zeros(inst.num_nodes());
    std::vector<bool> alive(inst.demands.size(), true);

    for (int k = 1; k <= inst.max_requirement(); ++k) {
        std::vector<int> active;
        for (size_t i = 0; i < inst.demands.size(); ++i)
            if (alive[i] && inst.demands[i].r >= k) active.push_back(static_cast<int>(i));
        if (active.empty()) continue;

        RoundRecord rec;
        rec.round = k;
        rec.active = active;
        rec.weights = WeightAssignment::zeros(inst.num_nodes());
        BisetFamily f = build_family(work, mask_of(active), k);
        rec.family_size = f.size();
        if (f.empty()) {
            sol.rounds.push_back(std::move(rec));
            continue;
        }
        rec.min_cores = min_cores(f).size();

        PclpModel model = build_pclp(work, f, PclpOptions{config.scope, true, config.noncore_rows});
        if (config.on_pclp) config.on_pclp(k, work, model.lp);
        LPSolution lp = solve(model.lp, config.lp);
        if (lp.status != LPStatus::optimal)
            fail(ErrorKind::infeasible, "round " + std::to_string(k) + " relaxation is " + to_string(lp.status));
        rec.lp_value = lp.objective_value;
        rec.lp_method = lp.method;
        rec.lp_node_cost = node_cost(work, model, lp);

        std::vector<int> kept;
        for (int i : active) {
            int y = model.y_var[static_cast<size_t>(i)];
            Rational yi = y >= 0 ? lp.value(y) : Rational(0);
            const auto& pen = inst.demands[static_cast<size_t>(i)].penalty;
            if (!pen.is_infinite()) rec.lp_penalty += pen.value() * yi;
            if (y >= 0 && yi >= config.drop_threshold) {
                rec.dropped.push_back(i);
                alive[static_cast<size_t>(i)] = false;
            } else {
                kept.push_back(i);
            }
        }

        BisetFamily pruned = restrict_labels(f, mask_of(kept));
        if (!pruned.empty()) {
            if (config.audit_npclp) {
                LPSolution np = solve(build_npclp(work, pruned, PclpOptions{config.scope, false, config.noncore_rows}).lp, config.lp);
                if (np.status == LPStatus::optimal) rec.npclp_value = np.objective_value;
            }
            if (config.on_cover) config.on_cover(k, work, pruned);
            GreedyOptions gopts;
            gopts.audit_simplelp = config.audit_simplelp;
            gopts.keep_spiders = config.record_trace;
            gopts.spider.record_trace = config.record_trace;
            GreedyResult g = greedy_cover(work, pruned, gopts);
            rec.weights = g.weights;
            rec.iterations = g.reports;
            for (const auto& s : g.spiders) rec.trace.insert(rec.trace.end(), s.trace.begin(), s.trace.end());
        }
        rec.cost = rec.weights.total(inst.weights);

        // Activated edges join the base graph and leave the candidate set.
        std::vector<int> on = activated_edges(work, rec.weights);
        std::vector<bool> moved(work.candidate_edges.size(), false);
        for (int e : on) {
            moved[static_cast<size_t>(e)] = true;
            const auto& ce = work.candidate_edges[static_cast<size_t>(e)];
            work.base_edges.emplace_back(ce.u, ce.v);
            rec.moved_edges.push_back(origin[static_cast<size_t>(e)]);
        }
        std::vector<CandidateEdge> rest;
        std::vector<int> rest_origin;
        for (size_t e = 0; e < work.candidate_edges.size(); ++e)
            if (!moved[e]) {
                rest.push_back(work.candidate_edges[e]);
                rest_origin.push_back(origin[e]);
            }
        work.candidate_edges = std::move(rest);
        origin = std::move(rest_origin);

        for (int i : kept)
            if (demand_connectivity(work, i) < k)
                fail(ErrorKind::invariant, "demand " + std::to_string(i) + " kept in round " + std::to_string(k) +
                                               " did not reach the target connectivity");

        sol.weights = pointwise_max(sol.weights, rec.weights);
        sol.summed_cost += rec.cost;
        sol.rounds.push_back(std::move(rec));
    }

    sol.satisfied = satisfied_demands(inst, sol.weights);
    sol.objective = objective_value(inst, sol.weights);
    std::vector<bool> sat(inst.demands.size(), false);
    for (int i : sol.satisfied) sat[static_cast<size_t>(i)] = true;
    for (size_t i = 0; i < inst.demands.size(); ++i)
        if (alive[i] && !sat[i]) fail(ErrorKind::invariant, "demand " + std::to_string(i) + " kept but unsatisfied");
    return sol;
}

AuditReport audit(const Instance& inst, const Solution& sol, const std::optional<Extended>& oracle_value) {
    AuditReport a;
    for (const auto& r : sol.rounds) {
        if (r.npclp_value && *r.npclp_value > 2 * r.lp_node_cost) a.npclp_bound = false;
        a.penalty_budget += r.lp_penalty;
        a.lp_total += r.lp_value;
    }
    std::vector<bool> sat(inst.demands.size(), false);
    for (int i : sol.satisfied) sat[static_cast<size_t>(i)] = true;
    for (size_t i = 0; i < inst.demands.size(); ++i)
        if (!sat[i]) a.penalty_paid += inst.demands[i].penalty;
    a.penalty_bound = a.penalty_paid <= Extended(2 * a.penalty_budget);
    if (oracle_value) {
        const Extended& opt = *oracle_value;
        if (opt.is_infinite()) {
            a.ratio_ok = false;
        } else {
            Rational k = inst.max_requirement();
            a.lp_lower_bound = a.lp_total <= k * opt.value();
            if (sol.objective.is_infinite()) {
                a.ratio_ok = false;
            } else if (opt.value() == 0) {
                a.ratio_ok = sol.objective.value() == 0;
                if (a.ratio_ok) a.ratio = Rational(1);
            } else {
                a.ratio = sol.objective.value() / opt.value();
                a.ratio_ok = *a.ratio >= 1;
            }
        }
    }
    return a;
}

std::string solution_json(const Instance& inst, const Solution& sol, const std::optional<AuditReport>& audit) {
    using json = nlohmann::ordered_json;
    auto weights = [&](const WeightAssignment& w) {
        json o = json::object();
        for (int v = 0; v < inst.num_nodes(); ++v)
            o[inst.nodes[static_cast<size_t>(v)]] = to_string(inst.weights[w.level[static_cast<size_t>(v)]]);
        return o;
    };
    json j;
    j["weights"] = weights(sol.weights);
    j["satisfied"] = sol.satisfied;
    j["objective"] = to_string(sol.objective);
    j["summed_cost"] = to_string(sol.summed_cost);
    json rounds = json::array();
    for (const auto& r : sol.rounds) {
        json o;
        o["round"] = r.round;
        o["active"] = r.active;
        o["dropped"] = r.dropped;
        o["family_size"] = r.family_size;
        o["min_cores"] = r.min_cores;
        o["lp_value"] = to_string(r.lp_value);
        o["lp_node_cost"] = to_string(r.lp_node_cost);
        o["lp_penalty"] = to_string(r.lp_penalty);
        o["lp_method"] = r.lp_method;
        o["npclp_value"] = r.npclp_value ? json(to_string(*r.npclp_value)) : json(nullptr);
        o["weights"] = weights(r.weights);
        o["cost"] = to_string(r.cost);
        json moved = json::array();
        for (int e : r.moved_edges) moved.push_back(inst.candidate_edges[static_cast<size_t>(e)].id);
        o["moved_edges"] = moved;
        json its = json::array();
        for (const auto& p : r.iterations) its.push_back(json::parse(report_json_line(p)));
        o["iterations"] = its;
        if (!r.trace.empty()) o["trace"] = r.trace;
        rounds.push_back(o);
    }
    j["rounds"] = rounds;
    if (audit) {
        json a;
        a["npclp_bound"] = audit->npclp_bound;
        a["penalty_bound"] = audit->penalty_bound;
        a["lp_lower_bound"] = audit->lp_lower_bound;
        a["ratio_ok"] = audit->ratio_ok;
        a["ratio"] = audit->ratio ? json(to_string(*audit->ratio)) : json(nullptr);
        a["penalty_paid"] = to_string(audit->penalty_paid);
        a["penalty_budget"] = to_string(audit->penalty_budget);
        a["lp_total"] = to_string(audit->lp_total);
        j["audit"] = a;
    }
    return j.dump(2);
}

}  // namespace pcnap
