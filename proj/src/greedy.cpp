#include "pcnap/greedy.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "pcnap/lp_models.hpp"

namespace pcnap {

int max_boundary(const BisetFamily& f) {
    int g = 0;
    for (const auto& b : f.sets()) g = std::max(g, popcount(b.boundary()));
    return g;
}

long potential(const BisetFamily& mincores, int gamma) {
    auto sets = mincores.sets();
    if (max_boundary(mincores) > gamma) fail(ErrorKind::precondition, "gamma is below the largest boundary");
    long phi = static_cast<long>(gamma + 1) * static_cast<long>(sets.size());
    for (size_t a = 0; a < sets.size(); ++a) {
        NodeSet others = 0;
        for (size_t b = 0; b < sets.size(); ++b)
            if (b != a) others |= sets[b].boundary();
        phi += gamma - popcount(sets[a].boundary() & others);
    }
    return phi;
}

GreedyResult greedy_cover(const Instance& inst, const BisetFamily& f, const GreedyOptions& opts) {
    GreedyResult out;
    out.weights = WeightAssignment::zeros(inst.num_nodes());
    const int gamma = max_boundary(f);
    std::set<int> chosen;
    std::vector<std::pair<int, int>> pairs;
    BisetFamily rest = f;
    int iteration = 0;
    while (!rest.empty()) {
        PotentialReport rep;
        rep.iteration = ++iteration;
        rep.gamma = gamma;
        rep.phi_before = potential(min_cores(rest), gamma);
        SpiderResult sr = compute_spider(inst, rest, opts.spider);
        for (const auto& e : sr.spider.edges())
            if (chosen.insert(e.edge).second) {
                const auto& ce = inst.candidate_edges[static_cast<size_t>(e.edge)];
                pairs.emplace_back(ce.u, ce.v);
            }
        BisetFamily next = residual(f, pairs);
        rep.phi_after = potential(min_cores(next), gamma);
        rep.feet = sr.spider.num_feet();
        rep.weight_added = sr.spider.weights.total(inst.weights);
        long drop = rep.phi_before - rep.phi_after;
        rep.drop_bound_holds = rep.feet == 1 ? drop >= 1 : 2 * drop >= rep.feet - 1;
        if (opts.audit_simplelp) rep.simplelp_value = solve(build_simplelp(inst, sr.laminar)).objective_value;
        out.weights = pointwise_max(out.weights, sr.spider.weights);
        out.summed_cost += rep.weight_added;
        out.reports.push_back(rep);
        if (drop <= 0)
            fail(ErrorKind::invariant, "greedy iteration " + std::to_string(iteration) +
                                           " did not decrease the potential; residual family:\n" +
                                           dump_family(rest, inst.nodes));
        if (opts.keep_spiders) {
            out.spiders.push_back(std::move(sr));
            out.families.push_back(rest);
        }
        rest = std::move(next);
    }
    out.edges.assign(chosen.begin(), chosen.end());
    return out;
}

std::string report_json_line(const PotentialReport& r) {
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["phi_before"] = r.phi_before;
    j["phi_after"] = r.phi_after;
    j["feet"] = r.feet;
    j["weight_added"] = to_string(r.weight_added);
    if (r.simplelp_value) j["simplelp_value"] = to_string(*r.simplelp_value);
    return j.dump();
}

}  // namespace pcnap
