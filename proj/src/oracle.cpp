#include "pcnap/oracle.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <set>
#include <unordered_map>

#include "pcnap/connectivity.hpp"

namespace pcnap {

std::vector<std::vector<int>> candidate_levels(const Instance& inst) {
    std::vector<std::set<int>> sets(static_cast<size_t>(inst.num_nodes()), std::set<int>{0});
    for (const auto& e : inst.candidate_edges)
        for (auto [i, j] : e.relation.minimal_pairs()) {
            sets[static_cast<size_t>(e.u)].insert(i);
            sets[static_cast<size_t>(e.v)].insert(j);
        }
    std::vector<std::vector<int>> out;
    for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
    return out;
}

namespace {

void check_cap(const Instance& inst, const OracleOptions& opts) {
    double space = std::pow(static_cast<double>(inst.weights.size()), inst.num_nodes());
    if (space > opts.cap)
        fail(ErrorKind::cap_exceeded, "search space |W|^|V| = " + std::to_string(space) + " exceeds the oracle cap");
}

std::uint64_t active_mask(const Instance& inst, const WeightAssignment& w) {
    std::uint64_t m = 0;
    for (size_t e = 0; e < inst.candidate_edges.size(); ++e)
        if (edge_active(inst, inst.candidate_edges[e], w)) m |= std::uint64_t{1} << e;
    return m;
}

struct Best {
    std::optional<Extended> value;
    WeightAssignment witness;
};

// Scores every completion of the prefix fixed at node 0; nullopt means the assignment is not allowed.
using Scorer = std::function<std::optional<Extended>(const WeightAssignment&)>;

Best search_from(const std::vector<std::vector<int>>& cand, int first, const std::function<Scorer()>& make_scorer) {
    Scorer score = make_scorer();
    int n = static_cast<int>(cand.size());
    WeightAssignment w = WeightAssignment::zeros(n);
    w.level[0] = first;
    std::vector<size_t> pos(static_cast<size_t>(n), 0);
    for (int v = 1; v < n; ++v) w.level[static_cast<size_t>(v)] = cand[static_cast<size_t>(v)][0];
    Best best;
    while (true) {
        if (auto s = score(w); s && (!best.value || *s < *best.value)) {
            best.value = *s;
            best.witness = w;
        }
        int v = n - 1;
        while (v >= 1) {
            auto& p = pos[static_cast<size_t>(v)];
            if (++p < cand[static_cast<size_t>(v)].size()) {
                w.level[static_cast<size_t>(v)] = cand[static_cast<size_t>(v)][p];
                break;
            }
            p = 0;
            w.level[static_cast<size_t>(v)] = cand[static_cast<size_t>(v)][0];
            --v;
        }
        if (v < 1) break;
    }
    return best;
}

Best search(const Instance& inst, const OracleOptions& opts, const std::function<Scorer()>& make_scorer) {
    check_cap(inst, opts);
    if (inst.num_nodes() == 0) {
        Best b;
        auto s = make_scorer()(WeightAssignment{});
        if (s) b.value = *s;
        return b;
    }
    auto cand = candidate_levels(inst);
    std::vector<Best> parts;
    if (opts.parallel) {
        std::vector<std::future<Best>> jobs;
        for (int first : cand[0])
            jobs.push_back(std::async(std::launch::async, [&, first] { return search_from(cand, first, make_scorer); }));
        for (auto& j : jobs) parts.push_back(j.get());
    } else {
        for (int first : cand[0]) parts.push_back(search_from(cand, first, make_scorer));
    }
    Best best;
    for (auto& p : parts)
        if (p.value && (!best.value || *p.value < *best.value)) best = std::move(p);
    return best;
}

}  // namespace

OracleResult brute_force_pcnap(const Instance& inst, const OracleOptions& opts) {
    bool memo = inst.candidate_edges.size() <= 64;
    auto make_scorer = [&inst, memo]() -> Scorer {
        auto cache = std::make_shared<std::unordered_map<std::uint64_t, Extended>>();
        return [&inst, memo, cache](const WeightAssignment& w) -> std::optional<Extended> {
            if (!memo) return objective_value(inst, w);
            std::uint64_t key = active_mask(inst, w);
            auto it = cache->find(key);
            if (it == cache->end()) {
                Extended pen;
                auto sat = satisfied_demands(inst, w);
                std::vector<bool> ok(inst.demands.size(), false);
                for (int i : sat) ok[static_cast<size_t>(i)] = true;
                for (size_t i = 0; i < ok.size(); ++i)
                    if (!ok[i]) pen += inst.demands[i].penalty;
                it = cache->emplace(key, pen).first;
            }
            return Extended(w.total(inst.weights)) + it->second;
        };
    };
    Best b = search(inst, opts, make_scorer);
    OracleResult r;
    r.optimum = *b.value;
    r.witness = b.witness.level.empty() ? WeightAssignment::zeros(inst.num_nodes()) : b.witness;
    r.satisfied = satisfied_demands(inst, r.witness);
    if (!(objective_value(inst, r.witness) == r.optimum))
        fail(ErrorKind::invariant, "oracle witness does not reproduce the optimum");
    return r;
}

OracleResult brute_force_cover(const Instance& inst, const BisetFamily& f, const OracleOptions& opts) {
    std::vector<std::vector<int>> coverers;
    for (const auto& b : f.sets()) {
        std::vector<int> ids;
        for (size_t e = 0; e < inst.candidate_edges.size(); ++e) {
            const auto& ce = inst.candidate_edges[e];
            if (covers(ce.u, ce.v, b)) ids.push_back(static_cast<int>(e));
        }
        coverers.push_back(std::move(ids));
    }
    auto make_scorer = [&inst, &coverers]() -> Scorer {
        return [&inst, &coverers](const WeightAssignment& w) -> std::optional<Extended> {
            for (const auto& ids : coverers) {
                bool hit = false;
                for (int e : ids)
                    if (edge_active(inst, inst.candidate_edges[static_cast<size_t>(e)], w)) {
                        hit = true;
                        break;
                    }
                if (!hit) return std::nullopt;
            }
            return Extended(w.total(inst.weights));
        };
    };
    Best b = search(inst, opts, make_scorer);
    OracleResult r;
    r.feasible = b.value.has_value();
    r.optimum = r.feasible ? *b.value : Extended::infinity();
    r.witness = r.feasible && !b.witness.level.empty() ? b.witness : WeightAssignment::zeros(inst.num_nodes());
    r.satisfied = satisfied_demands(inst, r.witness);
    return r;
}

}  // namespace pcnap
