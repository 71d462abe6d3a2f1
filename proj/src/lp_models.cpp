#include "pcnap/lp_models.hpp"

#include <map>

namespace pcnap {

namespace {

struct ArcPair {
    Arc arc;
    int j;   // tail level
    int jp;  // head level
};

std::vector<ArcPair> arc_pairs(const Instance& inst) {
    std::vector<ArcPair> out;
    int levels = inst.weights.size();
    for (const auto& a : inst.arcs())
        for (int j = 0; j < levels; ++j)
            for (int jp = 0; jp < levels; ++jp)
                if (inst.arc_allows(a, j, jp)) out.push_back(ArcPair{a, j, jp});
    return out;
}

const std::string& name_of(const Instance& inst, int v) { return inst.nodes[static_cast<size_t>(v)]; }

std::string arc_name(const Instance& inst, const ArcPair& ap) {
    return name_of(inst, ap.arc.tail) + ">" + name_of(inst, ap.arc.head) + ":" +
           inst.candidate_edges[static_cast<size_t>(ap.arc.edge)].id + "," + std::to_string(ap.j) + "," +
           std::to_string(ap.jp);
}

std::string node_level(const Instance& inst, int v, int j) { return name_of(inst, v) + "," + std::to_string(j); }

std::vector<std::vector<int>> add_node_vars(const Instance& inst, LPProblem& lp, const std::string& prefix) {
    int n = inst.num_nodes();
    int levels = inst.weights.size();
    std::vector<std::vector<int>> ids(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(levels), -1));
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < levels; ++j)
            ids[static_cast<size_t>(v)][static_cast<size_t>(j)] =
                lp.add_variable(prefix + "(" + node_level(inst, v, j) + ")", inst.weights[j]);
    return ids;
}

std::vector<int> add_penalty_vars(const Instance& inst, const BisetFamily& f, LPProblem& lp) {
    DemandMask seen = 0;
    for (const auto& [b, l] : f.table()) seen |= l;
    std::vector<int> ids(inst.demands.size(), -1);
    for (size_t i = 0; i < inst.demands.size(); ++i) {
        const auto& pen = inst.demands[i].penalty;
        if (!((seen >> i) & 1u) || pen.is_infinite()) continue;
        ids[i] = lp.add_variable("y(" + std::to_string(i) + ")", pen.value());
    }
    return ids;
}

void require_nonempty(const BisetFamily& f) {
    if (f.empty()) fail(ErrorKind::precondition, "LP builders need a nonempty family");
}

// Covering rows, one per (member, label), over the arc variables entering the member.
void add_cover_rows(const Instance& inst, const std::vector<BisetFamily::Member>& sets,
                    const std::vector<ArcPair>& pairs, const std::vector<int>& arc_var, const std::vector<int>& y_var,
                    bool per_label, const std::string& row, const std::string& tag, LPProblem& lp) {
    for (const auto& m : sets) {
        std::vector<LinearTerm> base;
        for (size_t p = 0; p < pairs.size(); ++p)
            if (arc_var[p] >= 0 && covers_arc(pairs[p].arc.tail, pairs[p].arc.head, m.set))
                base.push_back(LinearTerm{arc_var[p], Rational(1)});
        std::string where = tag + format_biset(m.set, inst.nodes);
        if (!per_label) {
            lp.add_constraint(row + "[" + where + "]", base, Rational(1));
            continue;
        }
        for (int i = 0; i < max_demands; ++i) {
            if (!((m.labels >> i) & 1u)) continue;
            auto terms = base;
            if (i < static_cast<int>(y_var.size()) && y_var[static_cast<size_t>(i)] >= 0)
                terms.push_back(LinearTerm{y_var[static_cast<size_t>(i)], Rational(1)});
            lp.add_constraint(row + "[" + where + ",d" + std::to_string(i) + "]", std::move(terms), Rational(1));
        }
    }
}

// For each member X: out[u][j] covers the X-entering arcs leaving u at level j, in[v][j'] likewise.
void add_linking_rows(const Instance& inst, const std::vector<BisetFamily::Member>& sets,
                      const std::vector<ArcPair>& pairs, const std::vector<int>& arc_var,
                      const std::vector<std::vector<int>>& out_var, const std::vector<std::vector<int>>& in_var,
                      const std::string& c2, const std::string& c3, const std::string& tag, LPProblem& lp) {
    for (const auto& m : sets) {
        const Biset& X = m.set;
        std::map<std::pair<int, int>, std::vector<LinearTerm>> out_rows, in_rows;
        for (size_t p = 0; p < pairs.size(); ++p) {
            const auto& ap = pairs[p];
            if (arc_var[p] < 0 || !covers_arc(ap.arc.tail, ap.arc.head, X)) continue;
            out_rows[{ap.arc.tail, ap.j}].push_back(LinearTerm{arc_var[p], Rational(-1)});
            in_rows[{ap.arc.head, ap.jp}].push_back(LinearTerm{arc_var[p], Rational(-1)});
        }
        std::string where = tag + format_biset(X, inst.nodes);
        for (auto& [key, terms] : out_rows) {
            auto [u, j] = key;
            terms.push_back(LinearTerm{out_var[static_cast<size_t>(u)][static_cast<size_t>(j)], Rational(1)});
            lp.add_constraint(c2 + "[" + where + "," + node_level(inst, u, j) + "]", std::move(terms), Rational(0));
        }
        for (auto& [key, terms] : in_rows) {
            auto [v, jp] = key;
            terms.push_back(LinearTerm{in_var[static_cast<size_t>(v)][static_cast<size_t>(jp)], Rational(1)});
            lp.add_constraint(c3 + "[" + where + "," + node_level(inst, v, jp) + "]", std::move(terms), Rational(0));
        }
    }
}

PclpModel build_lifted(const Instance& inst, const BisetFamily& f, const PclpOptions& opts, const std::string& name) {
    require_nonempty(f);
    PclpModel m;
    m.lp.name = name;
    m.node_var = add_node_vars(inst, m.lp, "x");
    if (opts.penalties)
        m.y_var = add_penalty_vars(inst, f, m.lp);
    else
        m.y_var.assign(inst.demands.size(), -1);
    m.min_cores = min_cores(f).sets();
    BisetFamily pool = opts.scope == PclpScope::cores ? cores(f) : f;
    auto pairs = arc_pairs(inst);
    for (size_t k = 0; k < m.min_cores.size(); ++k) {
        const Biset& C = m.min_cores[k];
        std::vector<BisetFamily::Member> above;
        for (const auto& mem : pool.members())
            if (included(C, mem.set)) above.push_back(mem);
        std::vector<int> arc_var(pairs.size(), -1);
        std::string tag = "C" + std::to_string(k);
        for (size_t p = 0; p < pairs.size(); ++p)
            for (const auto& mem : above)
                if (covers_arc(pairs[p].arc.tail, pairs[p].arc.head, mem.set)) {
                    arc_var[p] = m.lp.add_variable("x(" + arc_name(inst, pairs[p]) + "," + tag + ")");
                    break;
                }
        add_cover_rows(inst, above, pairs, arc_var, m.y_var, true, "lp-c1", tag + ":", m.lp);
        add_linking_rows(inst, above, pairs, arc_var, m.node_var, m.node_var, "lp-c2", "lp-c3", tag + ":", m.lp);
    }
    if (opts.scope == PclpScope::cores && opts.noncore_rows) {
        // Members holding several min-cores get natural covering rows over shared arc variables.
        std::vector<BisetFamily::Member> rest;
        for (const auto& mem : f.members())
            if (!pool.contains(mem.set)) rest.push_back(mem);
        if (!rest.empty()) {
            std::vector<int> arc_var(pairs.size(), -1);
            for (size_t p = 0; p < pairs.size(); ++p)
                for (const auto& mem : rest)
                    if (covers_arc(pairs[p].arc.tail, pairs[p].arc.head, mem.set)) {
                        arc_var[p] = m.lp.add_variable("xn(" + arc_name(inst, pairs[p]) + ")");
                        break;
                    }
            add_cover_rows(inst, rest, pairs, arc_var, m.y_var, true, "lp-c1n", "", m.lp);
            for (size_t p = 0; p < pairs.size(); ++p) {
                if (arc_var[p] < 0) continue;
                const auto& ap = pairs[p];
                int tail = m.node_var[static_cast<size_t>(ap.arc.tail)][static_cast<size_t>(ap.j)];
                int head = m.node_var[static_cast<size_t>(ap.arc.head)][static_cast<size_t>(ap.jp)];
                m.lp.add_constraint("lp-c2n[" + arc_name(inst, ap) + "]", {{tail, 1}, {arc_var[p], -1}}, 0);
                m.lp.add_constraint("lp-c3n[" + arc_name(inst, ap) + "]", {{head, 1}, {arc_var[p], -1}}, 0);
            }
        }
    }
    return m;
}

}  // namespace

PclpModel build_pclp(const Instance& inst, const BisetFamily& f, const PclpOptions& opts) {
    return build_lifted(inst, f, opts, opts.penalties ? "PCLP" : "NPCLP");
}

PclpModel build_npclp(const Instance& inst, const BisetFamily& f, const PclpOptions& opts) {
    PclpOptions o = opts;
    o.penalties = false;
    return build_lifted(inst, f, o, "NPCLP");
}

PclpModel build_natural_lp(const Instance& inst, const BisetFamily& f) {
    require_nonempty(f);
    PclpModel m;
    m.lp.name = "NaturalLP";
    m.node_var = add_node_vars(inst, m.lp, "x");
    m.y_var = add_penalty_vars(inst, f, m.lp);
    m.min_cores = min_cores(f).sets();
    auto pairs = arc_pairs(inst);
    auto members = f.members();
    std::vector<int> arc_var(pairs.size(), -1);
    for (size_t p = 0; p < pairs.size(); ++p)
        for (const auto& mem : members)
            if (covers_arc(pairs[p].arc.tail, pairs[p].arc.head, mem.set)) {
                arc_var[p] = m.lp.add_variable("x(" + arc_name(inst, pairs[p]) + ")");
                break;
            }
    add_cover_rows(inst, members, pairs, arc_var, m.y_var, true, "ip.c1", "", m.lp);
    for (size_t p = 0; p < pairs.size(); ++p) {
        if (arc_var[p] < 0) continue;
        const auto& ap = pairs[p];
        int tail = m.node_var[static_cast<size_t>(ap.arc.tail)][static_cast<size_t>(ap.j)];
        int head = m.node_var[static_cast<size_t>(ap.arc.head)][static_cast<size_t>(ap.jp)];
        m.lp.add_constraint("ip.c2[" + arc_name(inst, ap) + "]", {{tail, 1}, {arc_var[p], -1}}, 0);
        m.lp.add_constraint("ip.c3[" + arc_name(inst, ap) + "]", {{head, 1}, {arc_var[p], -1}}, 0);
    }
    return m;
}

LPProblem build_simplelp(const Instance& inst, const BisetFamily& f) {
    require_nonempty(f);
    LPProblem lp;
    lp.name = "SimpleLP";
    auto in_var = add_node_vars(inst, lp, "x_in");
    auto out_var = add_node_vars(inst, lp, "x_out");
    auto pairs = arc_pairs(inst);
    auto members = f.members();
    std::vector<int> arc_var(pairs.size(), -1);
    for (size_t p = 0; p < pairs.size(); ++p)
        for (const auto& mem : members)
            if (covers_arc(pairs[p].arc.tail, pairs[p].arc.head, mem.set)) {
                arc_var[p] = lp.add_variable("x(" + arc_name(inst, pairs[p]) + ")");
                break;
            }
    add_cover_rows(inst, members, pairs, arc_var, {}, false, "primal-c1", "", lp);
    add_linking_rows(inst, members, pairs, arc_var, out_var, in_var, "primal-c2", "primal-c3", "", lp);
    return lp;
}

LPProblem build_simpledual(const Instance& inst, const BisetFamily& f) {
    require_nonempty(f);
    LPProblem lp;
    lp.name = "SimpleDual";
    lp.sense = Sense::maximize;
    auto pairs = arc_pairs(inst);
    auto members = f.members();
    int levels = inst.weights.size();

    std::map<Biset, int> zc;
    std::map<std::tuple<Biset, int, int>, int> za;
    for (const auto& mem : members) zc[mem.set] = lp.add_variable("z[" + format_biset(mem.set, inst.nodes) + "]", 1);
    // One auxiliary variable per non-vacuous linking row of the primal.
    auto aux = [&](const Biset& X, int node, int level) {
        auto key = std::make_tuple(X, node, level);
        auto it = za.find(key);
        if (it != za.end()) return it->second;
        int id = lp.add_variable("z[" + format_biset(X, inst.nodes) + "," + node_level(inst, node, level) + "]");
        za.emplace(key, id);
        return id;
    };

    std::vector<std::vector<std::vector<LinearTerm>>> c3(
        static_cast<size_t>(inst.num_nodes()), std::vector<std::vector<LinearTerm>>(static_cast<size_t>(levels)));
    auto c3p = c3;
    for (const auto& ap : pairs) {
        std::vector<LinearTerm> terms;
        for (const auto& mem : members) {
            if (!covers_arc(ap.arc.tail, ap.arc.head, mem.set)) continue;
            int zt = aux(mem.set, ap.arc.tail, ap.j);
            int zh = aux(mem.set, ap.arc.head, ap.jp);
            terms.push_back(LinearTerm{zt, Rational(1)});
            terms.push_back(LinearTerm{zh, Rational(1)});
            terms.push_back(LinearTerm{zc[mem.set], Rational(-1)});
        }
        if (terms.empty()) continue;
        lp.add_constraint("dual-c1[" + arc_name(inst, ap) + "]", std::move(terms), 0);
    }
    for (const auto& [key, id] : za) {
        const auto& [X, node, level] = key;
        auto& bucket = contains(X.inner, node) ? c3 : c3p;
        bucket[static_cast<size_t>(node)][static_cast<size_t>(level)].push_back(LinearTerm{id, Rational(-1)});
    }
    for (int v = 0; v < inst.num_nodes(); ++v)
        for (int j = 0; j < levels; ++j) {
            auto& in = c3[static_cast<size_t>(v)][static_cast<size_t>(j)];
            if (!in.empty())
                lp.add_constraint("dual-c3[" + node_level(inst, v, j) + "]", std::move(in), -inst.weights[j]);
            auto& out = c3p[static_cast<size_t>(v)][static_cast<size_t>(j)];
            if (!out.empty())
                lp.add_constraint("dual-c3p[" + node_level(inst, v, j) + "]", std::move(out), -inst.weights[j]);
        }
    return lp;
}

Rational node_cost(const Instance& inst, const PclpModel& m, const LPSolution& sol) {
    Rational c = 0;
    for (size_t v = 0; v < m.node_var.size(); ++v)
        for (size_t j = 0; j < m.node_var[v].size(); ++j)
            c += inst.weights[static_cast<int>(j)] * sol.value(m.node_var[v][j]);
    return c;
}

bool check_dual_feasible(const Instance& inst, const BisetFamily& laminar, const DualState& z) {
    int n = inst.num_nodes();
    int levels = inst.weights.size();
    for (const auto& [b, v] : z.z_core)
        if (v < 0 || (v != 0 && !laminar.contains(b))) return false;
    std::vector<std::vector<Rational>> in_sum(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(levels)));
    auto out_sum = in_sum;
    for (const auto& [key, v] : z.z_aux) {
        const auto& [b, node, level] = key;
        if (v < 0) return false;
        if (v == 0) continue;
        if (!laminar.contains(b) || contains(b.boundary(), node)) return false;
        if (contains(b.inner, node))
            in_sum[static_cast<size_t>(node)][static_cast<size_t>(level)] += v;
        else
            out_sum[static_cast<size_t>(node)][static_cast<size_t>(level)] += v;
    }
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < levels; ++j)
            if (in_sum[static_cast<size_t>(v)][static_cast<size_t>(j)] > inst.weights[j] ||
                out_sum[static_cast<size_t>(v)][static_cast<size_t>(j)] > inst.weights[j])
                return false;
    auto sets = laminar.sets();
    for (const auto& ap : arc_pairs(inst)) {
        Rational lhs = 0, rhs = 0;
        for (const auto& X : sets) {
            if (!covers_arc(ap.arc.tail, ap.arc.head, X)) continue;
            lhs += z.core_value(X);
            rhs += z.aux_value(X, ap.arc.tail, ap.j) + z.aux_value(X, ap.arc.head, ap.jp);
        }
        if (lhs > rhs) return false;
    }
    return true;
}

}  // namespace pcnap
