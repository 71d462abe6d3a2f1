#include "pcnap/biset.hpp"

#include <sstream>

#include "pcnap/connectivity.hpp"

namespace pcnap {

Biset intersect(const Biset& a, const Biset& b) { return Biset{a.inner & b.inner, a.outer & b.outer}; }
Biset unite(const Biset& a, const Biset& b) { return Biset{a.inner | b.inner, a.outer | b.outer}; }
Biset subtract(const Biset& a, const Biset& b) { return Biset{a.inner & ~b.outer, a.outer & ~b.inner}; }

std::vector<int> delta(const std::vector<std::pair<int, int>>& edges, const Biset& b) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
        if (covers(edges[static_cast<size_t>(i)].first, edges[static_cast<size_t>(i)].second, b)) out.push_back(i);
    return out;
}

std::vector<int> delta_in(const std::vector<Arc>& arcs, const Biset& b) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
        if (covers_arc(arcs[static_cast<size_t>(i)].tail, arcs[static_cast<size_t>(i)].head, b)) out.push_back(i);
    return out;
}

BisetFamily::BisetFamily(const std::vector<Biset>& sets, DemandMask labels) {
    for (const auto& b : sets) add(b, labels);
}

void BisetFamily::add(const Biset& b, DemandMask labels) {
    if (!subset_of(b.inner, b.outer)) fail(ErrorKind::invariant, "biset inner part not inside outer part");
    members_[b] |= labels;
}

DemandMask BisetFamily::labels_of(const Biset& b) const {
    auto it = members_.find(b);
    return it == members_.end() ? 0 : it->second;
}

std::vector<Biset> BisetFamily::sets() const {
    std::vector<Biset> out;
    out.reserve(members_.size());
    for (const auto& [b, l] : members_) out.push_back(b);
    return out;
}

std::vector<BisetFamily::Member> BisetFamily::members() const {
    std::vector<Member> out;
    out.reserve(members_.size());
    for (const auto& [b, l] : members_) out.push_back(Member{b, l});
    return out;
}

BisetFamily build_family(const Instance& inst, DemandMask active, int target_k) {
    int n = inst.num_nodes();
    if (n > 14) fail(ErrorKind::cap_exceeded, "families are enumerated for at most 14 nodes");
    if (target_k < 1) fail(ErrorKind::precondition, "target connectivity must be at least 1");
    int d = static_cast<int>(inst.demands.size());
    Multigraph g = base_graph(inst);
    NodeSet terms = inst.terminals();
    for (int i = 0; i < d; ++i) {
        if (!((active >> i) & 1u)) continue;
        const auto& dm = inst.demands[static_cast<size_t>(i)];
        if (connectivity(g, inst.kind, terms, dm.s, dm.t) < target_k - 1)
            fail(ErrorKind::precondition,
                 "demand " + std::to_string(i) + " is below connectivity " + std::to_string(target_k - 1));
    }

    BisetFamily f;
    NodeSet all = inst.all_nodes();
    int want = target_k - 1;
    auto consider = [&](const Biset& b) {
        int boundary = popcount(b.boundary());
        if (boundary > want) return;
        DemandMask labels = 0;
        for (int i = 0; i < d; ++i) {
            if (!((active >> i) & 1u)) continue;
            const auto& dm = inst.demands[static_cast<size_t>(i)];
            if (separates(b, dm.s, dm.t)) labels |= DemandMask{1} << i;
        }
        if (labels == 0) return;
        if (cut_value(g, b) != want) return;
        f.add(b, labels);
    };

    for (NodeSet x = 1; x < all; ++x) {
        if (inst.kind == ConnectivityKind::edge) {
            consider(Biset{x, x});
            continue;
        }
        NodeSet free = all & ~x;
        if (inst.kind == ConnectivityKind::element) free &= ~terms;
        for (NodeSet gam = free;; gam = (gam - 1) & free) {
            if (popcount(gam) <= want && (x | gam) != all) consider(Biset{x, x | gam});
            if (gam == 0) break;
        }
    }
    return f;
}

BisetFamily restrict_labels(const BisetFamily& f, DemandMask keep) {
    BisetFamily out;
    for (const auto& [b, l] : f.table())
        if (l & keep) out.add(b, l & keep);
    return out;
}

bool is_uncrossable(const BisetFamily& f) {
    auto sets = f.sets();
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = i + 1; j < sets.size(); ++j) {
            const auto& a = sets[i];
            const auto& b = sets[j];
            if (f.contains(intersect(a, b)) && f.contains(unite(a, b))) continue;
            if (f.contains(subtract(a, b)) && f.contains(subtract(b, a))) continue;
            return false;
        }
    return true;
}

bool is_ring(const BisetFamily& f) {
    auto sets = f.sets();
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = i + 1; j < sets.size(); ++j)
            if (!f.contains(intersect(sets[i], sets[j])) || !f.contains(unite(sets[i], sets[j]))) return false;
    return true;
}

bool is_strongly_laminar(const BisetFamily& f) {
    auto sets = f.sets();
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = i + 1; j < sets.size(); ++j)
            if (!strongly_disjoint(sets[i], sets[j]) && !comparable(sets[i], sets[j])) return false;
    return true;
}

BisetFamily min_cores(const BisetFamily& f) {
    BisetFamily out;
    auto sets = f.sets();
    for (const auto& a : sets) {
        bool minimal = true;
        for (const auto& b : sets)
            if (b != a && included(b, a)) {
                minimal = false;
                break;
            }
        if (minimal) out.add(a, f.labels_of(a));
    }
    return out;
}

BisetFamily cores(const BisetFamily& f) {
    auto mins = min_cores(f).sets();
    BisetFamily out;
    for (const auto& [b, l] : f.table()) {
        int count = 0;
        for (const auto& m : mins)
            if (included(m, b)) ++count;
        if (count == 1) out.add(b, l);
    }
    return out;
}

BisetFamily cores_above(const BisetFamily& f, const Biset& c) {
    if (!min_cores(f).contains(c)) fail(ErrorKind::precondition, "cores_above needs a min-core");
    BisetFamily out;
    for (const auto& m : cores(f).members())
        if (included(c, m.set)) out.add(m.set, m.labels);
    return out;
}

BisetFamily cores_above_avoiding(const BisetFamily& f, const Biset& c, int v) {
    BisetFamily out;
    for (const auto& m : cores_above(f, c).members())
        if (!contains(m.set.outer, v)) out.add(m.set, m.labels);
    return out;
}

Biset min_core_of(const BisetFamily& f, const Biset& b) {
    std::optional<Biset> found;
    for (const auto& m : min_cores(f).sets())
        if (included(m, b)) {
            if (found) fail(ErrorKind::invariant, "biset includes two min-cores");
            found = m;
        }
    if (!found) fail(ErrorKind::invariant, "biset includes no min-core");
    return *found;
}

BisetFamily residual(const BisetFamily& f, const std::vector<std::pair<int, int>>& edges) {
    BisetFamily out;
    for (const auto& [b, l] : f.table()) {
        bool covered = false;
        for (auto [u, v] : edges)
            if (covers(u, v, b)) {
                covered = true;
                break;
            }
        if (!covered) out.add(b, l);
    }
    return out;
}

bool check_ring_cover_degrees(const std::vector<std::pair<int, int>>& arcs, const BisetFamily& f,
                              int num_nodes) {
    for (const auto& b : f.sets()) {
        bool covered = false;
        for (auto [tail, head] : arcs)
            if (covers_arc(tail, head, b)) {
                covered = true;
                break;
            }
        if (!covered) fail(ErrorKind::precondition, "arc set does not cover the family");
    }
    std::vector<int> in(static_cast<size_t>(num_nodes), 0), out(static_cast<size_t>(num_nodes), 0);
    for (auto [tail, head] : arcs) {
        ++out[static_cast<size_t>(tail)];
        ++in[static_cast<size_t>(head)];
    }
    for (int v = 0; v < num_nodes; ++v)
        if (in[static_cast<size_t>(v)] > 1 || out[static_cast<size_t>(v)] > 1) return false;
    return true;
}

namespace {

std::string names_of(NodeSet s, const std::vector<std::string>& names) {
    std::string out;
    for (int v = 0; v < static_cast<int>(names.size()); ++v)
        if (contains(s, v)) {
            if (!out.empty()) out += ',';
            out += names[static_cast<size_t>(v)];
        }
    return out;
}

}  // namespace

std::string format_biset(const Biset& b, const std::vector<std::string>& names) {
    return "(" + names_of(b.inner, names) + "|" + names_of(b.boundary(), names) + ")";
}

std::string dump_family(const BisetFamily& f, const std::vector<std::string>& names) {
    std::ostringstream os;
    for (const auto& [b, l] : f.table()) {
        os << names_of(b.inner, names) << '|' << names_of(b.boundary(), names) << '|';
        bool first = true;
        for (int i = 0; i < max_demands; ++i)
            if ((l >> i) & 1u) {
                if (!first) os << ',';
                os << i;
                first = false;
            }
        os << '\n';
    }
    return os.str();
}

}  // namespace pcnap
