#pragma once

// Exhaustive reference computations used as test oracles. They share no code with the library
// beyond the data types.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "pcnap/biset.hpp"
#include "pcnap/lp.hpp"

namespace oracle_support {

using pcnap::Biset;
using pcnap::NodeSet;
using pcnap::Rational;
using Edges = std::vector<std::pair<int, int>>;

inline bool has(NodeSet s, int v) { return (s >> v) & 1u; }

// Simple s-t paths as edge index lists plus their node sets.
struct Path {
    std::vector<int> edges;
    NodeSet nodes = 0;
};

inline std::vector<Path> simple_paths(int n, const Edges& edges, int s, int t) {
    std::vector<Path> out;
    std::vector<int> stack;
    std::function<void(int, NodeSet)> walk = [&](int v, NodeSet seen) {
        if (v == t) {
            out.push_back(Path{stack, seen});
            return;
        }
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            auto [a, b] = edges[static_cast<size_t>(e)];
            int w = a == v ? b : (b == v ? a : -1);
            if (w < 0 || has(seen, w)) continue;
            stack.push_back(e);
            walk(w, seen | (NodeSet{1} << w));
            stack.pop_back();
        }
    };
    (void)n;
    walk(s, NodeSet{1} << s);
    return out;
}

// Largest packing of paths that pairwise share no edge and no node of the forbidden set.
inline int max_path_packing(const std::vector<Path>& paths, NodeSet shared_forbidden) {
    int best = 0;
    std::vector<int> used_edges;
    std::function<void(size_t, int, NodeSet)> rec = [&](size_t i, int count, NodeSet nodes) {
        best = std::max(best, count);
        if (count + static_cast<int>(paths.size() - i) <= best) return;
        for (size_t k = i; k < paths.size(); ++k) {
            const Path& p = paths[k];
            if ((p.nodes & nodes & shared_forbidden) != 0) continue;
            bool clash = false;
            for (int e : p.edges)
                if (std::find(used_edges.begin(), used_edges.end(), e) != used_edges.end()) clash = true;
            if (clash) continue;
            used_edges.insert(used_edges.end(), p.edges.begin(), p.edges.end());
            rec(k + 1, count + 1, nodes | p.nodes);
            used_edges.resize(used_edges.size() - p.edges.size());
        }
    };
    rec(0, 0, 0);
    return best;
}

inline int paths_edge(int n, const Edges& e, int s, int t) { return max_path_packing(simple_paths(n, e, s, t), 0); }

inline int paths_node(int n, const Edges& e, int s, int t) {
    NodeSet inner = ((NodeSet{1} << n) - 1) & ~(NodeSet{1} << s) & ~(NodeSet{1} << t);
    // A direct s-t edge is not internally shared, but two copies of it are distinct paths only for edges.
    return max_path_packing(simple_paths(n, e, s, t), inner);
}

inline int paths_element(int n, const Edges& e, NodeSet terminals, int s, int t) {
    NodeSet nonterminal = ((NodeSet{1} << n) - 1) & ~terminals;
    return max_path_packing(simple_paths(n, e, s, t), nonterminal);
}

// Minimum over explicit cuts: removed inner nodes from the allowed set, then an edge cut.
inline int cut_min(int n, const Edges& edges, int s, int t, NodeSet removable) {
    int best = 1 << 30;
    NodeSet all = (NodeSet{1} << n) - 1;
    for (NodeSet gone = removable;; gone = (gone - 1) & removable) {
        for (NodeSet side = 0; side <= all; ++side) {
            if (!has(side, s) || has(side, t) || (side & gone)) continue;
            int c = __builtin_popcount(gone);
            for (auto [a, b] : edges) {
                if (has(gone, a) || has(gone, b)) continue;
                if (has(side, a) != has(side, b)) ++c;
            }
            best = std::min(best, c);
        }
        if (gone == 0) break;
    }
    return best;
}

// Every biset (X, X+) with nonempty X and X+ != V, optionally restricted to boundaries inside `allowed`.
inline std::vector<Biset> all_bisets(int n, NodeSet allowed_boundary) {
    std::vector<Biset> out;
    NodeSet all = (NodeSet{1} << n) - 1;
    for (NodeSet x = 1; x <= all; ++x)
        for (NodeSet outer = x; outer < all; outer = (outer + 1) | x) {
            if (((outer & ~x) & ~allowed_boundary) != 0) continue;
            out.push_back(Biset{x, outer});
        }
    return out;
}

inline int biset_cut(const Edges& base, const Biset& b) {
    int c = __builtin_popcount(b.outer & ~b.inner);
    for (auto [u, v] : base)
        if ((has(b.inner, u) && !has(b.outer, v)) || (has(b.inner, v) && !has(b.outer, u))) ++c;
    return c;
}

// Exact LP optimum by vertex enumeration over all bases of the constraint system with x >= 0.
// Only for a handful of variables. Returns nullopt when infeasible; unbounded is not detected.
inline std::optional<Rational> lp_by_vertices(const pcnap::LPProblem& p) {
    const int n = p.num_variables();
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (const auto& c : p.constraints()) {
        std::vector<Rational> r(static_cast<size_t>(n), 0);
        for (const auto& t : c.terms) r[static_cast<size_t>(t.var)] += t.coef;
        rows.push_back(r);
        rhs.push_back(c.rhs);
    }
    for (int v = 0; v < n; ++v) {
        std::vector<Rational> r(static_cast<size_t>(n), 0);
        r[static_cast<size_t>(v)] = 1;
        rows.push_back(r);
        rhs.push_back(0);
    }
    const int m = static_cast<int>(rows.size());
    std::optional<Rational> best;
    std::vector<int> pick;
    std::function<void(int)> choose = [&](int start) {
        if (static_cast<int>(pick.size()) == n) {
            // Solve the square system by Gauss-Jordan elimination.
            std::vector<std::vector<Rational>> a;
            for (int r : pick) {
                auto row = rows[static_cast<size_t>(r)];
                row.push_back(rhs[static_cast<size_t>(r)]);
                a.push_back(row);
            }
            for (int col = 0; col < n; ++col) {
                int piv = -1;
                for (int r = col; r < n; ++r)
                    if (a[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) piv = r;
                if (piv < 0) return;
                std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
                Rational d = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
                for (auto& x : a[static_cast<size_t>(col)]) x /= d;
                for (int r = 0; r < n; ++r) {
                    if (r == col) continue;
                    Rational f = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
                    if (f == 0) continue;
                    for (int k = 0; k <= n; ++k)
                        a[static_cast<size_t>(r)][static_cast<size_t>(k)] -= f * a[static_cast<size_t>(col)][static_cast<size_t>(k)];
                }
            }
            std::vector<Rational> x(static_cast<size_t>(n));
            for (int v = 0; v < n; ++v) x[static_cast<size_t>(v)] = a[static_cast<size_t>(v)][static_cast<size_t>(n)];
            for (int r = 0; r < m; ++r) {
                Rational lhs = 0;
                for (int v = 0; v < n; ++v) lhs += rows[static_cast<size_t>(r)][static_cast<size_t>(v)] * x[static_cast<size_t>(v)];
                if (lhs < rhs[static_cast<size_t>(r)]) return;
            }
            Rational obj = 0;
            for (int v = 0; v < n; ++v) obj += p.cost(v) * x[static_cast<size_t>(v)];
            if (p.sense == pcnap::Sense::maximize) obj = -obj;
            if (!best || obj < *best) best = obj;
            return;
        }
        for (int r = start; r < m; ++r) {
            pick.push_back(r);
            choose(r + 1);
            pick.pop_back();
        }
    };
    choose(0);
    if (best && p.sense == pcnap::Sense::maximize) best = -*best;
    return best;
}

// Closure of random bisets under intersection and union. Every inner part holds node 0 and every
// outer part misses node n-1, so the closure never leaves the biset space.
inline pcnap::BisetFamily random_ring_family(std::mt19937_64& rng, int n, int seeds) {
    std::vector<Biset> fam;
    NodeSet all = (NodeSet{1} << n) - 1;
    std::uniform_int_distribution<NodeSet> pick(1, all - 1);
    while (static_cast<int>(fam.size()) < seeds) {
        NodeSet top = NodeSet{1} << (n - 1);
        NodeSet a = (pick(rng) | 1u) & ~top, b = (pick(rng) | 1u) & ~top;
        Biset s{a & b, a | b};
        if (std::find(fam.begin(), fam.end(), s) == fam.end()) fam.push_back(s);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        size_t sz = fam.size();
        for (size_t i = 0; i < sz; ++i)
            for (size_t j = 0; j < sz; ++j) {
                Biset c{fam[i].inner & fam[j].inner, fam[i].outer & fam[j].outer};
                Biset u{fam[i].inner | fam[j].inner, fam[i].outer | fam[j].outer};
                for (const Biset& x : {c, u}) {
                    if (x.inner == 0 || x.outer == all) continue;
                    if (std::find(fam.begin(), fam.end(), x) == fam.end()) {
                        fam.push_back(x);
                        grew = true;
                    }
                }
            }
    }
    return pcnap::BisetFamily(fam);
}

inline bool arc_covers(int tail, int head, const Biset& b) { return has(b.inner, head) && !has(b.outer, tail); }

// All inclusion-minimal arc sets of the complete digraph on n nodes covering every member.
inline std::vector<Edges> minimal_arc_covers(const pcnap::BisetFamily& f, int n) {
    Edges arcs;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    auto sets = f.sets();
    const int m = static_cast<int>(arcs.size());
    std::vector<uint32_t> cover_masks;
    auto covers_all = [&](uint32_t mask) {
        for (const auto& b : sets) {
            bool ok = false;
            for (int a = 0; a < m && !ok; ++a)
                if ((mask >> a) & 1u) ok = arc_covers(arcs[static_cast<size_t>(a)].first, arcs[static_cast<size_t>(a)].second, b);
            if (!ok) return false;
        }
        return true;
    };
    std::vector<Edges> out;
    for (uint32_t mask = 0; mask < (uint32_t{1} << m); ++mask) {
        if (!covers_all(mask)) continue;
        bool minimal = true;
        for (int a = 0; a < m && minimal; ++a)
            if ((mask >> a) & 1u) minimal = !covers_all(mask & ~(uint32_t{1} << a));
        if (!minimal) continue;
        Edges c;
        for (int a = 0; a < m; ++a)
            if ((mask >> a) & 1u) c.push_back(arcs[static_cast<size_t>(a)]);
        out.push_back(c);
    }
    return out;
}

}  // namespace oracle_support
