#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcnap/instance.hpp"

namespace pcnap {

struct Biset {
    NodeSet inner = 0;
    NodeSet outer = 0;

    NodeSet boundary() const { return outer & ~inner; }
    friend auto operator<=>(const Biset&, const Biset&) = default;
};

inline Biset make_biset(NodeSet inner, NodeSet outer) { return Biset{inner, outer | inner}; }

Biset intersect(const Biset& a, const Biset& b);
Biset unite(const Biset& a, const Biset& b);
Biset subtract(const Biset& a, const Biset& b);

// a is included in b.
inline bool included(const Biset& a, const Biset& b) {
    return subset_of(a.inner, b.inner) && subset_of(a.outer, b.outer);
}
inline bool comparable(const Biset& a, const Biset& b) { return included(a, b) || included(b, a); }
inline bool strongly_disjoint(const Biset& a, const Biset& b) {
    return (a.inner & b.outer) == 0 && (a.outer & b.inner) == 0;
}

// Undirected: one end in the inner part, the other outside the outer part.
inline bool covers(int u, int v, const Biset& b) {
    NodeSet out = ~b.outer;
    return (contains(b.inner, u) && contains(out, v)) || (contains(b.inner, v) && contains(out, u));
}
// Directed: head inside, tail outside the outer part.
inline bool covers_arc(int tail, int head, const Biset& b) {
    return contains(b.inner, head) && !contains(b.outer, tail);
}

std::vector<int> delta(const std::vector<std::pair<int, int>>& edges, const Biset& b);
std::vector<int> delta_in(const std::vector<Arc>& arcs, const Biset& b);

using DemandMask = std::uint64_t;
inline constexpr int max_demands = 64;

class BisetFamily {
public:
    struct Member {
        Biset set;
        DemandMask labels;
    };

    BisetFamily() = default;
    explicit BisetFamily(const std::vector<Biset>& sets, DemandMask labels = 1);

    // Merges labels when the biset is already present.
    void add(const Biset& b, DemandMask labels);
    void erase(const Biset& b) { members_.erase(b); }
    bool contains(const Biset& b) const { return members_.count(b) != 0; }
    DemandMask labels_of(const Biset& b) const;

    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    std::vector<Biset> sets() const;
    std::vector<Member> members() const;
    const std::map<Biset, DemandMask>& table() const { return members_; }

    friend bool operator==(const BisetFamily&, const BisetFamily&) = default;

private:
    std::map<Biset, DemandMask> members_;
};

BisetFamily build_family(const Instance& inst, DemandMask active, int target_k);
// Members whose labels meet keep, with labels restricted to keep.
BisetFamily restrict_labels(const BisetFamily& f, DemandMask keep);

bool is_uncrossable(const BisetFamily& f);
bool is_ring(const BisetFamily& f);
bool is_strongly_laminar(const BisetFamily& f);

BisetFamily min_cores(const BisetFamily& f);
BisetFamily cores(const BisetFamily& f);
BisetFamily cores_above(const BisetFamily& f, const Biset& c);
BisetFamily cores_above_avoiding(const BisetFamily& f, const Biset& c, int v);
// The min-core of f included by b; throws unless exactly one.
Biset min_core_of(const BisetFamily& f, const Biset& b);

BisetFamily residual(const BisetFamily& f, const std::vector<std::pair<int, int>>& edges);

// Pre: arcs (tail, head) form an inclusion-minimal cover of the ring family f.
bool check_ring_cover_degrees(const std::vector<std::pair<int, int>>& arcs, const BisetFamily& f,
                              int num_nodes);

std::string dump_family(const BisetFamily& f, const std::vector<std::string>& names);
std::string format_biset(const Biset& b, const std::vector<std::string>& names);

}  // namespace pcnap
