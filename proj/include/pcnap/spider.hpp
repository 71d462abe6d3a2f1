#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pcnap/dual.hpp"

namespace pcnap {

// A candidate edge oriented the way it entered its witness.
struct SpiderEdge {
    int edge = 0;  // candidate edge index
    int tail = 0;
    int head = 0;
    int tail_level = 0;
    int head_level = 0;
    Biset witness;
};

struct Spider {
    int head = -1;
    std::vector<Biset> feet;
    std::vector<std::vector<SpiderEdge>> legs;  // one per foot
    WeightAssignment weights;

    int num_feet() const { return static_cast<int>(feet.size()); }
    std::vector<SpiderEdge> edges() const;
    std::vector<std::pair<int, int>> edge_pairs() const;
};

struct SpiderResult {
    Spider spider;
    BisetFamily laminar;
    DualState dual;
    int min_core_count = 0;
    std::vector<Biset> roots;  // tops of the chains the deletion phase ran on
    std::vector<SpiderEdge> added;  // every edge added during the increase phase
    std::vector<std::string> trace;
};

struct SpiderOptions {
    // Called with the dual state after every clock advance and every handled event.
    std::function<void(const DualState&)> observer;
    bool record_trace = false;
};

// Primal-dual increase phase up to the first terminating event, then deletion and assembly.
SpiderResult compute_spider(const Instance& inst, const BisetFamily& f, const SpiderOptions& opts = {});

// chain[0] is included in chain[1] and so on; edges[l] has witness chain[l].
// Returns the indices of the retained edges in increasing order.
std::vector<int> deletion_phase(const std::vector<Biset>& chain, const std::vector<SpiderEdge>& edges,
                                NodeSet all_nodes);

// Structural and density checks on a finished run; returns one message per violation.
std::vector<std::string> verify_spider(const Instance& inst, const BisetFamily& f, const SpiderResult& r);

}  // namespace pcnap
