#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pcnap/biset.hpp"

namespace pcnap {

struct CorpusBounds {
    int min_nodes = 3;
    int max_nodes = 8;
    int max_weights = 3;  // |W|
    int max_requirement = 2;
    int max_demands = 3;
    int max_candidates = 8;
    bool infinite_penalties = false;

    static constexpr int node_cap = 8;
    static constexpr int weight_cap = 3;
    static constexpr int requirement_cap = 2;
    void validate() const;
};

// Instance number index of the corpus for seed; edge and element kinds alternate.
Instance generate_instance(std::uint64_t seed, int index, const CorpusBounds& bounds = {});
std::vector<Instance> generate_corpus(std::uint64_t seed, int count, const CorpusBounds& bounds = {});

// Star centred at u with m candidate edges to a base path v1..vm; one mandatory demand (u, v1).
Instance gap_instance(int m);

// n nested pairs X_l inside Y_l whose outer parts share the node h; the family is strongly laminar.
struct CounterexampleFamily {
    Instance inst;
    BisetFamily family;
    int h = 0;
    std::vector<Biset> inner;  // X_l
    std::vector<Biset> outer;  // Y_l
};
CounterexampleFamily potential_counterexample(int n);

}  // namespace pcnap
