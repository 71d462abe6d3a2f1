#pragma once

#include <cstdint>
#include <vector>

#include "pcnap/biset.hpp"

namespace pcnap {

struct OracleResult {
    Extended optimum;
    WeightAssignment witness;
    std::vector<int> satisfied;
    bool feasible = true;
};

struct OracleOptions {
    double cap = 1e7;  // bound on |W|^|V|
    bool parallel = true;
};

// Candidate levels per node: 0 plus every coordinate of a minimal activating pair on that node's side.
std::vector<std::vector<int>> candidate_levels(const Instance& inst);

// Exact minimum of the objective over all node weight assignments.
OracleResult brute_force_pcnap(const Instance& inst, const OracleOptions& opts = {});

// Minimum w(V) whose activated edges cover every member of f; feasible = false when none does.
OracleResult brute_force_cover(const Instance& inst, const BisetFamily& f, const OracleOptions& opts = {});

}  // namespace pcnap
