#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcnap/spider.hpp"

namespace pcnap {

struct PotentialReport {
    int iteration = 0;
    int gamma = 0;
    long phi_before = 0;
    long phi_after = 0;
    int feet = 0;
    Rational weight_added = 0;
    std::optional<Rational> simplelp_value;
    bool drop_bound_holds = true;
};

// (gamma + 1)|M| + sum over M of (gamma - |boundary nodes shared with another member|).
long potential(const BisetFamily& mincores, int gamma);
int max_boundary(const BisetFamily& f);

struct GreedyOptions {
    bool audit_simplelp = false;
    bool keep_spiders = false;
    SpiderOptions spider;
};

struct GreedyResult {
    WeightAssignment weights;
    Rational summed_cost = 0;
    std::vector<int> edges;  // candidate edge indices, sorted
    std::vector<PotentialReport> reports;
    std::vector<SpiderResult> spiders;
    std::vector<BisetFamily> families;  // the residual family each kept spider ran on
};

GreedyResult greedy_cover(const Instance& inst, const BisetFamily& f, const GreedyOptions& opts = {});

std::string report_json_line(const PotentialReport& r);

}  // namespace pcnap
