#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcnap/greedy.hpp"
#include "pcnap/lp_models.hpp"

namespace pcnap {

struct SolverConfig {
    SolveOptions lp;
    PclpScope scope = PclpScope::cores;
    bool noncore_rows = true;
    Rational drop_threshold{1, 2};  // demands with y(i) at or above this are given up
    bool audit_simplelp = false;
    bool record_trace = false;
    bool audit_npclp = true;  // solve the penalty-free LP on the pruned family each round
    // Sees the working instance and relaxation of each round before the solve.
    std::function<void(int round, const Instance&, const LPProblem&)> on_pclp;
    // Sees the working instance and the family handed to the greedy cover.
    std::function<void(int round, const Instance&, const BisetFamily&)> on_cover;
};

struct RoundRecord {
    int round = 0;                // target connectivity of this round
    std::vector<int> active;      // demands asked to reach the target
    std::vector<int> dropped;     // demands given up by LP rounding
    int family_size = 0;
    int min_cores = 0;
    Rational lp_value = 0;        // PCLP optimum
    Rational lp_node_cost = 0;    // weight part of the PCLP optimum
    Rational lp_penalty = 0;      // sum of pi_i y(i) over finite penalties
    std::string lp_method;
    std::optional<Rational> npclp_value;  // penalty-free LP on the pruned family
    WeightAssignment weights;
    Rational cost = 0;
    std::vector<int> moved_edges;  // original candidate edge indices moved into the base graph
    std::vector<PotentialReport> iterations;
    std::vector<std::string> trace;
};

struct Solution {
    WeightAssignment weights;
    std::vector<int> satisfied;
    Extended objective;
    Rational summed_cost = 0;  // sum of per-round costs, an upper bound on weights.total
    std::vector<RoundRecord> rounds;
};

// Node-connectivity instances are rejected.
Solution solve_pcnap(const Instance& inst, const SolverConfig& config = {});

struct AuditReport {
    bool npclp_bound = true;    // every round: NPCLP of the pruned family <= 2 * LP node cost
    bool penalty_bound = true;  // unpaid penalties <= 2 * sum of pi_i y(i) over rounds
    bool lp_lower_bound = true; // sum of round LP values <= k * oracle optimum
    bool ratio_ok = true;       // objective >= oracle optimum and finite
    std::optional<Rational> ratio;  // objective / oracle optimum; 1 when both vanish
    Extended penalty_paid;
    Rational penalty_budget = 0;
    Rational lp_total = 0;
    bool ok() const { return npclp_bound && penalty_bound && lp_lower_bound && ratio_ok; }
};

AuditReport audit(const Instance& inst, const Solution& sol, const std::optional<Extended>& oracle_value);

std::string solution_json(const Instance& inst, const Solution& sol, const std::optional<AuditReport>& audit);

}  // namespace pcnap
