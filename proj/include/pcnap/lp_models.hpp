#pragma once

#include <vector>

#include "pcnap/biset.hpp"
#include "pcnap/dual.hpp"
#include "pcnap/lp.hpp"

namespace pcnap {

// Which members a min-core's private copy of the arc variables must cover.
enum class PclpScope {
    members,  // every member including the min-core
    cores,    // only cores including the min-core
};

struct PclpOptions {
    PclpScope scope = PclpScope::cores;
    bool penalties = true;  // false gives the variant with every y fixed to 0
    // With the cores scope, members that are not cores get covering rows over unlifted arc variables.
    bool noncore_rows = true;
};

struct PclpModel {
    LPProblem lp;
    std::vector<std::vector<int>> node_var;  // [v][j]
    std::vector<int> y_var;                  // per demand, -1 when absent
    std::vector<Biset> min_cores;
};

PclpModel build_pclp(const Instance& inst, const BisetFamily& f, const PclpOptions& opts = {});
PclpModel build_npclp(const Instance& inst, const BisetFamily& f, const PclpOptions& opts = {});
PclpModel build_natural_lp(const Instance& inst, const BisetFamily& f);

LPProblem build_simplelp(const Instance& inst, const BisetFamily& f);
LPProblem build_simpledual(const Instance& inst, const BisetFamily& f);

// Sum of weight times x(v, j) in a solution of one of the models above.
Rational node_cost(const Instance& inst, const PclpModel& m, const LPSolution& sol);

bool check_dual_feasible(const Instance& inst, const BisetFamily& laminar, const DualState& z);

}  // namespace pcnap
