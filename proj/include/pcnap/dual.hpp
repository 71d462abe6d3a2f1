#pragma once

#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "pcnap/biset.hpp"

namespace pcnap {

// Dual solution of the simple LP over the laminar family, plus the clock of the increase phase.
struct DualState {
    Rational clock = 0;
    std::map<Biset, Rational> z_core;
    // (core, node, weight level); node lies in the inner part or outside the outer part.
    std::map<std::tuple<Biset, int, int>, Rational> z_aux;
    BisetFamily active;
    BisetFamily laminar;
    std::set<std::pair<int, int>> tight_in;   // (v, j') with the inner cap tight
    std::set<std::pair<int, int>> tight_out;  // (u, j) with the outer cap tight

    Rational core_value(const Biset& b) const {
        auto it = z_core.find(b);
        return it == z_core.end() ? Rational(0) : it->second;
    }
    Rational aux_value(const Biset& b, int node, int level) const {
        auto it = z_aux.find({b, node, level});
        return it == z_aux.end() ? Rational(0) : it->second;
    }
    Rational core_sum() const {
        Rational s = 0;
        for (const auto& [b, v] : z_core) s += v;
        return s;
    }
};

}  // namespace pcnap
