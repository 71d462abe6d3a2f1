#pragma once

#include <string>

#include "pcnap/instance.hpp"

namespace fixtures {

inline pcnap::Instance parse(const std::string& text) { return pcnap::parse_instance(text); }

// One biset {a} against {b}, covered only by ab with minimal pair (1,1).
inline pcnap::Instance single_edge_11() {
    return parse(R"({"nodes":["a","b"],"weights":[0,1],"base_edges":[],
        "candidate_edges":[{"id":"ab","u":"a","v":"b","activation":[[1,1]]}],
        "demands":[{"s":"a","t":"b","r":1,"penalty":"inf"}],"connectivity":"edge"})");
}

inline pcnap::WeightAssignment levels(std::initializer_list<int> l) { return pcnap::WeightAssignment{std::vector<int>(l)}; }

}  // namespace fixtures
