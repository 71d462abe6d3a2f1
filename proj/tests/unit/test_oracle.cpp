#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "pcnap/corpus.hpp"
#include "pcnap/oracle.hpp"

using namespace pcnap;

namespace {

// Plain enumeration of every weight vector, sharing nothing with the oracle's pruning.
Extended naive_optimum(const Instance& inst) {
    const int n = inst.num_nodes(), l = inst.weights.size();
    WeightAssignment w = WeightAssignment::zeros(n);
    Extended best = Extended::infinity();
    while (true) {
        Extended v = objective_value(inst, w);
        if (v < best) best = v;
        int i = 0;
        while (i < n && ++w.level[static_cast<size_t>(i)] == l) w.level[static_cast<size_t>(i++)] = 0;
        if (i == n) break;
    }
    return best;
}

}  // namespace

TEST(Oracle, NoDemands) {
    Instance inst = fixtures::parse(R"({"nodes":["a","b"],"weights":[0,1],"candidate_edges":[],"demands":[]})");
    EXPECT_EQ(brute_force_pcnap(inst).optimum, Extended(0));
}

TEST(Oracle, GapInstance) {
    OracleResult r = brute_force_pcnap(gap_instance(5));
    EXPECT_EQ(r.optimum, Extended(1));
    EXPECT_EQ(r.witness.level[0], 1);
    EXPECT_EQ(r.satisfied, std::vector<int>{0});
}

TEST(Oracle, ZeroPenalties) {
    Instance inst = fixtures::parse(R"({"nodes":["a","b"],"weights":[0,1],
        "candidate_edges":[{"id":"ab","u":"a","v":"b","activation":[[1,1]]}],
        "demands":[{"s":"a","t":"b","r":1,"penalty":"0"}]})");
    OracleResult r = brute_force_pcnap(inst);
    EXPECT_EQ(r.optimum, Extended(0));
    EXPECT_EQ(r.witness, WeightAssignment::zeros(2));
}

TEST(Oracle, CoverExamples) {
    Instance inst = fixtures::single_edge_11();
    EXPECT_EQ(brute_force_cover(inst, BisetFamily{}).optimum, Extended(0));
    OracleResult r = brute_force_cover(inst, BisetFamily(std::vector<Biset>{Biset{0b01, 0b01}}));
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.optimum, Extended(2));
    Instance bare = fixtures::parse(R"({"nodes":["a","b"],"weights":[0,1],"candidate_edges":[],"demands":[]})");
    EXPECT_FALSE(brute_force_cover(bare, BisetFamily(std::vector<Biset>{Biset{0b01, 0b01}})).feasible);
}

TEST(Oracle, CapIsEnforced) {
    OracleOptions o;
    o.cap = 10;
    try {
        brute_force_pcnap(gap_instance(5), o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::cap_exceeded);
    }
}

TEST(Oracle, MatchesNaiveEnumeration) {
    for (int i = 0; i < 60; ++i) {
        Instance inst = generate_instance(53, i);
        OracleResult r = brute_force_pcnap(inst);
        EXPECT_EQ(r.optimum, naive_optimum(inst)) << i;
        EXPECT_EQ(objective_value(inst, r.witness), r.optimum) << i;
        OracleOptions serial;
        serial.parallel = false;
        EXPECT_EQ(brute_force_pcnap(inst, serial).optimum, r.optimum) << i;
    }
}
