#include <gtest/gtest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "pcnap/corpus.hpp"

using namespace pcnap;
using fixtures::levels;
using fixtures::parse;

namespace {

void expect_validation(const std::string& text) {
    try {
        parse(text);
        FAIL() << "accepted: " << text;
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation) << e.what();
    }
}

const char* minimal = R"({"nodes":["a","b"],"weights":[0,1],"base_edges":[],
    "candidate_edges":[{"id":"ab","u":"a","v":"b","activation":[[1,1]]}],
    "demands":[{"s":"a","t":"b","r":1,"penalty":5}],"connectivity":"edge"})";

}  // namespace

TEST(Instance, MinimalDocument) {
    Instance inst = parse(minimal);
    ASSERT_EQ(inst.demands.size(), 1u);
    EXPECT_EQ(inst.num_nodes(), 2);
    EXPECT_EQ(inst.demands[0].penalty, Extended(Rational(5)));
    EXPECT_TRUE(inst.candidate_edges[0].relation.allows(1, 1));
    EXPECT_FALSE(inst.candidate_edges[0].relation.allows(1, 0));
}

TEST(Instance, RejectsNonMonotoneRelation) {
    expect_validation(R"({"nodes":["a","b"],"weights":[0,1],
        "candidate_edges":[{"id":"ab","u":"a","v":"b","activation_pairs":[[1,0]]}],
        "demands":[],"connectivity":"edge"})");
}

TEST(Instance, RejectsBadDocuments) {
    expect_validation("{");
    expect_validation(R"({"nodes":["a","b"],"weights":[0,1],
        "candidate_edges":[{"id":"ab","u":"a","v":"b","activation":[[2,1]]}],"demands":[]})");
    expect_validation(R"({"nodes":["a","b","c"],"weights":[0,1],"candidate_edges":[
        {"id":"x","u":"a","v":"b","activation":[[1,1]]},{"id":"x","u":"b","v":"c","activation":[[1,1]]}],"demands":[]})");
    expect_validation(R"({"nodes":["a","b"],"weights":[1,2],"demands":[]})");
    expect_validation(R"({"nodes":["a","b"],"weights":[0,1],"demands":[{"s":"a","t":"a","r":1,"penalty":1}]})");
    expect_validation(R"({"nodes":["a","b"],"weights":[0,1],"demands":[{"s":"a","t":"b","r":0,"penalty":1}]})");
}

TEST(Instance, GapInstanceHasOneDemand) {
    Instance inst = gap_instance(5);
    EXPECT_EQ(inst.demands.size(), 1u);
    EXPECT_TRUE(inst.demands[0].penalty.is_infinite());
    EXPECT_EQ(inst.candidate_edges.size(), 5u);
}

TEST(Instance, SerializationRoundTrips) {
    for (int i = 0; i < 20; ++i) {
        Instance inst = generate_instance(7, i);
        std::string text = serialize_instance(inst);
        EXPECT_EQ(serialize_instance(parse(text)), text);
    }
    std::string text = serialize_instance(parse(minimal));
    EXPECT_EQ(serialize_instance(parse(text)), text);
}

TEST(Instance, ActivationClosureIsMonotone) {
    for (int i = 0; i < 30; ++i) {
        Instance inst = generate_instance(3, i);
        const int L = inst.weights.size();
        for (const auto& e : inst.candidate_edges)
            for (int a = 0; a < L; ++a)
                for (int b = 0; b < L; ++b) {
                    if (!e.relation.allows(a, b)) continue;
                    for (int a2 = a; a2 < L; ++a2)
                        for (int b2 = b; b2 < L; ++b2) EXPECT_TRUE(e.relation.allows(a2, b2));
                }
    }
}

TEST(Instance, ActivatedEdges) {
    // Closure of {(1,1),(1,0),(0,1)} without (0,0).
    Instance inst = parse(R"({"nodes":["a","b"],"weights":[0,1],
        "candidate_edges":[{"id":"ab","u":"a","v":"b","activation":[[1,0],[0,1]]}],"demands":[]})");
    EXPECT_TRUE(activated_edges(inst, levels({0, 0})).empty());
    EXPECT_EQ(activated_edges(inst, levels({1, 0})), std::vector<int>{0});
    Instance one = fixtures::single_edge_11();
    EXPECT_TRUE(activated_edges(one, levels({1, 0})).empty());
    EXPECT_EQ(activated_edges(one, levels({1, 1})), std::vector<int>{0});
}

TEST(Instance, NodeWeightedEncodingActivatesEverything) {
    // psi(i, j) holds iff i >= w'(u) and j >= w'(v); w' = (2, 1, 0).
    Instance inst = parse(R"({"nodes":["a","b","c"],"weights":[0,1,2],"candidate_edges":[
        {"id":"ab","u":"a","v":"b","activation":[[2,1]]},
        {"id":"bc","u":"b","v":"c","activation":[[1,0]]},
        {"id":"ca","u":"c","v":"a","activation":[[0,2]]}],"demands":[]})");
    EXPECT_EQ(activated_edges(inst, levels({2, 1, 0})), (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(activated_edges(inst, levels({1, 1, 0})), std::vector<int>{1});
}

TEST(Instance, ActivationIsMonotoneInWeights) {
    for (int i = 0; i < 20; ++i) {
        Instance inst = generate_instance(5, i);
        const int n = inst.num_nodes(), L = inst.weights.size();
        std::mt19937 rng(i);
        for (int rep = 0; rep < 20; ++rep) {
            WeightAssignment lo = WeightAssignment::zeros(n), hi = lo;
            for (int v = 0; v < n; ++v) {
                lo.level[static_cast<size_t>(v)] = static_cast<int>(rng() % static_cast<unsigned>(L));
                hi.level[static_cast<size_t>(v)] = lo.level[static_cast<size_t>(v)] +
                    static_cast<int>(rng() % static_cast<unsigned>(L - lo.level[static_cast<size_t>(v)]));
            }
            auto a = activated_edges(inst, lo), b = activated_edges(inst, hi);
            EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
            Extended obj = objective_value(inst, lo);
            ASSERT_FALSE(obj.is_infinite());
            EXPECT_GE(obj.value(), 0);
        }
    }
}

TEST(Instance, ObjectiveValue) {
    Instance sat = parse(R"({"nodes":["a","b"],"weights":[0,1],"base_edges":[{"u":"a","v":"b"}],
        "demands":[{"s":"a","t":"b","r":1,"penalty":4}]})");
    EXPECT_EQ(objective_value(sat, levels({0, 0})), Extended(Rational(0)));
    Instance unsat = parse(R"({"nodes":["a","b","c"],"weights":[0,1],
        "candidate_edges":[{"id":"ab","u":"a","v":"b","activation":[[1,1]]}],
        "demands":[{"s":"a","t":"b","r":1,"penalty":5},{"s":"b","t":"c","r":1,"penalty":3}]})");
    EXPECT_EQ(objective_value(unsat, levels({0, 0, 0})), Extended(Rational(8)));
    EXPECT_EQ(objective_value(unsat, levels({1, 1, 0})), Extended(Rational(5)));
    Instance gap = gap_instance(5);
    WeightAssignment w = WeightAssignment::zeros(gap.num_nodes());
    w.level[0] = 1;  // the centre
    EXPECT_EQ(objective_value(gap, w), Extended(Rational(1)));
    EXPECT_TRUE(objective_value(gap, WeightAssignment::zeros(gap.num_nodes())).is_infinite());
}
