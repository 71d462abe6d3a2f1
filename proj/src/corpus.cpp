#include "pcnap/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace pcnap {

void CorpusBounds::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) fail(ErrorKind::validation, std::string("corpus bound out of range: ") + what);
    };
    require(min_nodes >= 3 && min_nodes <= max_nodes, "nodes");
    require(max_nodes <= node_cap, "nodes");
    require(max_weights >= 2 && max_weights <= weight_cap, "weights");
    require(max_requirement >= 1 && max_requirement <= requirement_cap, "requirement");
    require(max_demands >= 1 && max_demands <= 8, "demands");
    require(max_candidates >= 3 && max_candidates <= 16, "candidate edges");
}

namespace {

std::string name(int v) { return "v" + std::to_string(v); }

class Rng {
public:
    Rng(std::uint64_t seed, int index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index)};
        gen_.seed(seq);
    }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin(int percent) { return uniform(0, 99) < percent; }
    std::pair<int, int> pair(int n) {
        int a = uniform(0, n - 1);
        int b = uniform(0, n - 2);
        if (b >= a) ++b;
        return {a, b};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace

Instance generate_instance(std::uint64_t seed, int index, const CorpusBounds& bounds) {
    bounds.validate();
    Rng rng(seed, index);
    Instance inst;
    inst.kind = index % 2 == 0 ? ConnectivityKind::edge : ConnectivityKind::element;
    int n = rng.uniform(bounds.min_nodes, bounds.max_nodes);
    for (int v = 0; v < n; ++v) inst.nodes.push_back(name(v));

    int levels = rng.uniform(2, bounds.max_weights);
    std::vector<Rational> w{0};
    for (int l = 1; l < levels; ++l) w.push_back(w.back() + rng.uniform(1, 2));
    inst.weights = WeightSet(w);

    if (rng.coin(40)) {
        std::vector<int> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(rng.uniform(0, i))]);
        for (int i = 1; i < n; ++i)
            inst.base_edges.emplace_back(order[static_cast<size_t>(rng.uniform(0, i - 1))], order[static_cast<size_t>(i)]);
    } else {
        int m = rng.uniform(0, n - 2);
        for (int i = 0; i < m; ++i) inst.base_edges.push_back(rng.pair(n));
    }

    int ce = rng.uniform(3, bounds.max_candidates);
    for (int e = 0; e < ce; ++e) {
        CandidateEdge c;
        c.id = "e" + std::to_string(e);
        std::tie(c.u, c.v) = rng.pair(n);
        std::vector<std::pair<int, int>> mins;
        int count = rng.uniform(1, 2);
        for (int p = 0; p < count; ++p) {
            int a = rng.uniform(0, levels - 1);
            int b = rng.uniform(0, levels - 1);
            if (a == 0 && b == 0 && !rng.coin(10)) a = 1;
            mins.emplace_back(a, b);
        }
        c.relation = ActivationRelation::from_minimal_pairs(levels, mins);
        inst.candidate_edges.push_back(std::move(c));
    }

    int d = rng.uniform(1, bounds.max_demands);
    for (int i = 0; i < d; ++i) {
        Demand dem;
        std::tie(dem.s, dem.t) = rng.pair(n);
        dem.r = rng.uniform(1, bounds.max_requirement);
        if (bounds.infinite_penalties && rng.coin(25))
            dem.penalty = Extended::infinity();
        else
            dem.penalty = Extended(Rational(rng.uniform(0, 6)));
        inst.demands.push_back(dem);
    }
    inst.validate();
    return inst;
}

std::vector<Instance> generate_corpus(std::uint64_t seed, int count, const CorpusBounds& bounds) {
    bounds.validate();
    std::vector<Instance> out;
    for (int i = 0; i < count; ++i) out.push_back(generate_instance(seed, i, bounds));
    return out;
}

Instance gap_instance(int m) {
    if (m < 2) fail(ErrorKind::validation, "gap construction needs m >= 2");
    Instance inst;
    inst.kind = ConnectivityKind::edge;
    inst.nodes.push_back("u");
    for (int i = 1; i <= m; ++i) inst.nodes.push_back("v" + std::to_string(i));
    inst.weights = WeightSet({Rational(0), Rational(1)});
    for (int i = 1; i < m; ++i) inst.base_edges.emplace_back(i, i + 1);
    for (int i = 1; i <= m; ++i) {
        CandidateEdge c;
        c.id = "e" + std::to_string(i);
        c.u = 0;
        c.v = i;
        c.relation = ActivationRelation::from_minimal_pairs(2, {{1, 0}});
        inst.candidate_edges.push_back(std::move(c));
    }
    inst.demands.push_back(Demand{0, 1, 1, Extended::infinity()});
    inst.validate();
    return inst;
}

CounterexampleFamily potential_counterexample(int n) {
    if (n < 1) fail(ErrorKind::validation, "counterexample needs n >= 1");
    CounterexampleFamily cf;
    Instance& inst = cf.inst;
    inst.nodes = {"h", "z"};
    for (int l = 1; l <= n; ++l) {
        inst.nodes.push_back("x" + std::to_string(l));
        inst.nodes.push_back("y" + std::to_string(l));
    }
    inst.weights = WeightSet({Rational(0), Rational(1)});
    cf.h = 0;
    for (int l = 0; l < n; ++l) {
        int x = 2 + 2 * l, y = 3 + 2 * l;
        CandidateEdge a;
        a.id = "hx" + std::to_string(l + 1);
        a.u = 0;
        a.v = x;
        a.relation = ActivationRelation::from_minimal_pairs(2, {{1, 0}});
        inst.candidate_edges.push_back(std::move(a));
        CandidateEdge b;
        b.id = "zy" + std::to_string(l + 1);
        b.u = 1;
        b.v = y;
        b.relation = ActivationRelation::from_minimal_pairs(2, {{1, 1}});
        inst.candidate_edges.push_back(std::move(b));
        Biset X = make_biset(bit(x), bit(x));
        Biset Y = make_biset(bit(x) | bit(y), bit(x) | bit(y) | bit(0));
        cf.inner.push_back(X);
        cf.outer.push_back(Y);
        cf.family.add(X, 1);
        cf.family.add(Y, 1);
    }
    inst.demands.push_back(Demand{2, 1, 1, Extended::infinity()});
    inst.validate();
    return cf;
}

}  // namespace pcnap
