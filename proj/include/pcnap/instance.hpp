#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcnap/rational.hpp"

namespace pcnap {

using NodeSet = std::uint32_t;
inline constexpr int max_nodes = 32;

inline NodeSet bit(int v) { return NodeSet{1} << v; }
inline bool contains(NodeSet s, int v) { return (s >> v) & 1u; }
inline bool subset_of(NodeSet a, NodeSet b) { return (a & ~b) == 0; }
inline int popcount(NodeSet s) { return __builtin_popcount(s); }

enum class ConnectivityKind { edge, element, node };

std::string_view to_string(ConnectivityKind kind);
ConnectivityKind parse_kind(std::string_view text);

class WeightSet {
public:
    static constexpr int cap = 16;

    WeightSet() : values_{Rational(0)} {}
    explicit WeightSet(std::vector<Rational> values);

    int size() const { return static_cast<int>(values_.size()); }
    const Rational& operator[](int i) const { return values_[static_cast<size_t>(i)]; }
    const std::vector<Rational>& values() const { return values_; }
    std::optional<int> index_of(const Rational& value) const;

private:
    std::vector<Rational> values_;
};

// Truth table of psi(w(u), w(v)) over weight indices, in the edge's stored orientation.
class ActivationRelation {
public:
    ActivationRelation() = default;
    static ActivationRelation from_minimal_pairs(int levels, const std::vector<std::pair<int, int>>& pairs);
    // Throws if the table is not monotone.
    static ActivationRelation from_pairs(int levels, const std::vector<std::pair<int, int>>& pairs);

    int levels() const { return levels_; }
    bool allows(int iu, int iv) const {
        return table_[static_cast<size_t>(iu * levels_ + iv)] != 0;
    }
    std::vector<std::pair<int, int>> pairs() const;
    std::vector<std::pair<int, int>> minimal_pairs() const;
    bool is_monotone() const;

private:
    int levels_ = 0;
    std::vector<std::uint8_t> table_;
};

struct CandidateEdge {
    std::string id;
    int u = 0;
    int v = 0;
    ActivationRelation relation;
};

struct Demand {
    int s = 0;
    int t = 0;
    int r = 1;
    Extended penalty;
};

// One orientation of a candidate edge.
struct Arc {
    int edge = 0;
    int tail = 0;
    int head = 0;
    bool forward = true;  // tail is the edge's stored u
};

class Instance {
public:
    std::vector<std::string> nodes;
    std::vector<std::pair<int, int>> base_edges;  // repeated pairs are parallel edges
    std::vector<CandidateEdge> candidate_edges;
    WeightSet weights;
    std::vector<Demand> demands;
    ConnectivityKind kind = ConnectivityKind::edge;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    NodeSet all_nodes() const;
    NodeSet terminals() const;
    int max_requirement() const;
    std::optional<int> node_index(std::string_view name) const;

    std::vector<Arc> arcs() const;
    // psi for an arc at (tail level, head level).
    bool arc_allows(const Arc& a, int tail_level, int head_level) const;

    void validate() const;
};

struct WeightAssignment {
    std::vector<int> level;  // index into the weight set, one per node

    static WeightAssignment zeros(int n) { return WeightAssignment{std::vector<int>(static_cast<size_t>(n), 0)}; }
    Rational total(const WeightSet& w) const;
    friend bool operator==(const WeightAssignment&, const WeightAssignment&) = default;
};

WeightAssignment pointwise_max(const WeightAssignment& a, const WeightAssignment& b);

bool edge_active(const Instance& inst, const CandidateEdge& e, const WeightAssignment& w);
std::vector<int> activated_edges(const Instance& inst, const WeightAssignment& w);
std::vector<int> satisfied_demands(const Instance& inst, const WeightAssignment& w);
Extended objective_value(const Instance& inst, const WeightAssignment& w);

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);
Instance load_instance(const std::string& path);

std::string node_list(const Instance& inst, NodeSet s);

}  // namespace pcnap
