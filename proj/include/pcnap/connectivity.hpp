#pragma once

#include <utility>
#include <vector>

#include "pcnap/biset.hpp"
#include "pcnap/instance.hpp"

namespace pcnap {

// Undirected multigraph; a repeated pair is a parallel edge.
struct Multigraph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;
};

Multigraph base_graph(const Instance& inst);
// Base edges plus the listed candidate edges.
Multigraph augmented_graph(const Instance& inst, const std::vector<int>& candidates);

class FlowNetwork {
public:
    explicit FlowNetwork(int n) : head_(static_cast<size_t>(n), -1) {}
    int add_node();
    void add_arc(int from, int to, int capacity);
    // Dinic; the network keeps its residual state afterwards.
    int max_flow(int s, int t, int limit = 1 << 30);

private:
    struct ArcRec {
        int to;
        int next;
        int cap;
    };
    bool bfs(int s, int t);
    int dfs(int v, int t, int pushed);

    std::vector<int> head_;
    std::vector<ArcRec> arcs_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

int edge_connectivity(const Multigraph& g, int s, int t);
int node_connectivity(const Multigraph& g, int s, int t);
int element_connectivity(const Multigraph& g, NodeSet terminals, int s, int t);
int connectivity(const Multigraph& g, ConnectivityKind kind, NodeSet terminals, int s, int t);

// |delta_g(b)| + |boundary(b)|.
int cut_value(const Multigraph& g, const Biset& b);
bool separates(const Biset& b, int s, int t);

// All bisets with s in the inner part that separate (s,t) with minimum cut value.
std::vector<Biset> min_cut_bisets(const Multigraph& g, int s, int t, ConnectivityKind kind, NodeSet terminals);

}  // namespace pcnap
