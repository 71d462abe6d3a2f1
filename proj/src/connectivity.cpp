#include "pcnap/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace pcnap {

Multigraph base_graph(const Instance& inst) { return Multigraph{inst.num_nodes(), inst.base_edges}; }

Multigraph augmented_graph(const Instance& inst, const std::vector<int>& candidates) {
    Multigraph g = base_graph(inst);
    for (int e : candidates) {
        const auto& ce = inst.candidate_edges[static_cast<size_t>(e)];
        g.edges.emplace_back(ce.u, ce.v);
    }
    return g;
}

int FlowNetwork::add_node() {
    head_.push_back(-1);
    return static_cast<int>(head_.size()) - 1;
}

void FlowNetwork::add_arc(int from, int to, int capacity) {
    arcs_.push_back(ArcRec{to, head_[static_cast<size_t>(from)], capacity});
    head_[static_cast<size_t>(from)] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back(ArcRec{from, head_[static_cast<size_t>(to)], 0});
    head_[static_cast<size_t>(to)] = static_cast<int>(arcs_.size()) - 1;
}

bool FlowNetwork::bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int a = head_[static_cast<size_t>(v)]; a != -1; a = arcs_[static_cast<size_t>(a)].next) {
            const auto& rec = arcs_[static_cast<size_t>(a)];
            if (rec.cap > 0 && level_[static_cast<size_t>(rec.to)] < 0) {
                level_[static_cast<size_t>(rec.to)] = level_[static_cast<size_t>(v)] + 1;
                q.push(rec.to);
            }
        }
    }
    return level_[static_cast<size_t>(t)] >= 0;
}

int FlowNetwork::dfs(int v, int t, int pushed) {
    if (v == t) return pushed;
    for (int& a = iter_[static_cast<size_t>(v)]; a != -1; a = arcs_[static_cast<size_t>(a)].next) {
        auto& rec = arcs_[static_cast<size_t>(a)];
        if (rec.cap <= 0 || level_[static_cast<size_t>(rec.to)] != level_[static_cast<size_t>(v)] + 1) continue;
        int got = dfs(rec.to, t, std::min(pushed, rec.cap));
        if (got > 0) {
            rec.cap -= got;
            arcs_[static_cast<size_t>(a ^ 1)].cap += got;
            return got;
        }
    }
    return 0;
}

int FlowNetwork::max_flow(int s, int t, int limit) {
    int flow = 0;
    while (flow < limit && bfs(s, t)) {
        iter_ = head_;
        while (flow < limit) {
            int got = dfs(s, t, limit - flow);
            if (got == 0) break;
            flow += got;
        }
    }
    return flow;
}

namespace {

// Nodes in split are replaced by an in/out pair joined by a unit arc.
int split_flow(const Multigraph& g, NodeSet split, int s, int t) {
    int n = g.num_nodes;
    FlowNetwork net(2 * n);
    auto in = [](int v) { return v; };
    auto out = [&](int v) { return contains(split, v) ? n + v : v; };
    for (int v = 0; v < n; ++v)
        if (contains(split, v)) net.add_arc(in(v), out(v), 1);
    for (auto [a, b] : g.edges) {
        net.add_arc(out(a), in(b), 1);
        net.add_arc(out(b), in(a), 1);
    }
    return net.max_flow(out(s), in(t));
}

NodeSet everything(int n) { return n >= 32 ? ~NodeSet{0} : (NodeSet{1} << n) - 1; }

void check_pair(const Multigraph& g, int s, int t) {
    if (s == t || s < 0 || t < 0 || s >= g.num_nodes || t >= g.num_nodes)
        fail(ErrorKind::precondition, "connectivity query needs two distinct nodes");
}

}  // namespace

int edge_connectivity(const Multigraph& g, int s, int t) {
    check_pair(g, s, t);
    return split_flow(g, 0, s, t);
}

int node_connectivity(const Multigraph& g, int s, int t) {
    check_pair(g, s, t);
    return split_flow(g, everything(g.num_nodes) & ~bit(s) & ~bit(t), s, t);
}

int element_connectivity(const Multigraph& g, NodeSet terminals, int s, int t) {
    check_pair(g, s, t);
    if (!contains(terminals, s) || !contains(terminals, t))
        fail(ErrorKind::precondition, "element connectivity endpoints must be terminals");
    return split_flow(g, everything(g.num_nodes) & ~terminals, s, t);
}

int connectivity(const Multigraph& g, ConnectivityKind kind, NodeSet terminals, int s, int t) {
    switch (kind) {
        case ConnectivityKind::edge: return edge_connectivity(g, s, t);
        case ConnectivityKind::element: return element_connectivity(g, terminals, s, t);
        case ConnectivityKind::node: return node_connectivity(g, s, t);
    }
    return 0;
}

int cut_value(const Multigraph& g, const Biset& b) {
    int c = popcount(b.boundary());
    for (auto [u, v] : g.edges)
        if (covers(u, v, b)) ++c;
    return c;
}

bool separates(const Biset& b, int s, int t) {
    return (contains(b.inner, s) && !contains(b.outer, t)) || (contains(b.inner, t) && !contains(b.outer, s));
}

std::vector<Biset> min_cut_bisets(const Multigraph& g, int s, int t, ConnectivityKind kind, NodeSet terminals) {
    int n = g.num_nodes;
    if (n > 14) fail(ErrorKind::cap_exceeded, "min_cut_bisets is limited to 14 nodes");
    NodeSet all = everything(n);
    std::vector<Biset> best;
    int best_value = std::numeric_limits<int>::max();
    auto consider = [&](const Biset& b) {
        int c = cut_value(g, b);
        if (c < best_value) {
            best_value = c;
            best.clear();
        }
        if (c == best_value) best.push_back(b);
    };
    NodeSet forbidden_boundary = bit(s) | bit(t);
    if (kind == ConnectivityKind::element) forbidden_boundary |= terminals;
    for (NodeSet x = 0; x <= all; ++x) {
        if (!contains(x, s) || contains(x, t)) continue;
        if (kind == ConnectivityKind::edge) {
            consider(Biset{x, x});
            continue;
        }
        NodeSet free = all & ~x & ~forbidden_boundary;
        // Enumerate every subset of free as a boundary.
        for (NodeSet gam = free;; gam = (gam - 1) & free) {
            consider(Biset{x, x | gam});
            if (gam == 0) break;
        }
    }
    std::sort(best.begin(), best.end());
    return best;
}

}  // namespace pcnap
