#include "pcnap/spider.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "pcnap/lp_models.hpp"

namespace pcnap {

std::vector<SpiderEdge> Spider::edges() const {
    std::vector<SpiderEdge> out;
    for (const auto& leg : legs) out.insert(out.end(), leg.begin(), leg.end());
    return out;
}

std::vector<std::pair<int, int>> Spider::edge_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : edges()) out.emplace_back(e.tail, e.head);
    return out;
}

std::vector<int> deletion_phase(const std::vector<Biset>& chain, const std::vector<SpiderEdge>& edges,
                                NodeSet all_nodes) {
    int l = static_cast<int>(chain.size());
    if (l == 0 || static_cast<int>(edges.size()) != l)
        fail(ErrorKind::precondition, "deletion phase needs one edge per chain member");
    for (int i = 0; i < l; ++i) {
        const auto& e = edges[static_cast<size_t>(i)];
        NodeSet next_outer = i + 1 < l ? chain[static_cast<size_t>(i + 1)].outer : all_nodes;
        if (i + 1 < l && !included(chain[static_cast<size_t>(i)], chain[static_cast<size_t>(i + 1)]))
            fail(ErrorKind::precondition, "deletion phase chain is not increasing");
        if (!contains(chain[static_cast<size_t>(i)].inner, e.head) || !contains(next_outer, e.tail) ||
            contains(chain[static_cast<size_t>(i)].outer, e.tail))
            fail(ErrorKind::precondition, "deletion phase edge does not sit between its witness and the next core");
    }
    std::vector<bool> keep(static_cast<size_t>(l), true);
    int p = l;  // 1-based
    while (true) {
        int head = edges[static_cast<size_t>(p - 1)].head;
        int q = 1;
        while (!contains(chain[static_cast<size_t>(q - 1)].inner, head)) ++q;
        for (int r = q; r <= p - 1; ++r) keep[static_cast<size_t>(r - 1)] = false;
        if (q > 1)
            p = q - 1;
        else
            break;
    }
    std::vector<int> out;
    for (int i = 0; i < l; ++i)
        if (keep[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

namespace {

struct Tuple {
    int edge;
    int tail;
    int head;
    int j;   // tail level
    int jp;  // head level
};

bool pairs_cover(const std::vector<std::pair<int, int>>& edges, const Biset& b) {
    for (auto [u, v] : edges)
        if (covers(u, v, b)) return true;
    return false;
}

// Cheapest weights on the spider's nodes that activate every spider edge; keeps w on ties.
WeightAssignment cheapest_activation(const Instance& inst, const std::vector<SpiderEdge>& edges, WeightAssignment w) {
    std::vector<int> nodes;
    for (const auto& e : edges)
        for (int v : {e.tail, e.head})
            if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
    const int levels = inst.weights.size();
    double space = std::pow(static_cast<double>(levels), static_cast<double>(nodes.size()));
    if (space > double(1 << 20)) return w;
    Rational best = w.total(inst.weights);
    auto cur = WeightAssignment::zeros(inst.num_nodes());
    std::vector<int> digit(nodes.size(), 0);
    while (true) {
        for (size_t i = 0; i < nodes.size(); ++i) cur.level[static_cast<size_t>(nodes[i])] = digit[i];
        Rational c = cur.total(inst.weights);
        if (c < best) {
            bool ok = true;
            for (const auto& e : edges)
                if (!edge_active(inst, inst.candidate_edges[static_cast<size_t>(e.edge)], cur)) ok = false;
            if (ok) {
                best = c;
                w = cur;
            }
        }
        size_t i = 0;
        while (i < digit.size() && ++digit[i] == levels) digit[i++] = 0;
        if (i == digit.size()) break;
    }
    return w;
}

bool chain_less(const Biset& a, const Biset& b) {
    int sa = popcount(a.inner) + popcount(a.outer);
    int sb = popcount(b.inner) + popcount(b.outer);
    return sa != sb ? sa < sb : a < b;
}

class SpiderEngine {
public:
    SpiderEngine(const Instance& inst, const BisetFamily& f, const SpiderOptions& opts)
        : inst_(inst), f_(f), opts_(opts), cores_(cores(f)) {
        int levels = inst.weights.size();
        for (const auto& a : inst.arcs())
            for (int j = 0; j < levels; ++j)
                for (int jp = 0; jp < levels; ++jp)
                    if (inst.arc_allows(a, j, jp)) tuples_.push_back(Tuple{a.edge, a.tail, a.head, j, jp});
        in_total_.assign(static_cast<size_t>(inst.num_nodes()), std::vector<Rational>(static_cast<size_t>(levels)));
        out_total_ = in_total_;
    }

    SpiderResult run() {
        if (f_.empty()) fail(ErrorKind::precondition, "spider computation needs a nonempty family");
        for (const auto& b : f_.sets())
            if (tuples_of(b).empty())
                fail(ErrorKind::infeasible, "biset " + format_biset(b, inst_.nodes) + " has no candidate edge");
        BisetFamily mins = min_cores(f_);
        z_.active = mins;
        z_.laminar = mins;
        min_count_ = mins.size();
        while (true) {
            refresh_tight();
            if (auto event = next_event_core()) {
                std::optional<int> head = handle_event(*event);
                notify();
                if (head) return assemble(*head);
                continue;
            }
            advance();
            notify();
        }
    }

private:
    const std::vector<int>& tuples_of(const Biset& X) {
        auto it = cache_.find(X);
        if (it != cache_.end()) return it->second;
        std::vector<int> ids;
        for (int t = 0; t < static_cast<int>(tuples_.size()); ++t)
            if (covers_arc(tuples_[static_cast<size_t>(t)].tail, tuples_[static_cast<size_t>(t)].head, X))
                ids.push_back(t);
        return cache_.emplace(X, std::move(ids)).first->second;
    }

    const Rational& cap(int level) const { return inst_.weights[level]; }

    void refresh_tight() {
        z_.tight_in.clear();
        z_.tight_out.clear();
        for (int v = 0; v < inst_.num_nodes(); ++v)
            for (int j = 0; j < inst_.weights.size(); ++j) {
                if (in_total_[static_cast<size_t>(v)][static_cast<size_t>(j)] == cap(j)) z_.tight_in.emplace(v, j);
                if (out_total_[static_cast<size_t>(v)][static_cast<size_t>(j)] == cap(j)) z_.tight_out.emplace(v, j);
            }
    }

    bool tight(const Tuple& t) const {
        return z_.tight_out.count({t.tail, t.j}) && z_.tight_in.count({t.head, t.jp});
    }

    // Right-hand side minus left-hand side of the covering row of the dual for this tuple.
    Rational slack(const Tuple& t) const {
        Rational s = 0;
        for (const auto& Y : z_.laminar.sets()) {
            if (!covers_arc(t.tail, t.head, Y)) continue;
            s += z_.aux_value(Y, t.tail, t.j) + z_.aux_value(Y, t.head, t.jp) - z_.core_value(Y);
        }
        return s;
    }

    // Blocked on both sides with no slack left: the core cannot grow past this tuple.
    bool stops(const Tuple& t) const { return tight(t) && slack(t) == 0; }

    std::optional<Biset> next_event_core() {
        for (const auto& X : z_.active.sets())
            for (int t : tuples_of(X))
                if (stops(tuples_[static_cast<size_t>(t)])) return X;
        return std::nullopt;
    }

    void notify() {
        if (opts_.observer) opts_.observer(z_);
    }

    void log(const std::string& line) {
        if (opts_.record_trace) trace_.push_back(line);
    }

    std::string tuple_text(const Tuple& t) const {
        return inst_.nodes[static_cast<size_t>(t.tail)] + ">" + inst_.nodes[static_cast<size_t>(t.head)] + "," +
               std::to_string(t.j) + "," + std::to_string(t.jp);
    }

    // Raise every active core until the next cap becomes tight.
    void advance() {
        struct Growth {
            Biset core;
            std::set<std::pair<int, int>> tails, heads;
        };
        std::vector<Growth> plan;
        int n = inst_.num_nodes();
        int levels = inst_.weights.size();
        std::vector<std::vector<int>> rin(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(levels), 0));
        auto rout = rin;
        for (const auto& X : z_.active.sets()) {
            Growth g{X, {}, {}};
            const auto& ts = tuples_of(X);
            for (int id : ts) {
                const auto& t = tuples_[static_cast<size_t>(id)];
                if (z_.tight_in.count({t.head, t.jp}) && !z_.tight_out.count({t.tail, t.j})) g.tails.emplace(t.tail, t.j);
            }
            for (int id : ts) {
                const auto& t = tuples_[static_cast<size_t>(id)];
                if (!g.tails.count({t.tail, t.j}) && !z_.tight_in.count({t.head, t.jp})) g.heads.emplace(t.head, t.jp);
            }
            for (auto [u, j] : g.tails) ++rout[static_cast<size_t>(u)][static_cast<size_t>(j)];
            for (auto [v, jp] : g.heads) ++rin[static_cast<size_t>(v)][static_cast<size_t>(jp)];
            plan.push_back(std::move(g));
        }
        std::optional<Rational> dt;
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < levels; ++j) {
                auto consider = [&](int rate, const Rational& total) {
                    if (rate == 0) return;
                    Rational step = (cap(j) - total) / rate;
                    if (!dt || step < *dt) dt = step;
                };
                consider(rin[static_cast<size_t>(v)][static_cast<size_t>(j)],
                         in_total_[static_cast<size_t>(v)][static_cast<size_t>(j)]);
                consider(rout[static_cast<size_t>(v)][static_cast<size_t>(j)],
                         out_total_[static_cast<size_t>(v)][static_cast<size_t>(j)]);
            }
        // A blocked tuple with slack stops its cores once the slack is used up.
        std::set<int> blocked;
        for (const auto& X : z_.active.sets())
            for (int id : tuples_of(X))
                if (tight(tuples_[static_cast<size_t>(id)])) blocked.insert(id);
        for (int id : blocked) {
            const auto& t = tuples_[static_cast<size_t>(id)];
            int rate = 0;
            for (const auto& X : z_.active.sets())
                if (covers_arc(t.tail, t.head, X)) ++rate;
            Rational step = slack(t) / rate;
            if (!dt || step < *dt) dt = step;
        }
        if (!dt) fail(ErrorKind::infeasible, "no event is reachable from the current dual state");
        for (const auto& g : plan) {
            z_.z_core[g.core] += *dt;
            for (auto [u, j] : g.tails) {
                z_.z_aux[{g.core, u, j}] += *dt;
                out_total_[static_cast<size_t>(u)][static_cast<size_t>(j)] += *dt;
            }
            for (auto [v, jp] : g.heads) {
                z_.z_aux[{g.core, v, jp}] += *dt;
                in_total_[static_cast<size_t>(v)][static_cast<size_t>(jp)] += *dt;
            }
        }
        z_.clock += *dt;
    }

    // Minimal laminar member entered by the arc.
    Biset minimal_covered(int tail, int head) const {
        std::optional<Biset> best;
        for (const auto& Y : z_.laminar.sets()) {
            if (!covers_arc(tail, head, Y)) continue;
            if (!best || included(Y, *best)) {
                if (best && !comparable(Y, *best)) fail(ErrorKind::invariant, "laminar members entered by one arc are not nested");
                best = Y;
            } else if (!included(*best, Y)) {
                fail(ErrorKind::invariant, "laminar members entered by one arc are not nested");
            }
        }
        if (!best) fail(ErrorKind::invariant, "arc enters no laminar member");
        return *best;
    }

    bool covered_by_F(const Biset& b) const {
        for (const auto& e : F_)
            if (covers(e.tail, e.head, b)) return true;
        return false;
    }

    // Uses the highest stopping level at u, so edges sharing a tail agree on the level that paid its cap.
    // Level currently paid at a node by the edges of F, or -1.
    int paid_level(int node) const {
        int l = -1;
        for (const auto& e : F_) {
            if (e.tail == node) l = std::max(l, e.tail_level);
            if (e.head == node) l = std::max(l, e.head_level);
        }
        return l;
    }

    Rational raise_cost(int node, int level, int floor = -1) const {
        int cur = std::max(paid_level(node), floor);
        if (level <= cur) return Rational(0);
        return inst_.weights[level] - (cur < 0 ? Rational(0) : inst_.weights[cur]);
    }

    // Witness-minimal stopping tuple of X at (u, j), or null.
    const Tuple* pick_at_level(const Biset& X, int u, int j) {
        const Tuple* pick = nullptr;
        Biset pick_y;
        for (int id : tuples_of(X)) {
            const auto& t = tuples_[static_cast<size_t>(id)];
            if (t.tail != u || t.j != j || !stops(t)) continue;
            Biset y = minimal_covered(t.tail, t.head);
            if (!pick) {
                pick = &t;
                pick_y = y;
                continue;
            }
            if (!comparable(y, pick_y))
                fail(ErrorKind::invariant, "minimal witnesses of one tail are not comparable at core " +
                                               format_biset(X, inst_.nodes));
            bool better = y != pick_y ? included(y, pick_y)
                                      : std::make_pair(t.head, t.jp) < std::make_pair(pick->head, pick->jp);
            if (better) {
                pick = &t;
                pick_y = y;
            }
        }
        return pick;
    }

    // Cheapest stopping tuple of X at u when u already pays at least level floor.
    std::pair<const Tuple*, Rational> cheapest(const Biset& X, int u, int floor) {
        const Tuple* pick = nullptr;
        Rational best;
        for (int j = inst_.weights.size() - 1; j >= 0; --j) {
            const Tuple* t = pick_at_level(X, u, j);
            if (!t) continue;
            Rational c = raise_cost(t->tail, t->j, floor) + raise_cost(t->head, t->jp);
            if (!pick || c < best) {
                pick = t;
                best = c;
            }
        }
        return {pick, best};
    }

    // Takes the stopping level at u adding the least weight over what F already pays, counting the
    // peers that will join at the same tail; ties go to the higher level.
    void add_edge(const Biset& X, int u, const std::vector<Biset>& peers = {}) {
        const Tuple* pick = nullptr;
        Rational best;
        for (int j = inst_.weights.size() - 1; j >= 0; --j) {
            const Tuple* t = pick_at_level(X, u, j);
            if (!t) continue;
            Rational c = raise_cost(t->tail, t->j) + raise_cost(t->head, t->jp);
            for (const auto& Y : peers) c += cheapest(Y, u, std::max(j, paid_level(u))).second;
            if (!pick || c < best) {
                pick = t;
                best = c;
            }
        }
        if (!pick) fail(ErrorKind::invariant, "event core has no tight tuple at the chosen tail");
        for (const auto& e : F_)
            if (e.edge == pick->edge) fail(ErrorKind::invariant, "edge added twice");
        F_.push_back(SpiderEdge{pick->edge, pick->tail, pick->head, pick->j, pick->jp, X});
        std::ostringstream os;
        os << "event t=" << to_string(z_.clock) << " core=" << format_biset(X, inst_.nodes)
           << " tuple=" << tuple_text(*pick);
        log(os.str());
    }

    std::vector<std::pair<int, int>> f_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (const auto& e : F_) out.emplace_back(e.tail, e.head);
        return out;
    }

    Rational out_paid(const Biset& X, int u) const {
        Rational s = 0;
        for (int j = 0; j < inst_.weights.size(); ++j) s += z_.aux_value(X, u, j);
        return s;
    }

    // Returns the head when the run terminates.
    std::optional<int> handle_event(const Biset& X) {
        // Other active cores tight at tail v join the same event.
        auto joins_at = [&](const Biset& Y, int v) {
            if (Y == X || covered_by_F(Y)) return false;
            for (int id : tuples_of(Y)) {
                const auto& t = tuples_[static_cast<size_t>(id)];
                if (t.tail == v && stops(t)) return true;
            }
            return false;
        };
        auto joiners = [&](int v) {
            int n = 0;
            for (const auto& Y : z_.active.sets()) n += joins_at(Y, v) ? 1 : 0;
            return n;
        };
        // Prefers the tail where X itself paid the most out-aux, so that aux is not left to other cores,
        // then the tail shared with the most other tight cores.
        int u = -1, shared = 0;
        Rational paid;
        for (int id : tuples_of(X)) {
            const auto& t = tuples_[static_cast<size_t>(id)];
            if (!stops(t) || t.tail == u) continue;
            Rational p = out_paid(X, t.tail);
            int n = joiners(t.tail);
            if (u < 0 || p > paid || (p == paid && (n > shared || (n == shared && t.tail < u)))) {
                u = t.tail;
                paid = p;
                shared = n;
            }
        }
        auto joins = [&](const Biset& Y) { return joins_at(Y, u); };
        std::vector<Biset> peers;
        for (const auto& Y : z_.active.sets())
            if (joins(Y)) peers.push_back(Y);
        add_edge(X, u, peers);
        for (const auto& Y : z_.active.sets())
            if (joins(Y)) add_edge(Y, u);
        int b = 0;
        for (const auto& e : F_)
            if (e.tail == u) ++b;
        if (b == 1) {
            std::vector<Biset> above;
            for (const auto& Z : cores_.sets())
                if (Z != X && included(X, Z) && !covered_by_F(Z)) above.push_back(Z);
            if (!above.empty()) {
                std::vector<Biset> minimal;
                for (const auto& Z : above) {
                    bool is_min = true;
                    for (const auto& W : above)
                        if (W != Z && included(W, Z)) is_min = false;
                    if (is_min) minimal.push_back(Z);
                }
                if (minimal.size() != 1) fail(ErrorKind::invariant, "uncovered cores above the event core have no unique minimum");
                const Biset& Z = minimal.front();
                if (tuples_of(Z).empty()) fail(ErrorKind::infeasible, "core has no candidate edge");
                z_.laminar.add(Z, f_.labels_of(Z));
                z_.active.erase(X);
                z_.active.add(Z, f_.labels_of(Z));
                auto expect = min_cores(residual(f_, f_pairs()));
                if (expect.sets() != z_.active.sets())
                    fail(ErrorKind::invariant, "active family differs from the residual min-cores");
                log("case a t=" + to_string(z_.clock) + " next=" + format_biset(Z, inst_.nodes));
                return std::nullopt;
            }
        }
        log("case b t=" + to_string(z_.clock) + " head=" + inst_.nodes[static_cast<size_t>(u)] +
            " B=" + std::to_string(b));
        return u;
    }

    std::vector<Biset> chain_below(const Biset& top) const {
        std::vector<Biset> chain;
        for (const auto& Y : z_.laminar.sets())
            if (included(Y, top)) chain.push_back(Y);
        std::sort(chain.begin(), chain.end(), chain_less);
        for (size_t i = 0; i + 1 < chain.size(); ++i)
            if (!included(chain[i], chain[i + 1])) fail(ErrorKind::invariant, "laminar members below a root are not a chain");
        return chain;
    }

    bool leg_covers(const std::vector<SpiderEdge>& leg, const BisetFamily& need) const {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& e : leg) pairs.emplace_back(e.tail, e.head);
        for (const auto& c : need.sets())
            if (!pairs_cover(pairs, c)) return false;
        return true;
    }

    bool is_spider(int h, const std::vector<Biset>& feet, const std::vector<std::vector<SpiderEdge>>& legs) const {
        if (feet.empty() || feet.size() != legs.size()) return false;
        auto mins = min_cores(f_);
        std::vector<NodeSet> touched;
        for (size_t i = 0; i < feet.size(); ++i) {
            if (!mins.contains(feet[i]) || contains(feet[i].outer, h)) return false;
            if (!leg_covers(legs[i], cores_above_avoiding(f_, feet[i], h))) return false;
            NodeSet nodes = 0;
            for (const auto& e : legs[i]) nodes |= bit(e.tail) | bit(e.head);
            for (NodeSet other : touched)
                if ((other & nodes & ~bit(h)) != 0) return false;
            touched.push_back(nodes);
        }
        return feet.size() >= 2 || leg_covers(legs[0], cores_above(f_, feet[0]));
    }

    static WeightAssignment weights_of(int n, const std::vector<std::vector<SpiderEdge>>& legs) {
        auto w = WeightAssignment::zeros(n);
        for (const auto& leg : legs)
            for (const auto& e : leg) {
                auto& lt = w.level[static_cast<size_t>(e.tail)];
                auto& lh = w.level[static_cast<size_t>(e.head)];
                lt = std::max(lt, e.tail_level);
                lh = std::max(lh, e.head_level);
            }
        return w;
    }

    // Best-density spider inside F, used when the chain assembly does not yield a spider.
    std::optional<Spider> search_spider() const { return search_spider(F_); }

    // F plus the undominated tuples whose caps are tight on both sides; F alone if that is too many.
    std::vector<SpiderEdge> tight_pool() const {
        std::vector<SpiderEdge> pool = F_;
        for (const auto& t : tuples_) {
            if (!tight(t)) continue;
            bool keep = true;
            for (const auto& o : tuples_)
                if (&o != &t && o.edge == t.edge && o.tail == t.tail && o.j <= t.j && o.jp <= t.jp && tight(o)) keep = false;
            for (const auto& e : pool)
                if (e.edge == t.edge && e.tail_level <= (e.tail == t.tail ? t.j : t.jp) &&
                    e.head_level <= (e.tail == t.tail ? t.jp : t.j))
                    keep = false;
            if (keep) pool.push_back(SpiderEdge{t.edge, t.tail, t.head, t.j, t.jp, Biset{}});
        }
        return pool.size() > 16 ? F_ : pool;
    }

    std::optional<Spider> search_spider(const std::vector<SpiderEdge>& pool) const {
        const int m = static_cast<int>(pool.size());
        if (m > 16) return std::nullopt;
        const int n = inst_.num_nodes();
        auto mins = min_cores(f_);
        std::optional<Spider> best;
        Rational best_w;
        for (uint32_t mask = 1; mask < (uint32_t{1} << m); ++mask) {
            std::vector<SpiderEdge> S;
            for (int i = 0; i < m; ++i)
                if (mask & (uint32_t{1} << i)) S.push_back(pool[static_cast<size_t>(i)]);
            Rational w = weights_of(n, {S}).total(inst_.weights);
            for (int h = 0; h < n; ++h) {
                // Legs are the components of S once h is split off.
                std::vector<int> comp(static_cast<size_t>(n));
                for (int v = 0; v < n; ++v) comp[static_cast<size_t>(v)] = v;
                std::function<int(int)> find = [&](int v) {
                    while (comp[static_cast<size_t>(v)] != v) v = comp[static_cast<size_t>(v)];
                    return v;
                };
                for (const auto& e : S)
                    if (e.tail != h && e.head != h) comp[static_cast<size_t>(find(e.tail))] = find(e.head);
                std::map<int, std::vector<SpiderEdge>> groups;
                for (const auto& e : S) groups[find(e.tail != h ? e.tail : e.head)].push_back(e);
                std::vector<std::vector<SpiderEdge>> legs;
                for (auto& [root, leg] : groups) legs.push_back(std::move(leg));
                // Match legs to distinct feet by trying feet in order with augmenting paths.
                const auto& cand = mins.sets();
                std::vector<std::vector<bool>> ok(legs.size(), std::vector<bool>(cand.size(), false));
                for (size_t i = 0; i < legs.size(); ++i)
                    for (size_t k = 0; k < cand.size(); ++k)
                        ok[i][k] = !contains(cand[k].outer, h) &&
                                   leg_covers(legs[i], legs.size() == 1 ? cores_above(f_, cand[k])
                                                                        : cores_above_avoiding(f_, cand[k], h));
                std::vector<int> owner(cand.size(), -1);
                std::function<bool(size_t, std::vector<bool>&)> augment = [&](size_t i, std::vector<bool>& seen) {
                    for (size_t k = 0; k < cand.size(); ++k) {
                        if (!ok[i][k] || seen[k]) continue;
                        seen[k] = true;
                        if (owner[k] < 0 || augment(static_cast<size_t>(owner[k]), seen)) {
                            owner[k] = static_cast<int>(i);
                            return true;
                        }
                    }
                    return false;
                };
                bool all = true;
                for (size_t i = 0; i < legs.size() && all; ++i) {
                    std::vector<bool> seen(cand.size(), false);
                    all = augment(i, seen);
                }
                if (!all) continue;
                const int f = static_cast<int>(legs.size());
                if (best) {
                    Rational lhs = w * best->num_feet(), rhs = best_w * f;
                    if (lhs > rhs || (lhs == rhs && f <= best->num_feet())) continue;
                }
                Spider sp;
                sp.head = h;
                std::vector<Biset> feet(legs.size());
                for (size_t k = 0; k < cand.size(); ++k)
                    if (owner[k] >= 0) feet[static_cast<size_t>(owner[k])] = cand[k];
                sp.feet = std::move(feet);
                sp.legs = std::move(legs);
                sp.weights = weights_of(n, sp.legs);
                best = std::move(sp);
                best_w = w;
            }
        }
        return best;
    }

    // Drops whole extra chains, last root first, while every core above the foot stays covered.
    void prune_single(std::vector<Biset>& roots, std::vector<std::vector<SpiderEdge>>& legs) const {
        auto need = cores_above(f_, chain_below(roots.front()).front());
        for (size_t i = legs.size(); i-- > 1;) {
            std::vector<std::pair<int, int>> rest;
            for (size_t k = 0; k < legs.size(); ++k)
                if (k != i)
                    for (const auto& e : legs[k]) rest.emplace_back(e.tail, e.head);
            bool ok = true;
            for (const auto& c : need.sets())
                if (!pairs_cover(rest, c)) ok = false;
            if (!ok) continue;
            legs.erase(legs.begin() + static_cast<long>(i));
            roots.erase(roots.begin() + static_cast<long>(i));
        }
    }

    SpiderResult assemble(int h) {
        std::vector<SpiderEdge> B;
        for (const auto& e : F_)
            if (e.tail == h) B.push_back(e);
        std::vector<Biset> roots;
        if (B.size() >= 2) {
            for (const auto& e : B) roots.push_back(e.witness);
        } else {
            const Biset& X = B.front().witness;
            roots.push_back(X);
            std::vector<Biset> inactive;
            for (const auto& Y : z_.laminar.sets())
                if (!z_.active.contains(Y)) inactive.push_back(Y);
            for (const auto& Y : inactive) {
                if (comparable(Y, X)) continue;
                bool maximal = true;
                for (const auto& W : inactive)
                    if (W != Y && included(Y, W)) maximal = false;
                if (maximal) roots.push_back(Y);
            }
        }
        std::sort(roots.begin() + 1, roots.end());

        SpiderResult r;
        r.spider.head = h;
        r.spider.weights = WeightAssignment::zeros(inst_.num_nodes());
        std::vector<SpiderEdge> single;
        std::vector<Biset> split_feet;
        std::vector<std::vector<SpiderEdge>> split_legs;
        for (size_t k = 0; k < roots.size(); ++k) {
            auto chain = chain_below(roots[k]);
            std::vector<SpiderEdge> edges;
            for (const auto& Y : chain) {
                const SpiderEdge* found = nullptr;
                for (const auto& e : F_)
                    if (e.witness == Y) {
                        if (found) fail(ErrorKind::invariant, "core is the witness of two edges");
                        found = &e;
                    }
                if (!found) fail(ErrorKind::invariant, "chain member is the witness of no edge");
                edges.push_back(*found);
            }
            std::vector<SpiderEdge> leg;
            for (int idx : deletion_phase(chain, edges, inst_.all_nodes())) leg.push_back(edges[static_cast<size_t>(idx)]);
            if (B.size() >= 2) {
                r.spider.feet.push_back(chain.front());
                r.spider.legs.push_back(std::move(leg));
            } else {
                if (k == 0) r.spider.feet.push_back(chain.front());
                single.insert(single.end(), leg.begin(), leg.end());
                split_feet.push_back(chain.front());
                split_legs.push_back(std::move(leg));
            }
        }
        if (B.size() < 2) {
            // The chains assembled into one leg may already form a spider with one foot per chain.
            if (split_feet.size() >= 2 && is_spider(h, split_feet, split_legs)) {
                r.spider.feet = std::move(split_feet);
                r.spider.legs = std::move(split_legs);
                log("single leg splits into " + std::to_string(r.spider.num_feet()) + " feet");
            } else {
                prune_single(roots, split_legs);
                single.clear();
                for (const auto& leg : split_legs) single.insert(single.end(), leg.begin(), leg.end());
                r.spider.legs.push_back(std::move(single));
            }
        }
        r.spider.weights = weights_of(inst_.num_nodes(), r.spider.legs);
        if (!is_spider(h, r.spider.feet, r.spider.legs)) {
            auto found = search_spider();
            if (!found) fail(ErrorKind::invariant, "chain assembly gives no spider and F is too large to search");
            r.spider = std::move(*found);
            roots.clear();
            log("assembly gives no spider; searched F for head " + inst_.nodes[static_cast<size_t>(r.spider.head)] +
                " with " + std::to_string(r.spider.num_feet()) + " feet");
        }
        r.spider.weights = cheapest_activation(inst_, r.spider.edges(), r.spider.weights);
        // The assembled legs can cost more than the clock pays for; a sparser spider built from F and
        // the other tight tuples may still meet the bound.
        if (r.spider.weights.total(inst_.weights) > z_.clock * r.spider.num_feet()) {
            if (auto found = search_spider(tight_pool())) {
                found->weights = cheapest_activation(inst_, found->edges(), found->weights);
                Rational lhs = found->weights.total(inst_.weights) * r.spider.num_feet();
                Rational rhs = r.spider.weights.total(inst_.weights) * found->num_feet();
                if (lhs < rhs) {
                    r.spider = std::move(*found);
                    roots.clear();
                    log("assembled spider is too dense; searched tight tuples for head " +
                        inst_.nodes[static_cast<size_t>(r.spider.head)] + " with " +
                        std::to_string(r.spider.num_feet()) + " feet");
                }
            }
        }
        r.laminar = z_.laminar;
        r.dual = z_;
        r.min_core_count = min_count_;
        r.roots = roots;
        r.added = F_;
        r.trace = trace_;
        return r;
    }

    const Instance& inst_;
    const BisetFamily& f_;
    const SpiderOptions& opts_;
    BisetFamily cores_;
    std::vector<Tuple> tuples_;
    std::map<Biset, std::vector<int>> cache_;
    std::vector<std::vector<Rational>> in_total_, out_total_;
    DualState z_;
    int min_count_ = 0;
    std::vector<SpiderEdge> F_;
    std::vector<std::string> trace_;
};

}  // namespace

SpiderResult compute_spider(const Instance& inst, const BisetFamily& f, const SpiderOptions& opts) {
    SpiderEngine engine(inst, f, opts);
    return engine.run();
}

std::vector<std::string> verify_spider(const Instance& inst, const BisetFamily& f, const SpiderResult& r) {
    std::vector<std::string> bad;
    const Spider& s = r.spider;
    const int h = s.head;
    auto mins = min_cores(f);
    if (s.num_feet() < 1 || s.legs.size() != s.feet.size()) bad.push_back("spider has no feet or mismatched legs");
    for (const auto& foot : s.feet) {
        if (!mins.contains(foot)) bad.push_back("foot is not a min-core");
        if (contains(foot.outer, h)) bad.push_back("head lies in the outer part of a foot");
    }
    for (size_t a = 0; a < s.legs.size(); ++a)
        for (size_t b = a + 1; b < s.legs.size(); ++b) {
            NodeSet na = 0, nb = 0;
            for (const auto& e : s.legs[a]) na |= bit(e.tail) | bit(e.head);
            for (const auto& e : s.legs[b]) nb |= bit(e.tail) | bit(e.head);
            if ((na & nb & ~bit(h)) != 0) bad.push_back("two legs share a node other than the head");
        }
    for (size_t i = 0; i < s.legs.size() && i < s.feet.size(); ++i) {
        std::vector<std::pair<int, int>> leg;
        for (const auto& e : s.legs[i]) leg.emplace_back(e.tail, e.head);
        for (const auto& c : cores_above_avoiding(f, s.feet[i], h).sets())
            if (!pairs_cover(leg, c)) bad.push_back("leg misses a core above its foot avoiding the head");
    }
    if (s.num_feet() == 1) {
        auto all = s.edge_pairs();
        for (const auto& c : cores_above(f, s.feet[0]).sets())
            if (!pairs_cover(all, c)) bad.push_back("single-foot spider misses a core above its foot");
    }
    for (const auto& e : s.edges())
        if (!edge_active(inst, inst.candidate_edges[static_cast<size_t>(e.edge)], s.weights))
            bad.push_back("spider edge is not activated by the spider weights");

    if (!is_strongly_laminar(r.laminar)) bad.push_back("laminar family is not strongly laminar");
    auto core_family = cores(f);
    for (const auto& b : r.laminar.sets())
        if (!core_family.contains(b)) bad.push_back("laminar member is not a core");
    if (!check_dual_feasible(inst, r.laminar, r.dual)) bad.push_back("final dual is infeasible");
    Rational zsum = r.dual.core_sum();
    if (r.dual.clock * r.min_core_count != zsum) bad.push_back("clock identity fails");
    if (s.num_feet() > 0 && s.weights.total(inst.weights) * r.min_core_count > zsum * s.num_feet())
        bad.push_back("density bound fails");

    // Each laminar member below a root is covered by exactly one retained edge of its chain.
    auto kept = s.edges();
    for (const auto& root : r.roots)
        for (const auto& Y : r.laminar.sets()) {
            if (!included(Y, root)) continue;
            int count = 0;
            for (const auto& e : kept)
                if (included(e.witness, root) && covers(e.tail, e.head, Y)) ++count;
            if (count != 1) bad.push_back("laminar member not covered exactly once by its chain");
        }
    return bad;
}

}  // namespace pcnap
