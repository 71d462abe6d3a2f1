#include "pcnap/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pcnap/connectivity.hpp"

namespace pcnap {

using json = nlohmann::ordered_json;

std::string_view to_string(ConnectivityKind kind) {
    switch (kind) {
        case ConnectivityKind::edge: return "edge";
        case ConnectivityKind::element: return "element";
        case ConnectivityKind::node: return "node";
    }
    return "edge";
}

ConnectivityKind parse_kind(std::string_view text) {
    if (text == "edge") return ConnectivityKind::edge;
    if (text == "element") return ConnectivityKind::element;
    if (text == "node") return ConnectivityKind::node;
    fail(ErrorKind::validation, "unknown connectivity kind '" + std::string(text) + "'");
}

WeightSet::WeightSet(std::vector<Rational> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    if (values_.empty() || values_.front() != 0) fail(ErrorKind::validation, "weight set must contain 0");
    for (size_t i = 1; i < values_.size(); ++i)
        if (values_[i] == values_[i - 1]) fail(ErrorKind::validation, "duplicate weight");
    if (size() > cap) fail(ErrorKind::validation, "weight set exceeds 16 values");
}

std::optional<int> WeightSet::index_of(const Rational& value) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), value);
    if (it == values_.end() || *it != value) return std::nullopt;
    return static_cast<int>(it - values_.begin());
}

ActivationRelation ActivationRelation::from_minimal_pairs(int levels,
                                                          const std::vector<std::pair<int, int>>& pairs) {
    ActivationRelation r;
    r.levels_ = levels;
    r.table_.assign(static_cast<size_t>(levels * levels), 0);
    for (auto [a, b] : pairs)
        for (int i = a; i < levels; ++i)
            for (int j = b; j < levels; ++j) r.table_[static_cast<size_t>(i * levels + j)] = 1;
    return r;
}

ActivationRelation ActivationRelation::from_pairs(int levels, const std::vector<std::pair<int, int>>& pairs) {
    ActivationRelation r;
    r.levels_ = levels;
    r.table_.assign(static_cast<size_t>(levels * levels), 0);
    for (auto [a, b] : pairs) r.table_[static_cast<size_t>(a * levels + b)] = 1;
    if (!r.is_monotone()) fail(ErrorKind::validation, "activation relation is not monotone");
    return r;
}

std::vector<std::pair<int, int>> ActivationRelation::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < levels_; ++i)
        for (int j = 0; j < levels_; ++j)
            if (allows(i, j)) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<int, int>> ActivationRelation::minimal_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < levels_; ++i)
        for (int j = 0; j < levels_; ++j)
            if (allows(i, j) && (i == 0 || !allows(i - 1, j)) && (j == 0 || !allows(i, j - 1)))
                out.emplace_back(i, j);
    return out;
}

bool ActivationRelation::is_monotone() const {
    for (int i = 0; i < levels_; ++i)
        for (int j = 0; j < levels_; ++j) {
            if (!allows(i, j)) continue;
            if (i + 1 < levels_ && !allows(i + 1, j)) return false;
            if (j + 1 < levels_ && !allows(i, j + 1)) return false;
        }
    return true;
}

NodeSet Instance::all_nodes() const {
    return num_nodes() >= 32 ? ~NodeSet{0} : (NodeSet{1} << num_nodes()) - 1;
}

NodeSet Instance::terminals() const {
    NodeSet t = 0;
    for (const auto& d : demands) t |= bit(d.s) | bit(d.t);
    return t;
}

int Instance::max_requirement() const {
    int k = 0;
    for (const auto& d : demands) k = std::max(k, d.r);
    return k;
}

std::optional<int> Instance::node_index(std::string_view name) const {
    for (int i = 0; i < num_nodes(); ++i)
        if (nodes[static_cast<size_t>(i)] == name) return i;
    return std::nullopt;
}

std::vector<Arc> Instance::arcs() const {
    std::vector<Arc> out;
    out.reserve(candidate_edges.size() * 2);
    for (int e = 0; e < static_cast<int>(candidate_edges.size()); ++e) {
        const auto& ce = candidate_edges[static_cast<size_t>(e)];
        out.push_back(Arc{e, ce.u, ce.v, true});
        out.push_back(Arc{e, ce.v, ce.u, false});
    }
    return out;
}

bool Instance::arc_allows(const Arc& a, int tail_level, int head_level) const {
    const auto& rel = candidate_edges[static_cast<size_t>(a.edge)].relation;
    return a.forward ? rel.allows(tail_level, head_level) : rel.allows(head_level, tail_level);
}

void Instance::validate() const {
    int n = num_nodes();
    if (n == 0) fail(ErrorKind::validation, "instance has no nodes");
    if (n > max_nodes) fail(ErrorKind::validation, "too many nodes");
    std::set<std::string> names(nodes.begin(), nodes.end());
    if (static_cast<int>(names.size()) != n) fail(ErrorKind::validation, "duplicate node id");
    auto check_node = [n](int v) {
        if (v < 0 || v >= n) fail(ErrorKind::validation, "node out of range");
    };
    for (auto [u, v] : base_edges) {
        check_node(u);
        check_node(v);
        if (u == v) fail(ErrorKind::validation, "self-loop in base edges");
    }
    std::set<std::string> ids;
    for (const auto& e : candidate_edges) {
        check_node(e.u);
        check_node(e.v);
        if (e.u == e.v) fail(ErrorKind::validation, "self-loop candidate edge " + e.id);
        if (!ids.insert(e.id).second) fail(ErrorKind::validation, "duplicate edge id " + e.id);
        if (e.relation.levels() != weights.size())
            fail(ErrorKind::validation, "activation table size mismatch on " + e.id);
        if (!e.relation.is_monotone()) fail(ErrorKind::validation, "activation relation is not monotone");
    }
    if (static_cast<int>(demands.size()) > 64) fail(ErrorKind::validation, "more than 64 demands");
    for (const auto& d : demands) {
        check_node(d.s);
        check_node(d.t);
        if (d.s == d.t) fail(ErrorKind::validation, "demand with s = t");
        if (d.r < 1) fail(ErrorKind::validation, "demand requirement below 1");
        if (!d.penalty.is_infinite() && d.penalty.value() < 0)
            fail(ErrorKind::validation, "negative penalty");
    }
}

Rational WeightAssignment::total(const WeightSet& w) const {
    Rational sum = 0;
    for (int l : level) sum += w[l];
    return sum;
}

WeightAssignment pointwise_max(const WeightAssignment& a, const WeightAssignment& b) {
    WeightAssignment out = a;
    for (size_t i = 0; i < out.level.size(); ++i) out.level[i] = std::max(out.level[i], b.level[i]);
    return out;
}

bool edge_active(const Instance&, const CandidateEdge& e, const WeightAssignment& w) {
    return e.relation.allows(w.level[static_cast<size_t>(e.u)], w.level[static_cast<size_t>(e.v)]);
}

std::vector<int> activated_edges(const Instance& inst, const WeightAssignment& w) {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(inst.candidate_edges.size()); ++e)
        if (edge_active(inst, inst.candidate_edges[static_cast<size_t>(e)], w)) out.push_back(e);
    return out;
}

std::vector<int> satisfied_demands(const Instance& inst, const WeightAssignment& w) {
    Multigraph g = augmented_graph(inst, activated_edges(inst, w));
    NodeSet terms = inst.terminals();
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(inst.demands.size()); ++i) {
        const auto& d = inst.demands[static_cast<size_t>(i)];
        if (connectivity(g, inst.kind, terms, d.s, d.t) >= d.r) out.push_back(i);
    }
    return out;
}

Extended objective_value(const Instance& inst, const WeightAssignment& w) {
    Extended total(w.total(inst.weights));
    auto sat = satisfied_demands(inst, w);
    std::vector<bool> ok(inst.demands.size(), false);
    for (int i : sat) ok[static_cast<size_t>(i)] = true;
    for (size_t i = 0; i < inst.demands.size(); ++i)
        if (!ok[i]) total += inst.demands[i].penalty;
    return total;
}

namespace {

Rational json_rational(const json& j) {
    if (j.is_number_integer()) return j.is_number_unsigned() ? Rational(std::to_string(j.get<std::uint64_t>()))
                                                             : Rational(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_float()) return rational_from_double(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    fail(ErrorKind::validation, "expected a number");
}

json rational_json(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    return json(to_string(q));
}

std::string json_name(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    fail(ErrorKind::validation, "node id must be a string or integer");
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        fail(ErrorKind::validation, std::string("missing field '") + key + "'");
    return obj.at(key);
}

std::pair<const json*, const json*> endpoints(const json& e) {
    if (e.is_array() && e.size() == 2) return {&e[0], &e[1]};
    return {&field(e, "u"), &field(e, "v")};
}

}  // namespace

Instance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::exception& ex) {
        fail(ErrorKind::validation, std::string("malformed document: ") + ex.what());
    }
    if (!doc.is_object()) fail(ErrorKind::validation, "malformed document: expected an object");

    Instance inst;
    try {
        for (const auto& n : field(doc, "nodes")) inst.nodes.push_back(json_name(n));
        auto node = [&](const json& j) {
            auto idx = inst.node_index(json_name(j));
            if (!idx) fail(ErrorKind::validation, "unknown node '" + json_name(j) + "'");
            return *idx;
        };

        std::vector<Rational> ws;
        for (const auto& w : field(doc, "weights")) ws.push_back(json_rational(w));
        inst.weights = WeightSet(std::move(ws));
        auto level = [&](const json& j) {
            auto idx = inst.weights.index_of(json_rational(j));
            if (!idx) fail(ErrorKind::validation, "weight " + to_string(json_rational(j)) + " not in W");
            return *idx;
        };

        if (doc.contains("connectivity")) inst.kind = parse_kind(doc.at("connectivity").get<std::string>());

        if (doc.contains("base_edges"))
            for (const auto& e : doc.at("base_edges")) {
                auto [u, v] = endpoints(e);
                inst.base_edges.emplace_back(node(*u), node(*v));
            }

        if (doc.contains("candidate_edges")) {
            int auto_id = 0;
            for (const auto& e : doc.at("candidate_edges")) {
                CandidateEdge ce;
                auto [u, v] = endpoints(e);
                ce.u = node(*u);
                ce.v = node(*v);
                ce.id = e.is_object() && e.contains("id") ? json_name(e.at("id"))
                                                          : "e" + std::to_string(auto_id);
                ++auto_id;
                auto read_pairs = [&](const json& list) {
                    std::vector<std::pair<int, int>> out;
                    for (const auto& p : list) {
                        if (!p.is_array() || p.size() != 2)
                            fail(ErrorKind::validation, "activation pair must have two entries");
                        out.emplace_back(level(p[0]), level(p[1]));
                    }
                    return out;
                };
                if (e.is_object() && e.contains("activation_pairs"))
                    ce.relation = ActivationRelation::from_pairs(inst.weights.size(),
                                                                 read_pairs(e.at("activation_pairs")));
                else
                    ce.relation = ActivationRelation::from_minimal_pairs(inst.weights.size(),
                                                                         read_pairs(field(e, "activation")));
                inst.candidate_edges.push_back(std::move(ce));
            }
        }

        if (doc.contains("demands"))
            for (const auto& d : doc.at("demands")) {
                Demand dm;
                dm.s = node(field(d, "s"));
                dm.t = node(field(d, "t"));
                const json& r = field(d, "r");
                if (!r.is_number_integer()) fail(ErrorKind::validation, "requirement must be an integer");
                dm.r = r.get<int>();
                const json& p = field(d, "penalty");
                if (p.is_string() && p.get<std::string>() == "inf")
                    dm.penalty = Extended::infinity();
                else
                    dm.penalty = Extended(json_rational(p));
                inst.demands.push_back(dm);
            }
    } catch (const json::exception& ex) {
        fail(ErrorKind::validation, std::string("malformed document: ") + ex.what());
    }
    inst.validate();
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    json doc;
    doc["nodes"] = inst.nodes;
    json ws = json::array();
    for (const auto& w : inst.weights.values()) ws.push_back(rational_json(w));
    doc["weights"] = ws;
    doc["connectivity"] = std::string(to_string(inst.kind));
    auto name = [&](int v) { return inst.nodes[static_cast<size_t>(v)]; };
    json base = json::array();
    for (auto [u, v] : inst.base_edges) base.push_back(json{{"u", name(u)}, {"v", name(v)}});
    doc["base_edges"] = base;
    json cands = json::array();
    for (const auto& e : inst.candidate_edges) {
        json act = json::array();
        for (auto [i, j] : e.relation.minimal_pairs())
            act.push_back(json::array({rational_json(inst.weights[i]), rational_json(inst.weights[j])}));
        cands.push_back(json{{"id", e.id}, {"u", name(e.u)}, {"v", name(e.v)}, {"activation", act}});
    }
    doc["candidate_edges"] = cands;
    json dem = json::array();
    for (const auto& d : inst.demands) {
        json p = d.penalty.is_infinite() ? json("inf") : rational_json(d.penalty.value());
        dem.push_back(json{{"s", name(d.s)}, {"t", name(d.t)}, {"r", d.r}, {"penalty", p}});
    }
    doc["demands"] = dem;
    return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::validation, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string node_list(const Instance& inst, NodeSet s) {
    std::string out;
    for (int v = 0; v < inst.num_nodes(); ++v)
        if (contains(s, v)) {
            if (!out.empty()) out += ',';
            out += inst.nodes[static_cast<size_t>(v)];
        }
    return out;
}

}  // namespace pcnap
