#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "hvgrid/errors.hpp"

namespace hvgrid {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// One circuit between two substations. Endpoints are unordered; internally
// they are stored with a <= b.
struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    double voltage_kv = 0.0;
    std::string circuit_id;
};

// Edge expressed with substation names, used when assembling a graph.
struct NamedEdge {
    std::string a;
    std::string b;
    double voltage_kv = 0.0;
    std::string circuit_id;
};

struct Arc {
    NodeId to;
    EdgeId edge;
};

// Immutable undirected multigraph of substations and circuits. Node ids are
// assigned in sorted name order and edges are kept in a canonical order
// (endpoints, voltage, circuit id), so identical inputs always produce an
// identical in-memory layout regardless of input row order.
class GridGraph {
public:
    // Canonicalizing builder: collects endpoint names, sorts them, normalizes
    // endpoint order and sorts the edge list.
    static GridGraph build(const std::vector<NamedEdge>& named_edges, bool simple = false) {
        std::vector<std::string> names;
        names.reserve(named_edges.size() * 2);
        for (const auto& e : named_edges) {
            names.push_back(e.a);
            names.push_back(e.b);
        }
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());

        std::vector<Edge> edges;
        edges.reserve(named_edges.size());
        for (const auto& e : named_edges) {
            NodeId ia = lookup(names, e.a);
            NodeId ib = lookup(names, e.b);
            Edge out;
            out.a = std::min(ia, ib);
            out.b = std::max(ia, ib);
            out.voltage_kv = e.voltage_kv;
            out.circuit_id = e.circuit_id;
            edges.push_back(std::move(out));
        }
        sort_edges(edges);
        return GridGraph(std::move(names), std::move(edges), simple);
    }

    // Direct constructor. `node_names` must be sorted and unique, edge
    // endpoints normalized (a <= b) and the edge list canonically sorted;
    // GridGraph::build takes care of all of that.
    GridGraph(std::vector<std::string> node_names, std::vector<Edge> edges, bool simple)
        : names_(std::move(node_names)), edges_(std::move(edges)), simple_(simple) {
        validate();
        build_adjacency();
    }

    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool is_simple() const { return simple_; }

    const std::vector<std::string>& node_names() const { return names_; }
    const std::string& node_name(NodeId u) const { return names_[u]; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Index of a node name, or node_count() if absent.
    NodeId find_node(std::string_view name) const {
        auto it = std::lower_bound(names_.begin(), names_.end(), name);
        if (it != names_.end() && *it == name)
            return static_cast<NodeId>(it - names_.begin());
        return static_cast<NodeId>(names_.size());
    }

    // All incident arcs, parallel circuits included; a self-loop contributes
    // two arcs. arcs(u).size() is therefore the multigraph degree of u.
    std::span<const Arc> arcs(NodeId u) const {
        return {arcs_.data() + arc_offset_[u], arc_offset_[u + 1] - arc_offset_[u]};
    }

    // Distinct neighbors excluding u itself (the simple projection), sorted.
    std::span<const NodeId> neighbors(NodeId u) const {
        return {nbrs_.data() + nbr_offset_[u], nbr_offset_[u + 1] - nbr_offset_[u]};
    }

    std::size_t multidegree(NodeId u) const { return arcs(u).size(); }

    static void sort_edges(std::vector<Edge>& edges) {
        std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
            return std::tie(x.a, x.b, x.voltage_kv, x.circuit_id) <
                   std::tie(y.a, y.b, y.voltage_kv, y.circuit_id);
        });
    }

private:
    static NodeId lookup(const std::vector<std::string>& sorted_names, const std::string& name) {
        auto it = std::lower_bound(sorted_names.begin(), sorted_names.end(), name);
        return static_cast<NodeId>(it - sorted_names.begin());
    }

    void validate() const {
        const auto n = names_.size();
        for (const auto& e : edges_) {
            if (e.a >= n || e.b >= n)
                throw ValidationError("edge endpoint out of range");
            if (e.a > e.b)
                throw ValidationError("edge endpoints not normalized");
            if (!(e.voltage_kv > 0.0) || !std::isfinite(e.voltage_kv))
                throw ValidationError("edge voltage must be a positive finite number");
        }
        if (simple_) {
            for (std::size_t i = 0; i < edges_.size(); ++i) {
                if (edges_[i].a == edges_[i].b)
                    throw ValidationError("simple graph contains a self-loop");
                if (i > 0 && edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b)
                    throw ValidationError("simple graph contains parallel edges");
            }
        }
    }

    void build_adjacency() {
        const std::size_t n = names_.size();
        arc_offset_.assign(n + 1, 0);
        for (const auto& e : edges_) {
            arc_offset_[e.a + 1]++;
            arc_offset_[e.b + 1]++;
        }
        for (std::size_t u = 0; u < n; ++u) arc_offset_[u + 1] += arc_offset_[u];
        arcs_.resize(arc_offset_[n]);
        std::vector<std::uint32_t> cursor(arc_offset_.begin(), arc_offset_.end() - 1);
        for (EdgeId ei = 0; ei < edges_.size(); ++ei) {
            const Edge& e = edges_[ei];
            arcs_[cursor[e.a]++] = Arc{e.b, ei};
            arcs_[cursor[e.b]++] = Arc{e.a, ei};
        }

        nbr_offset_.assign(n + 1, 0);
        nbrs_.clear();
        nbrs_.reserve(arcs_.size());
        std::vector<NodeId> scratch;
        for (std::size_t u = 0; u < n; ++u) {
            scratch.clear();
            for (const Arc& a : arcs(static_cast<NodeId>(u)))
                if (a.to != u) scratch.push_back(a.to);
            std::sort(scratch.begin(), scratch.end());
            scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
            nbrs_.insert(nbrs_.end(), scratch.begin(), scratch.end());
            nbr_offset_[u + 1] = static_cast<std::uint32_t>(nbrs_.size());
        }
    }

    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    bool simple_;

    std::vector<std::uint32_t> arc_offset_;
    std::vector<Arc> arcs_;
    std::vector<std::uint32_t> nbr_offset_;
    std::vector<NodeId> nbrs_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

} // namespace detail

// Reads the canonical edge-list CSV: header `from,to,voltage_kv[,circuit_id]`,
// one row per circuit. Rows missing a circuit id get the 1-based data-row
// index as their id.
inline GridGraph parse_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    bool has_circuit_col = false;
    if (!std::getline(in, line))
        throw ValidationError("empty edge-list input");
    ++line_no;
    // Tolerate a UTF-8 BOM on the first line.
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF')
        line.erase(0, 3);
    {
        auto fields = detail::split_fields(line);
        std::vector<std::string> names;
        for (auto f : fields) names.push_back(detail::lower(f));
        if (names.size() == 3 && names[0] == "from" && names[1] == "to" && names[2] == "voltage_kv") {
            has_circuit_col = false;
        } else if (names.size() == 4 && names[0] == "from" && names[1] == "to" &&
                   names[2] == "voltage_kv" && names[3] == "circuit_id") {
            has_circuit_col = true;
        } else {
            throw ParseError(line_no, "expected header 'from,to,voltage_kv[,circuit_id]'");
        }
    }

    const std::size_t expected_cols = has_circuit_col ? 4 : 3;
    std::vector<NamedEdge> named;
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != expected_cols)
            throw ParseError(line_no, "expected " + std::to_string(expected_cols) + " columns, got " +
                                          std::to_string(fields.size()));
        ++row_index;

        NamedEdge e;
        e.a = std::string(fields[0]);
        e.b = std::string(fields[1]);
        if (e.a.empty() || e.b.empty())
            throw ValidationError("line " + std::to_string(line_no) + ": empty node identifier");

        double voltage = 0.0;
        auto vs = fields[2];
        auto [ptr, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), voltage);
        if (ec != std::errc{} || ptr != vs.data() + vs.size() || !std::isfinite(voltage))
            throw ValidationError("line " + std::to_string(line_no) + ": non-numeric voltage '" +
                                  std::string(vs) + "'");
        if (voltage <= 0.0)
            throw ValidationError("line " + std::to_string(line_no) + ": voltage must be positive");
        e.voltage_kv = voltage;

        if (has_circuit_col && !fields[3].empty())
            e.circuit_id = std::string(fields[3]);
        else
            e.circuit_id = std::to_string(row_index);
        named.push_back(std::move(e));
    }

    if (named.empty())
        throw ValidationError("edge-list input contains no circuits");
    return GridGraph::build(named, false);
}

inline GridGraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

namespace detail {

// Shortest round-trip decimal rendering; locale independent.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace detail

// Writes the canonical CSV back out: four columns, rows in the graph's
// canonical order (endpoints, then voltage, then circuit id), LF endings.
inline void serialize_edge_list(const GridGraph& g, std::ostream& out) {
    out << "from,to,voltage_kv,circuit_id\n";
    for (const Edge& e : g.edges()) {
        out << g.node_name(e.a) << ',' << g.node_name(e.b) << ','
            << detail::format_double(e.voltage_kv) << ',' << e.circuit_id << '\n';
    }
}

inline std::string serialize_edge_list(const GridGraph& g) {
    std::ostringstream out;
    serialize_edge_list(g, out);
    return out.str();
}

// Partition of the node set by undirected reachability. Components are
// ordered by size descending, ties by smallest contained node name; nodes
// inside a component are sorted by name.
inline std::vector<std::vector<std::string>> connected_components(const GridGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::int32_t> label(n, -1);
    std::vector<NodeId> queue;
    std::vector<std::vector<std::string>> components;

    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != -1) continue;
        const auto comp_id = static_cast<std::int32_t>(components.size());
        label[s] = comp_id;
        queue.clear();
        queue.push_back(s);
        std::vector<std::string> members;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId u = queue[head];
            members.push_back(g.node_name(u));
            for (NodeId v : g.neighbors(u)) {
                if (label[v] == -1) {
                    label[v] = comp_id;
                    queue.push_back(v);
                }
            }
        }
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }

    std::stable_sort(components.begin(), components.end(),
                     [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
                         if (x.size() != y.size()) return x.size() > y.size();
                         return x.front() < y.front();
                     });
    return components;
}

} // namespace hvgrid
