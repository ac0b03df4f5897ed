#include "isinglo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace isinglo {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

std::optional<VertexId> CouplingGraph::find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

CouplingGraph CouplingGraph::build(const Input& in) {
    CouplingGraph g;
    g.names_.reserve(in.vertices.size());
    for (const auto& name : in.vertices) {
        if (name.empty()) fail("empty vertex name");
        auto [it, fresh] = g.index_.emplace(name, static_cast<VertexId>(g.names_.size()));
        if (!fresh) fail("duplicate vertex '" + name + "'");
        g.names_.push_back(name);
    }
    const std::size_t nv = g.names_.size();

    g.region_pos_.assign(nv, -1);
    std::vector<VertexId> region_ids;
    for (const auto& name : in.region) {
        auto v = g.find(name);
        if (!v) fail("region vertex '" + name + "' not in vertex list");
        if (g.region_pos_[*v] >= 0) fail("duplicate region vertex '" + name + "'");
        g.region_pos_[*v] = 0;  // provisional marker
        region_ids.push_back(*v);
    }
    if (region_ids.empty()) fail("region must contain at least one vertex");
    std::sort(region_ids.begin(), region_ids.end());
    g.region_ = region_ids;
    for (std::size_t p = 0; p < g.region_.size(); ++p)
        g.region_pos_[g.region_[p]] = static_cast<std::ptrdiff_t>(p);

    g.field_.assign(nv, 0.0);
    for (const auto& [name, h] : in.field) {
        auto v = g.find(name);
        if (!v) fail("field on unknown vertex '" + name + "'");
        if (g.region_pos_[*v] < 0) fail("field on non-region vertex '" + name + "'");
        g.field_[*v] = h;
        if (h != 0.0) g.has_field_ = true;
    }

    g.boundary_.assign(nv, 0);
    for (const auto& [name, spin] : in.boundary) {
        auto v = g.find(name);
        if (!v) fail("boundary spin on unknown vertex '" + name + "'");
        if (g.region_pos_[*v] >= 0) fail("boundary spin on region vertex '" + name + "'");
        if (spin != 1 && spin != -1) fail("boundary spin of '" + name + "' must be +1 or -1");
        g.boundary_[*v] = spin;
    }

    std::set<std::pair<VertexId, VertexId>> seen;
    g.edges_.reserve(in.edges.size());
    for (const auto& e : in.edges) {
        auto u = g.find(e.u);
        auto v = g.find(e.v);
        if (!u || !v) fail("edge endpoint '" + (!u ? e.u : e.v) + "' not in vertex list");
        if (*u == *v) fail("self-loop at vertex '" + e.u + "'");
        if (e.coupling == 0.0) fail("zero coupling on edge {" + e.u + "," + e.v + "}");
        Edge edge{std::min(*u, *v), std::max(*u, *v), e.coupling};
        if (!seen.emplace(edge.u, edge.v).second)
            fail("duplicate edge {" + e.u + "," + e.v + "}");
        g.edges_.push_back(edge);
    }

    g.incident_.assign(nv, {});
    std::vector<bool> in_closed(nv, false);
    for (VertexId rv : g.region_) in_closed[rv] = true;
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        const Edge& e = g.edges_[i];
        const bool adjacent = g.region_pos_[e.u] >= 0 || g.region_pos_[e.v] >= 0;
        if (!adjacent) continue;
        const std::size_t pos = g.region_edges_.size();
        g.region_edges_.push_back(i);
        g.incident_[e.u].push_back({pos, e.v});
        g.incident_[e.v].push_back({pos, e.u});
        for (VertexId w : {e.u, e.v}) {
            in_closed[w] = true;
            if (g.region_pos_[w] < 0 && g.boundary_[w] == 0)
                fail("missing boundary spin for vertex '" + g.names_[w] + "'");
        }
    }
    for (VertexId v = 0; v < nv; ++v)
        if (in_closed[v]) g.closed_region_.push_back(v);

    return g;
}

CouplingGraph absorb_field(const CouplingGraph& g) {
    CouplingGraph::Input in;
    for (VertexId v = 0; v < g.vertex_count(); ++v) in.vertices.push_back(g.name(v));
    for (VertexId v : g.region()) in.region.push_back(g.name(v));
    for (const Edge& e : g.edges())
        in.edges.push_back({g.name(e.u), g.name(e.v), e.coupling});
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.boundary_spin(v) != 0) in.boundary.emplace(g.name(v), g.boundary_spin(v));

    for (VertexId v : g.region()) {
        const double h = g.field_at(v);
        if (h == 0.0) continue;  // no zero-coupling ghost edge
        std::string ghost = g.name(v) + "~";
        while (g.find(ghost)) ghost += "~";
        in.vertices.push_back(ghost);
        in.edges.push_back({g.name(v), ghost, 2.0 * h});
        in.boundary.emplace(ghost, +1);
    }
    return CouplingGraph::build(in);
}

double interaction_budget(const CouplingGraph& g) {
    double max_coupling = 0.0;
    double max_field = 0.0;
    for (VertexId v : g.region()) {
        double total = 0.0;
        for (const auto& inc : g.incident(v))
            total += std::abs(g.edges()[g.region_edges()[inc.edge_pos]].coupling);
        max_coupling = std::max(max_coupling, total);
        max_field = std::max(max_field, std::abs(g.field_at(v)));
    }
    return max_coupling + max_field;
}

SignedEdgePartition signed_partition(const CouplingGraph& g) {
    SignedEdgePartition part;
    for (std::size_t pos = 0; pos < g.region_edges().size(); ++pos) {
        const Edge& e = g.edges()[g.region_edges()[pos]];
        (e.coupling > 0.0 ? part.positive : part.negative).push_back(pos);
    }
    return part;
}

CouplingGraph parse_instance_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        fail(std::string("instance is not valid JSON: ") + ex.what());
    }
    CouplingGraph::Input in;
    if (!doc.contains("vertices") || !doc.contains("region"))
        fail("instance must contain 'vertices' and 'region'");
    for (const auto& v : doc.at("vertices")) in.vertices.push_back(v.get<std::string>());
    for (const auto& v : doc.at("region")) in.region.push_back(v.get<std::string>());
    if (doc.contains("edges"))
        for (const auto& e : doc.at("edges"))
            in.edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(),
                                e.at("J").get<double>()});
    if (doc.contains("field"))
        for (const auto& [k, v] : doc.at("field").items())
            in.field.emplace(k, v.get<double>());
    if (doc.contains("boundary"))
        for (const auto& [k, v] : doc.at("boundary").items())
            in.boundary.emplace(k, v.get<int>());
    return CouplingGraph::build(in);
}

CouplingGraph load_instance(const std::string& path) {
    std::ifstream file(path);
    if (!file) fail("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_instance_text(buf.str());
}

std::string instance_to_text(const CouplingGraph& g) {
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    for (VertexId v = 0; v < g.vertex_count(); ++v) doc["vertices"].push_back(g.name(v));
    doc["region"] = nlohmann::json::array();
    for (VertexId v : g.region()) doc["region"].push_back(g.name(v));
    doc["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges())
        doc["edges"].push_back({{"u", g.name(e.u)}, {"v", g.name(e.v)}, {"J", e.coupling}});
    doc["field"] = nlohmann::json::object();
    for (VertexId v : g.region())
        if (g.field_at(v) != 0.0) doc["field"][g.name(v)] = g.field_at(v);
    doc["boundary"] = nlohmann::json::object();
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.boundary_spin(v) != 0) doc["boundary"][g.name(v)] = g.boundary_spin(v);
    return doc.dump(2) + "\n";
}

}  // namespace isinglo
