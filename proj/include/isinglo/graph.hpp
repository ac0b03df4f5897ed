// Finite Ising instances: a weighted graph with signed couplings, a region of
// free spins, an external field on the region and fixed spins outside it.
// Graphs are immutable after construction; transforms return new values, so
// one instance can be shared across concurrent workers.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isinglo {

using VertexId = std::uint32_t;

struct Edge {
    VertexId u = 0;  // u < v
    VertexId v = 0;
    double coupling = 0.0;  // nonzero
};

// Region-adjacent edges split by coupling sign.
struct SignedEdgePartition {
    std::vector<std::size_t> positive;  // positions into region_edges()
    std::vector<std::size_t> negative;
};

class CouplingGraph {
public:
    struct EdgeInput {
        std::string u;
        std::string v;
        double coupling = 0.0;
    };

    struct Input {
        std::vector<std::string> vertices;  // listing order fixes the total order
        std::vector<std::string> region;
        std::vector<EdgeInput> edges;
        std::map<std::string, double> field;    // region id -> h
        std::map<std::string, int> boundary;    // exterior id -> ±1
    };

    // Validates all structural invariants; throws std::invalid_argument with
    // the offending item named.
    static CouplingGraph build(const Input& in);

    std::size_t vertex_count() const { return names_.size(); }
    const std::string& name(VertexId v) const { return names_[v]; }
    std::optional<VertexId> find(std::string_view name) const;

    bool in_region(VertexId v) const { return region_pos_[v] >= 0; }
    // Position of a region vertex in region() order; negative outside.
    std::ptrdiff_t region_position(VertexId v) const { return region_pos_[v]; }
    // Region vertices in ascending total order. Spin configurations, weight
    // vectors and enumeration bit positions are all indexed by this order.
    const std::vector<VertexId>& region() const { return region_; }
    std::size_t region_size() const { return region_.size(); }

    double field_at(VertexId v) const { return field_[v]; }
    bool has_field() const { return has_field_; }
    // Boundary spin of an exterior vertex (0 when none was given).
    int boundary_spin(VertexId v) const { return boundary_[v]; }

    const std::vector<Edge>& edges() const { return edges_; }
    // E_n: indices into edges() of the edges adjacent to the region, in edge
    // listing order. Edge configurations are indexed by position here.
    const std::vector<std::size_t>& region_edges() const { return region_edges_; }

    struct Incidence {
        std::size_t edge_pos;  // position into region_edges()
        VertexId neighbor;
    };
    // Region-adjacent incidences of a vertex.
    const std::vector<Incidence>& incident(VertexId v) const { return incident_[v]; }

    // The region plus every exterior endpoint of a region-adjacent edge,
    // ascending.
    const std::vector<VertexId>& closed_region() const { return closed_region_; }

private:
    CouplingGraph() = default;

    std::vector<std::string> names_;
    std::map<std::string, VertexId, std::less<>> index_;
    std::vector<std::ptrdiff_t> region_pos_;
    std::vector<VertexId> region_;
    std::vector<double> field_;
    bool has_field_ = false;
    std::vector<int> boundary_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> region_edges_;
    std::vector<std::vector<Incidence>> incident_;
    std::vector<VertexId> closed_region_;
};

// Rewrites the external field as fixed +1 neighbors: each region vertex with
// h != 0 gains a fresh exterior vertex attached by a coupling of twice the
// field value. Ghost vertices are appended after all original ones, so
// representative selection inside original clusters is unaffected. The Gibbs
// distribution on the region is unchanged.
CouplingGraph absorb_field(const CouplingGraph& g);

// max over region vertices of the total absolute coupling at the vertex,
// plus max over region vertices of the absolute field.
double interaction_budget(const CouplingGraph& g);

SignedEdgePartition signed_partition(const CouplingGraph& g);

// Instance files are JSON documents with keys `vertices`, `region`, `edges`
// (list of {u, v, J}), `field`, `boundary`. One parser serves every command.
CouplingGraph parse_instance_text(const std::string& text);
CouplingGraph load_instance(const std::string& path);
std::string instance_to_text(const CouplingGraph& g);

}  // namespace isinglo
