// Preset instance families with a uniform coupling, optional uniform field
// and optional ±1 boundary: independent sites, path, cycle, square grid.
// Every family keeps the per-vertex interaction budget bounded uniformly in
// the size.
#pragma once

#include <cstdint>
#include <string>

#include "isinglo/graph.hpp"

namespace isinglo {

enum class BoundaryKind { free, plus, minus };

struct FamilyConfig {
    std::string name;  // independent | path | cycle | grid
    std::uint64_t size = 1;
    double coupling = 1.0;
    double field = 0.0;
    BoundaryKind boundary = BoundaryKind::free;
};

BoundaryKind parse_boundary(const std::string& text);

// Builds the instance; throws std::invalid_argument for unknown names,
// impossible sizes, or a boundary request on a family without exterior
// vertices (independent, cycle).
CouplingGraph make_family(const FamilyConfig& cfg);

}  // namespace isinglo
