#include "isinglo/families.hpp"

#include <cmath>
#include <stdexcept>

namespace isinglo {

namespace {

std::string vname(std::uint64_t i) { return "v" + std::to_string(i); }

void add_region(CouplingGraph::Input& in, std::uint64_t n, double field) {
    for (std::uint64_t i = 0; i < n; ++i) {
        in.vertices.push_back(vname(i));
        in.region.push_back(vname(i));
        if (field != 0.0) in.field[vname(i)] = field;
    }
}

// Attaches a fresh exterior vertex to `anchor` with the given coupling and
// spin, naming it b0, b1, ... in creation order.
void add_boundary_vertex(CouplingGraph::Input& in, std::uint64_t& counter,
                         const std::string& anchor, double coupling, int spin) {
    std::string name = "b" + std::to_string(counter++);
    in.vertices.push_back(name);
    in.edges.push_back({anchor, name, coupling});
    in.boundary[name] = spin;
}

}  // namespace

BoundaryKind parse_boundary(const std::string& text) {
    if (text == "free") return BoundaryKind::free;
    if (text == "plus") return BoundaryKind::plus;
    if (text == "minus") return BoundaryKind::minus;
    throw std::invalid_argument("unknown boundary '" + text +
                                "' (expected free, plus, or minus)");
}

CouplingGraph make_family(const FamilyConfig& cfg) {
    if (cfg.size == 0) throw std::invalid_argument("family size must be positive");
    const std::uint64_t n = cfg.size;
    const double J = cfg.coupling;
    const int bspin = cfg.boundary == BoundaryKind::minus ? -1 : 1;
    const bool bounded = cfg.boundary != BoundaryKind::free;
    CouplingGraph::Input in;

    if (cfg.name == "independent") {
        if (bounded)
            throw std::invalid_argument(
                "independent family has no exterior vertices; boundary must be free");
        add_region(in, n, cfg.field);
        return CouplingGraph::build(in);
    }

    if (cfg.name == "path") {
        add_region(in, n, cfg.field);
        for (std::uint64_t i = 0; i + 1 < n; ++i)
            in.edges.push_back({vname(i), vname(i + 1), J});
        if (bounded) {
            std::uint64_t counter = 0;
            add_boundary_vertex(in, counter, vname(0), J, bspin);
            add_boundary_vertex(in, counter, vname(n - 1), J, bspin);
        }
        return CouplingGraph::build(in);
    }

    if (cfg.name == "cycle") {
        if (n < 3) throw std::invalid_argument("cycle family needs size >= 3");
        if (bounded)
            throw std::invalid_argument(
                "cycle family has no exterior vertices; boundary must be free");
        add_region(in, n, cfg.field);
        for (std::uint64_t i = 0; i < n; ++i)
            in.edges.push_back({vname(i), vname((i + 1) % n), J});
        return CouplingGraph::build(in);
    }

    if (cfg.name == "grid") {
        const auto side = static_cast<std::uint64_t>(std::llround(std::sqrt(double(n))));
        if (side * side != n)
            throw std::invalid_argument("grid family needs a perfect-square size");
        add_region(in, n, cfg.field);
        auto at = [side](std::uint64_t r, std::uint64_t c) { return vname(r * side + c); };
        for (std::uint64_t r = 0; r < side; ++r)
            for (std::uint64_t c = 0; c < side; ++c) {
                if (c + 1 < side) in.edges.push_back({at(r, c), at(r, c + 1), J});
                if (r + 1 < side) in.edges.push_back({at(r, c), at(r + 1, c), J});
            }
        if (bounded) {
            // One frame vertex per missing lattice neighbor keeps every cell
            // at exactly four incident couplings.
            std::uint64_t counter = 0;
            for (std::uint64_t c = 0; c < side; ++c) {
                add_boundary_vertex(in, counter, at(0, c), J, bspin);
                add_boundary_vertex(in, counter, at(side - 1, c), J, bspin);
            }
            for (std::uint64_t r = 0; r < side; ++r) {
                add_boundary_vertex(in, counter, at(r, 0), J, bspin);
                add_boundary_vertex(in, counter, at(r, side - 1), J, bspin);
            }
        }
        return CouplingGraph::build(in);
    }

    throw std::invalid_argument("unknown family '" + cfg.name +
                                "' (expected independent, path, cycle, or grid)");
}

}  // namespace isinglo
