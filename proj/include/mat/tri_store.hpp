#pragma once
/**
 * @file   tri_store.hpp
 * @brief  Triangle records, edge classes, hop propagation and the analysis-side checkers.
 */

#include "mat/geometry.hpp"
#include "mat/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mat
{
    enum class TriangleKind : std::uint8_t
    {
        Expansion,
        Discovery,
        Wall
    };

    [[nodiscard]] std::string_view to_string (TriangleKind k);

    struct TriangleRecord
    {
        TriKey key{};
        RobotId owner = 0;
        std::optional<std::uint32_t> hop;
        std::optional<std::uint8_t> descent; ///< see TriangleHop::descent
        bool is_frontier = false;
        TriangleKind kind = TriangleKind::Expansion;
        std::uint64_t created_round = 0;
    };

    enum class EdgeType : std::uint8_t
    {
        Frontier,
        Internal,
        Wall
    };

    struct EdgeClass
    {
        EdgeKey edge;
        EdgeType type = EdgeType::Frontier;
    };

    /// Two or more triangles claim the same edge from the same side.
    struct StructuralError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct DualGraph
    {
        std::vector<TriKey> vertices;
        std::vector<std::pair<TriKey, TriKey>> edges;
        std::map<TriKey, std::vector<TriKey>> adjacency;
    };

    struct FrontierLinks
    {
        std::optional<RobotId> left;
        std::optional<RobotId> right;
    };

    /// Immutable copy of the distributed structure, taken between rounds.
    struct Snapshot
    {
        std::uint64_t round = 0;
        std::vector<TriangleRecord> triangles;
        std::map<RobotId, FrontierLinks> links;
        std::map<RobotId, Point> positions;
        std::map<RobotId, FsmState> states;
        std::map<RobotId, std::set<RobotId>> graph; ///< primal communication graph
        EdgeKey base_edge{0, 1};
    };

    /// Incidence count of every edge. Throws StructuralError past 2.
    [[nodiscard]] std::map<EdgeKey, int> edge_incidence (const std::vector<TriangleRecord> &records);

    /// Incidence-2 edges are internal. Incidence-1 edges are wall edges when listed in
    /// `wall_edges`, frontier edges otherwise.
    [[nodiscard]] std::vector<EdgeClass> classify_edges (const std::vector<TriangleRecord> &records,
                                                         const std::set<EdgeKey> &wall_edges = {});

    /// Edges whose endpoints are frontier neighbours, by either endpoint's claim.
    [[nodiscard]] std::set<EdgeKey> linked_edges (const std::map<RobotId, FrontierLinks> &links);

    /// Edge classes for a snapshot: a single-triangle edge is frontier iff its
    /// endpoints are linked, wall otherwise. The base edge is a wall edge.
    [[nodiscard]] std::vector<EdgeClass> classify_snapshot (const Snapshot &s);

    /// Frontier triangles get 0; others 1 + min over adjacent known hops.
    /// Values above `max_hop` become unset. No known neighbour keeps the old hop.
    void update_triangle_hop (std::vector<TriangleRecord> &owned, const std::map<TriKey, std::optional<std::uint32_t>> &known_hops,
                              std::uint32_t max_hop);

    [[nodiscard]] DualGraph extract_dual_graph (const std::vector<TriangleRecord> &records);

    /// Multi-source BFS over the dual graph; unreachable triangles are absent.
    [[nodiscard]] std::map<TriKey, std::uint32_t> dual_distances (const DualGraph &d, const std::vector<TriKey> &sources);

    /// Frontier-edge triangles whose owner is not on that frontier edge.
    [[nodiscard]] std::vector<TriKey> check_owner_invariant (const Snapshot &s);

    /// Dual edges whose owners differ and are not adjacent in the primal graph.
    [[nodiscard]] std::vector<std::pair<TriKey, TriKey>> check_owner_connectivity (const Snapshot &s);

    /// Triangle pairs whose interiors overlap by more than `tol` m².
    [[nodiscard]] std::vector<std::pair<TriKey, TriKey>> check_overlaps (const Snapshot &s, double tol = 1e-9);

    /// Frontier links must be symmetric, form simple paths or cycles, and
    /// only frontier robots may hold them. Returns human-readable problems.
    [[nodiscard]] std::vector<std::string> check_frontier_chain (const Snapshot &s);

} // namespace mat
