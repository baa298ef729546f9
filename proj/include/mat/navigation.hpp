#pragma once
/**
 * @file   navigation.hpp
 * @brief  Routing over the triangulation's dual graph and the path-quality analysis.
 */

#include "mat/tri_store.hpp"
#include "mat/workspace.hpp"

#include <array>
#include <random>
#include <stdexcept>
#include <vector>

namespace mat
{
    struct LocationError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct UnreachableError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// Ground-truth corners of a triangle.
    [[nodiscard]] std::array<Point, 3> corners (const TriKey &k, const std::map<RobotId, Point> &positions);

    /// BFS hops from `goal`; unreachable triangles are absent.
    [[nodiscard]] std::map<TriKey, std::uint32_t> dual_bfs (const DualGraph &d, const TriKey &goal);

    /// Shortest dual path from `from` to `to`, ties broken by smaller triangle key.
    [[nodiscard]] std::vector<TriKey> dual_path (const DualGraph &d, const TriKey &from, const TriKey &to);

    enum class WaypointRule
    {
        SharedEdgeMidpoint,
        WorstCaseVertex
    };

    struct GreedyPath
    {
        std::vector<Point> waypoints;     ///< s, q_1 ... q_l, g
        std::vector<TriKey> dual_sequence; ///< Δ_s ... Δ_g
        double length = 0.0;
    };

    /// First triangle (by key) containing p, or nullopt.
    [[nodiscard]] std::optional<TriKey> locate (const Point &p, const Snapshot &s, double tol = 1e-12);

    /// Throws LocationError when s or g is outside every triangle.
    [[nodiscard]] GreedyPath greedy_path (const Point &s, const Point &g, const Snapshot &snap,
                                          WaypointRule rule = WaypointRule::SharedEdgeMidpoint);

    /// Euclidean shortest path inside the free space (visibility graph over reflex corners).
    /// Throws UnreachableError when g cannot be reached.
    [[nodiscard]] double exact_shortest_path (const Point &s, const Point &g, const WorkspacePolygon &w);

    struct StretchBounds
    {
        double c = 0.0;
        double c_prime = 0.0;
    };

    /// c = ⌊2π/α⌋·ρ/sin(α/2), c′ = ⌊6π/α⌋·ρ/sin(α/2). Throws std::invalid_argument for α ≤ 0.
    [[nodiscard]] StretchBounds stretch_bounds (const FatnessParams &f);

    /// Measured (ρ, α) of a triangulation.
    [[nodiscard]] FatnessParams fatness_params (const Snapshot &s);

    /// Shortest edge over all triangles.
    [[nodiscard]] double shortest_edge (const Snapshot &s);

    /// Length of the part of the line {p + t·d} inside the triangle.
    [[nodiscard]] double chord_in_triangle (const std::array<Point, 3> &tri, const Point &p, const Point &d);

    /// Length of the part of the line {p + t·d} inside a disk.
    [[nodiscard]] double chord_in_disk (const Point &center, double radius, const Point &p, const Point &d);

    /// The intersection-length disjunction: the chord through the triangle, or the
    /// chord through one of the vertex disks of radius r_min/2, reaches
    /// r_min / (2 sin(α/2)).
    [[nodiscard]] bool intersection_lower_bound (const std::array<Point, 3> &tri, const Point &p, const Point &d, double r_min,
                                                 double alpha);

    struct NavigationTrial
    {
        TriKey start{};
        TriKey goal{};
        Point s = Point::Zero ();
        Point g = Point::Zero ();
        double trajectory = 0.0; ///< simulated robot path length
        double greedy = 0.0;     ///< T-greedy path length, shared-edge midpoints
        double exact = 0.0;      ///< d_p(s, g)
        double stretch = 0.0;    ///< trajectory / exact
        std::size_t moves = 0;   ///< triangle-to-triangle transitions
        std::size_t good_moves = 0; ///< transitions that lowered the hop count
        bool reached = false;
    };

    struct NavigationParams
    {
        double step = 0.02;            ///< metres per tick
        std::size_t max_ticks = 20000;
    };

    /// A robot starting at the centroid of `start` follows the hop gradient toward
    /// `goal`, heading along the bisector of the shared edge it wants to cross.
    [[nodiscard]] NavigationTrial simulate_navigation (const Snapshot &snap, const WorkspacePolygon &w, const TriKey &start,
                                                       const TriKey &goal, const NavigationParams &p = {});

    /// Random start/goal pairs that share no vertex, drawn from `rng`.
    [[nodiscard]] std::vector<NavigationTrial> navigation_trials (const Snapshot &snap, const WorkspacePolygon &w, std::size_t trials,
                                                                  std::mt19937_64 &rng, const NavigationParams &p = {});

    /// Equilateral lattice with side `spacing` anchored at `origin`, keeping the
    /// triangles that lie wholly in free space. Every triangle is owned by its
    /// smallest id and has kind Expansion; hops are left unset.
    [[nodiscard]] Snapshot lattice_snapshot (const WorkspacePolygon &w, const Point &origin, double spacing);

} // namespace mat
