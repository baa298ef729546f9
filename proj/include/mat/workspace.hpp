#pragma once
/**
 * @file   workspace.hpp
 * @brief  Polygonal environment, wall sensing, and the unicycle motion model.
 */

#include "mat/geometry.hpp"

#include <array>
#include <optional>
#include <vector>

namespace mat
{
    struct Segment
    {
        Point a;
        Point b;
    };

    /// Polygon with holes. Outer ring counterclockwise, holes clockwise.
    /// The unexplored side of the base edge is to the left of base_edge[0] → base_edge[1].
    struct WorkspacePolygon
    {
        std::vector<Point> outer;
        std::vector<std::vector<Point>> holes;
        std::array<Point, 2> base_edge{Point::Zero (), Point::Zero ()};
    };

    struct RobotSpec
    {
        double diameter = 0.1;
        double r_max = 1.0;
        double bearing_resolution = kPi / 8.0;
        double wall_sense_range = 0.5;
        double speed = 0.2;
        double max_turn_rate = kTwoPi;
    };

    /// Ground-truth pose. Simulator and analysis only.
    struct Pose
    {
        Point position = Point::Zero ();
        double heading = 0.0;
    };

    struct WallSense
    {
        bool contact = false;
        bool near_wall = false;
        std::optional<Angle> wall_bearing; ///< robot frame, set when near_wall
    };

    struct MotionCommand
    {
        double turn_rate = 0.0; ///< rad/s
        double forward = 0.0;   ///< m/s
    };

    inline constexpr double kContactEpsilon = 1e-3;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate (const WorkspacePolygon &w, const RobotSpec &spec);

    [[nodiscard]] std::vector<Segment> wall_segments (const WorkspacePolygon &w);

    /// Inside the outer ring and outside every hole.
    [[nodiscard]] bool in_free_space (const WorkspacePolygon &w, const Point &p);

    [[nodiscard]] double free_area (const WorkspacePolygon &w);

    /// Distance to the nearest wall, optionally reporting the closest wall point.
    [[nodiscard]] double distance_to_walls (const WorkspacePolygon &w, const Point &p, Point *closest = nullptr);

    [[nodiscard]] bool line_of_sight (const Point &p, const Point &q, const WorkspacePolygon &w);

    [[nodiscard]] WallSense sense_walls (const Pose &pose, const RobotSpec &spec, const WorkspacePolygon &w);

    /// Turn, then translate; translation slides along walls to keep δ/2 clearance.
    [[nodiscard]] Pose integrate_motion (const Pose &pose, const MotionCommand &cmd, double dt, const RobotSpec &spec,
                                         const WorkspacePolygon &w);

    /// Command that turns toward `bearing` (robot frame) and drives when roughly aligned.
    [[nodiscard]] MotionCommand steer_toward (Angle bearing, const RobotSpec &spec, double dt, double speed_scale = 1.0);

    /// Unit vector pointing from the base edge into unexplored space.
    [[nodiscard]] Point base_normal (const WorkspacePolygon &w);

} // namespace mat
