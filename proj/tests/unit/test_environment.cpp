#include "mat/workspace.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mat;

namespace
{
    WorkspacePolygon room (double w, double h)
    {
        WorkspacePolygon ws;
        ws.outer = {{0, 0}, {w, 0}, {w, h}, {0, h}};
        ws.base_edge = {Point (0.5, 0.0), Point (1.0, 0.0)};
        return ws;
    }

    WorkspacePolygon l_room ()
    {
        WorkspacePolygon ws;
        ws.outer = {{0, 0}, {3, 0}, {3, 1.5}, {1.5, 1.5}, {1.5, 3}, {0, 3}};
        return ws;
    }

    // dense walk along the segment; any sample outside free space blocks it
    bool sampled_los (const Point &p, const Point &q, const WorkspacePolygon &w)
    {
        constexpr int kSamples = 4000;
        for (int i = 0; i <= kSamples; ++i)
            if (!in_free_space (w, p + (q - p) * (static_cast<double> (i) / kSamples)))
                return false;
        return true;
    }
} // namespace

TEST (Workspace, ValidateRejectsClockwiseOuter)
{
    auto ws = room (2, 2);
    std::reverse (ws.outer.begin (), ws.outer.end ());
    EXPECT_THROW (validate (ws, RobotSpec{}), std::invalid_argument);
}

TEST (Workspace, FreeAreaSubtractsHoles)
{
    auto ws = room (3, 3);
    EXPECT_NEAR (free_area (ws), 9.0, 1e-12);
    ws.holes.push_back ({{1.2, 1.2}, {1.2, 1.8}, {1.8, 1.8}, {1.8, 1.2}});
    EXPECT_NEAR (free_area (ws), 9.0 - 0.36, 1e-12);
}

TEST (LineOfSight, ConvexRoom)
{
    const auto ws = room (3, 2);
    EXPECT_TRUE (line_of_sight ({0.2, 0.2}, {2.8, 1.8}, ws));
}

TEST (LineOfSight, HoleBlocks)
{
    auto ws = room (3, 3);
    ws.holes.push_back ({{1.2, 1.2}, {1.2, 1.8}, {1.8, 1.8}, {1.8, 1.2}});
    EXPECT_FALSE (line_of_sight ({0.5, 1.5}, {2.5, 1.5}, ws));
    EXPECT_TRUE (line_of_sight ({0.5, 0.5}, {2.5, 0.5}, ws));
}

TEST (LineOfSight, LRoomMatchesSampling)
{
    const auto ws = l_room ();
    std::mt19937_64 rng (3);
    std::uniform_real_distribution<double> u (0.01, 2.99);
    int pairs = 0;
    while (pairs < 500)
    {
        const Point p (u (rng), u (rng)), q (u (rng), u (rng));
        if (!in_free_space (ws, p) || !in_free_space (ws, q))
            continue;
        ++pairs;
        EXPECT_EQ (line_of_sight (p, q, ws), sampled_los (p, q, ws)) << p.transpose () << " -> " << q.transpose ();
    }
}

TEST (SenseWalls, FarFromWalls)
{
    const auto ws = room (2, 2);
    const auto s = sense_walls ({Point (1, 1), 0.0}, RobotSpec{}, ws);
    EXPECT_FALSE (s.contact);
    EXPECT_FALSE (s.near_wall);
    EXPECT_FALSE (s.wall_bearing.has_value ());
}

TEST (SenseWalls, ContactAtHalfDiameter)
{
    const auto ws = room (2, 2);
    const RobotSpec spec;
    const auto s = sense_walls ({Point (1.0, 0.5 * spec.diameter), 0.0}, spec, ws);
    EXPECT_TRUE (s.contact);
    EXPECT_TRUE (s.near_wall);
    ASSERT_TRUE (s.wall_bearing.has_value ());
    EXPECT_NEAR (s.wall_bearing->rad (), 3.0 * kPi / 2.0, 1e-12);
}

TEST (SenseWalls, NearWallFlipsAtRange)
{
    auto ws = room (4, 4);
    const RobotSpec spec;
    for (int i = 10; i <= 100; ++i)
    {
        const double d = i / 100.0;
        const auto s = sense_walls ({Point (2.0, d), 0.0}, spec, ws);
        // straight wall below: the distance is just the y coordinate
        EXPECT_EQ (s.near_wall, d <= spec.wall_sense_range) << d;
    }
}

TEST (Motion, ZeroCommandIsIdentity)
{
    const auto ws = room (2, 2);
    const Pose p{Point (1, 1), 0.3};
    const auto q = integrate_motion (p, {}, 0.1, RobotSpec{}, ws);
    EXPECT_EQ (q.position, p.position);
    EXPECT_DOUBLE_EQ (q.heading, p.heading);
}

TEST (Motion, StraightLine)
{
    const auto ws = room (2, 2);
    const RobotSpec spec;
    const auto q = integrate_motion ({Point (1, 1), 0.0}, {0.0, spec.speed}, 0.1, spec, ws);
    EXPECT_NEAR (q.position.x (), 1.0 + spec.speed * 0.1, 1e-12);
    EXPECT_NEAR (q.position.y (), 1.0, 1e-12);
}

TEST (Motion, SlidesAlongWallAtClearance)
{
    const auto ws = room (2, 2);
    RobotSpec spec;
    const double clearance = 0.5 * spec.diameter;
    Pose p{Point (1.0, clearance + 0.01), -kPi / 4.0};
    for (int i = 0; i < 20; ++i)
    {
        const auto q = integrate_motion (p, {0.0, spec.speed}, 0.1, spec, ws);
        // projection oracle: the pose stays on the clearance line y = δ/2 and keeps moving in x
        EXPECT_GE (q.position.y (), clearance - 1e-9);
        EXPECT_GE (q.position.x (), p.position.x ());
        p = q;
    }
    EXPECT_NEAR (p.position.y (), clearance, 1e-6);
    EXPECT_GT (p.position.x (), 1.1);
}

TEST (Steer, TurnsTowardBearing)
{
    const RobotSpec spec;
    const auto ahead = steer_toward (Angle (0.0), spec, 0.1);
    EXPECT_DOUBLE_EQ (ahead.turn_rate, 0.0);
    EXPECT_DOUBLE_EQ (ahead.forward, spec.speed);
    const auto behind = steer_toward (Angle (kPi), spec, 0.1);
    EXPECT_DOUBLE_EQ (behind.forward, 0.0);
    EXPECT_NE (behind.turn_rate, 0.0);
}
