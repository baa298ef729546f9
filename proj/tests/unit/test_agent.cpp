#include "mat/agent.hpp"
#include "mat/simulation.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mat;

namespace
{
    struct Layout
    {
        std::map<RobotId, Point> at;
        std::map<RobotId, FrontierLinks> links;
    };

    struct Built
    {
        AgentState u;
        SensorView view;
        Inbox inbox;
    };

    // every other robot is a frontier robot announcing its links and sensed sectors
    Built build (const Layout &l, RobotId u, RobotId left, RobotId right, std::uint64_t seed = 1)
    {
        std::mt19937_64 rng (seed);
        std::uniform_real_distribution<double> h (0.0, kTwoPi);
        std::vector<RobotPose> poses;
        for (const auto &[id, p] : l.at)
            poses.push_back ({id, {p, h (rng)}});
        WorkspacePolygon open;
        open.outer = {{-5, -5}, {5, -5}, {5, 5}, {-5, 5}};
        const auto g = build_neighbor_graph (poses, RobotSpec{}, open);
        Built b;
        b.u.id = u;
        b.u.fsm = FsmState::ExpandTriangle;
        b.u.left = left;
        b.u.right = right;
        TriangleRecord own;
        own.key = make_key (u, left, right);
        own.owner = u;
        b.u.owned.push_back (own);
        b.view.round = 100;
        b.view.neighbors = g.views.at (u);
        for (const auto &e : b.view.neighbors.neighbors)
        {
            RoundMessage m;
            m.sender = e.id;
            m.state = FsmState::Frontier;
            if (l.links.count (e.id))
            {
                m.left_fnbr = l.links.at (e.id).left;
                m.right_fnbr = l.links.at (e.id).right;
            }
            for (const auto &n : g.views.at (e.id).neighbors)
                m.neighbor_angle_table.push_back ({n.id, n.sector});
            b.inbox.push_back (m);
        }
        return b;
    }

    Point polar (double r, double deg) { return {r * std::cos (deg * kPi / 180.0), r * std::sin (deg * kPi / 180.0)}; }
} // namespace

TEST (Controller, ArrivesAtGoal)
{
    const auto c = expansion_controller ({kPi / 3.0, kPi / 3.0}, Angle (0.0), Angle (1.0), kPi / 16.0);
    EXPECT_TRUE (c.arrived);
    EXPECT_FALSE (c.heading.has_value ());
}

TEST (Controller, LargerLeftAngleMovesAwayFromLeft)
{
    const Angle bl (2.0), br (0.5);
    const auto c = expansion_controller ({0.2, 0.1}, bl, br, kPi / 16.0);
    EXPECT_FALSE (c.arrived);
    ASSERT_TRUE (c.heading.has_value ());
    EXPECT_NEAR (angular_diff (*c.heading, bl + kPi), 0.0, 1e-12);
}

TEST (Controller, ConvergesFromTheUnexploredSide)
{
    const Point L (0, 0), R (1, 0);
    const double tol = kPi / 16.0;
    std::mt19937_64 rng (6);
    std::uniform_real_distribution<double> ux (-0.5, 1.5), uy (0.05, 1.5);
    for (int trial = 0; trial < 100; ++trial)
    {
        Point u (ux (rng), uy (rng));
        bool arrived = false;
        for (int tick = 0; tick < 2000 && !arrived; ++tick)
        {
            const double tl = std::atan2 (std::abs (cross (R - L, u - L)), (R - L).dot (u - L));
            const double tr = std::atan2 (std::abs (cross (L - R, u - R)), (L - R).dot (u - R));
            const auto c = expansion_controller ({tl, tr}, direction (u, L), direction (u, R), tol);
            arrived = c.arrived;
            if (c.heading)
                u += 0.01 * unit (*c.heading);
            ASSERT_GT (u.y (), 0.0) << "re-crossed the frontier edge in trial " << trial;
        }
        EXPECT_TRUE (arrived) << "trial " << trial;
    }
}

TEST (Discovery, NothingToDiscover)
{
    Layout l;
    l.at = {{0, Point (0, 0)}, {1, Point (0.5, 0)}, {5, Point (0.25, 0.43)}};
    l.links = {{0, {std::nullopt, 1}}, {1, {0, std::nullopt}}};
    const auto b = build (l, 5, 0, 1);
    const auto d = discover_triangles (b.u, b.view, b.inbox, AgentParams{});
    EXPECT_TRUE (d.triangles.empty ());
    EXPECT_TRUE (d.disconnects.empty ());
    EXPECT_EQ (d.new_left, 0u);
    EXPECT_EQ (d.new_right, 1u);
    const std::vector<FrontierUpdate> expected{{0, 1, 5u}, {1, 0, 5u}};
    EXPECT_EQ (d.updates, expected);
}

TEST (Discovery, StopsAtFirstPoorCandidate)
{
    Layout l;
    // convex at 0 (wedge about 30°), reflex at 2 (wedge about 186°)
    l.at = {{0, Point (0, 0)}, {1, Point (0.5, 0)}, {2, Point (0, 0.5)}, {3, Point (-0.3, 0.55)}, {5, Point (0.25, 0.43)}};
    l.links = {{3, {std::nullopt, 2}}, {2, {3, 0}}, {0, {2, 1}}, {1, {0, std::nullopt}}};
    const auto b = build (l, 5, 0, 1);
    const auto d = discover_triangles (b.u, b.view, b.inbox, AgentParams{});
    ASSERT_EQ (d.triangles.size (), 1u);
    EXPECT_EQ (d.triangles[0].key, make_key (5, 2, 0));
    EXPECT_EQ (d.triangles[0].kind, TriangleKind::Discovery);
    EXPECT_EQ (d.triangles[0].owner, 5u);
    EXPECT_EQ (d.new_left, 2u);
    EXPECT_EQ (d.disconnects, (std::vector<RobotId>{0}));
    EXPECT_NE (std::find (d.updates.begin (), d.updates.end (), FrontierUpdate{2, 0, 5u}), d.updates.end ());
}

TEST (Discovery, ConvexChainOfThree)
{
    // frontier bends around u in 60° steps, so every candidate is equilateral
    Layout l;
    l.at = {{5, Point (0, 0)},         {1, polar (0.5, 60)},   {0, polar (0.5, 0)},
            {2, polar (0.5, -60)},     {3, polar (0.5, -120)}, {4, polar (0.5, 180)}};
    l.links = {{4, {std::nullopt, 3}}, {3, {4, 2}}, {2, {3, 0}}, {0, {2, 1}}, {1, {0, std::nullopt}}};
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto b = build (l, 5, 0, 1, seed);
        const auto d = discover_triangles (b.u, b.view, b.inbox, AgentParams{});
        ASSERT_EQ (d.triangles.size (), 3u);
        EXPECT_EQ (d.triangles[0].key, make_key (5, 2, 0));
        EXPECT_EQ (d.triangles[1].key, make_key (5, 3, 2));
        EXPECT_EQ (d.triangles[2].key, make_key (5, 4, 3));
        EXPECT_EQ (d.new_left, 4u);
        EXPECT_EQ (d.new_right, 1u);
        EXPECT_EQ (d.disconnects, (std::vector<RobotId>{0, 2, 3}));
    }
}

TEST (Discovery, RespectsOwnedCap)
{
    Layout l;
    l.at = {{5, Point (0, 0)},         {1, polar (0.5, 60)},   {0, polar (0.5, 0)},
            {2, polar (0.5, -60)},     {3, polar (0.5, -120)}, {4, polar (0.5, 180)}};
    l.links = {{4, {std::nullopt, 3}}, {3, {4, 2}}, {2, {3, 0}}, {0, {2, 1}}, {1, {0, std::nullopt}}};
    AgentParams p;
    p.max_owned = 2;
    const auto b = build (l, 5, 0, 1);
    const auto d = discover_triangles (b.u, b.view, b.inbox, p);
    EXPECT_EQ (d.triangles.size (), 1u);
}

TEST (Discovery, UnwalkedSideKeepsItsLink)
{
    Layout l;
    l.at = {{5, Point (0, 0)}, {1, polar (0.5, 60)}, {0, polar (0.5, 0)}, {2, polar (0.5, -60)}};
    l.links = {{2, {std::nullopt, 0}}, {0, {2, 1}}, {1, {0, std::nullopt}}};
    const auto b = build (l, 5, 0, 1);
    const auto d = discover_triangles (b.u, b.view, b.inbox, AgentParams{}, false, true);
    EXPECT_TRUE (d.triangles.empty ());
    EXPECT_EQ (d.new_left, 0u);
    EXPECT_EQ (d.updates.size (), 1u);
}

TEST (Fsm, TransitionTable)
{
    using S = FsmState;
    EXPECT_TRUE (legal_transition (S::NavInternal, S::ExpandTriangle));
    EXPECT_TRUE (legal_transition (S::ExpandTriangle, S::Frontier));
    EXPECT_TRUE (legal_transition (S::ExpandTriangle, S::WallFollow));
    EXPECT_TRUE (legal_transition (S::WallFollow, S::FrontierWall));
    EXPECT_TRUE (legal_transition (S::Frontier, S::Internal));
    EXPECT_TRUE (legal_transition (S::FrontierWall, S::Internal));
    EXPECT_TRUE (legal_transition (S::ExpandTriangle, S::NavInternal));
    EXPECT_TRUE (legal_transition (S::WallFollow, S::NavInternal));
    EXPECT_FALSE (legal_transition (S::NavInternal, S::Frontier));
    EXPECT_FALSE (legal_transition (S::Frontier, S::NavInternal));
    EXPECT_FALSE (legal_transition (S::Internal, S::Frontier));
    EXPECT_FALSE (legal_transition (S::Internal, S::NavInternal));
}

TEST (Run, FirstNavigatorExpandsTheBaseEdge)
{
    const auto sc = rectangle_scenario (8, 42);
    Simulation sim (sc);
    std::optional<std::pair<RobotId, RobotId>> first;
    while (!first && sim.step ())
        for (const auto &r : sim.world ().robots)
            if (r.id == 2 && r.state.fsm == FsmState::ExpandTriangle)
                first = std::pair{*r.state.left, *r.state.right};
    ASSERT_TRUE (first.has_value ());
    EXPECT_EQ (make_edge (first->first, first->second), make_edge (0, 1));
}

TEST (Run, EveryObservedTransitionIsLegal)
{
    for (const auto &sc : {rectangle_scenario (12, 7), hole_room_scenario (12, 8)})
    {
        Simulation sim (sc);
        std::map<RobotId, FsmState> last;
        std::size_t transitions = 0;
        sim.run ([&] (const WorldT &w) {
            for (const auto &r : w.robots)
            {
                if (auto it = last.find (r.id); it != last.end () && it->second != r.state.fsm)
                {
                    ++transitions;
                    EXPECT_TRUE (legal_transition (it->second, r.state.fsm)) << to_string (it->second) << " -> " << to_string (r.state.fsm);
                }
                last[r.id] = r.state.fsm;
            }
        });
        EXPECT_GT (transitions, 0u);
    }
}

TEST (Run, FinalStructureIsConsistent)
{
    Simulation sim (l_room_scenario (12, 5));
    const auto res = sim.run ();
    ASSERT_TRUE (res.violations.empty ()) << res.violations.front ();
    const auto &s = res.final_snapshot;
    std::set<EdgeKey> frontier;
    for (const auto &c : classify_snapshot (s))
        if (c.type == EdgeType::Frontier)
            frontier.insert (c.edge);
    // the frontier flag is set exactly on triangles that still have a frontier edge
    for (const auto &t : s.triangles)
    {
        bool has = false;
        for (const auto &e : edges_of (t.key))
            has = has || frontier.count (e);
        EXPECT_EQ (t.is_frontier, has);
    }
    for (const auto &[id, st] : s.states)
        if (st == FsmState::Internal)
        {
            const auto it = s.links.find (id);
            EXPECT_TRUE (it == s.links.end () || (!it->second.left && !it->second.right));
        }
}
