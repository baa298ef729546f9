#include "mat/coverage.hpp"
#include "mat/navigation.hpp"
#include "mat/simulation.hpp"

#include <gtest/gtest.h>

using namespace mat;

namespace
{
    // one equilateral triangle standing on the bottom wall, both upper sides open
    Snapshot lone_triangle (WorkspacePolygon &ws)
    {
        ws.outer = {{0, 0}, {3, 0}, {3, 2}, {0, 2}};
        Snapshot s;
        s.positions = {{0, Point (1, 0)}, {1, Point (2, 0)}, {2, Point (1.5, std::sqrt (3.0) / 2.0)}};
        s.triangles.push_back ({make_key (0, 1, 2), 2, 0u, std::nullopt, true, TriangleKind::Expansion, 0});
        s.base_edge = {0, 1};
        s.links = {{0, {std::nullopt, 2}}, {2, {0, 1}}, {1, {2, std::nullopt}}};
        s.states = {{0, FsmState::Frontier}, {1, FsmState::Frontier}, {2, FsmState::Frontier}};
        return s;
    }
} // namespace

TEST (Histogram, BinsAndTotals)
{
    const auto h = make_histogram ({0.05, 0.15, 0.15, 9.0, -1.0}, 0.0, 0.1, 4);
    EXPECT_EQ (h.counts, (std::vector<std::size_t>{2, 2, 0, 1}));
    EXPECT_EQ (h.total (), 5u);
}

TEST (Coverage, SingleEquilateralRegion)
{
    WorkspacePolygon ws;
    const auto s = lone_triangle (ws);
    const auto r = coverage_metrics (s, ws);
    EXPECT_NEAR (r.covered_area, std::sqrt (3.0) / 4.0, 1e-12);
    EXPECT_NEAR (r.coverage_fraction, 1.0, 0.03);
    EXPECT_NEAR (r.area_ratio_bound, 1.0, 1e-12);
    EXPECT_NEAR (r.observed_area_ratio, 1.0, 1e-12);
}

TEST (Coverage, SingleTriangleFillsOneBin)
{
    WorkspacePolygon ws;
    const auto r = coverage_metrics (lone_triangle (ws), ws);
    std::size_t nonzero = 0;
    for (auto c : r.area_hist.counts)
        nonzero += c > 0;
    EXPECT_EQ (nonzero, 1u);
    EXPECT_EQ (r.area_hist.total (), 1u);
    EXPECT_EQ (r.angle_hist.total (), 1u);
    EXPECT_EQ (r.ratio_hist.total (), 1u);
}

TEST (Coverage, AreaBoundReadsAsParenthesisedDenominator)
{
    EXPECT_NEAR (area_ratio_bound ({2.0, kPi / 6.0}), std::sqrt (3.0) * 4.0 / (2.0 * 0.5), 1e-12);
}

TEST (Coverage, LatticeIsFullyCovered)
{
    WorkspacePolygon ws;
    ws.outer = {{0, 0}, {3, 0}, {3, 2.5}, {0, 2.5}};
    const auto s = lattice_snapshot (ws, {0.05, 0.05}, 0.4);
    const auto r = coverage_metrics (s, ws);
    EXPECT_NEAR (r.fatness.rho, 1.0, 1e-9);
    EXPECT_LE (r.observed_area_ratio, r.area_ratio_bound + 1e-9);
}

TEST (Coverage, RunStaysWithinAreaBound)
{
    for (const auto &sc : {rectangle_scenario (12, 42), l_room_scenario (12, 2)})
    {
        Simulation sim (sc);
        const auto res = sim.run ();
        const auto r = coverage_metrics (res.final_snapshot, sc.workspace);
        EXPECT_EQ (r.area_hist.total (), res.final_snapshot.triangles.size ());
        EXPECT_LE (r.observed_area_ratio, r.area_ratio_bound) << sc.name;
        EXPECT_GT (r.coverage_fraction, 0.0);
        EXPECT_LE (r.coverage_fraction, 1.05) << sc.name;
        EXPECT_LE (r.covered_area, free_area (sc.workspace));
    }
}
