#pragma once
/**
 * @file   coverage.hpp
 * @brief  Covered area, enclosed-region estimate and per-triangle quality histograms.
 */

#include "mat/tri_store.hpp"
#include "mat/workspace.hpp"

#include <vector>

namespace mat
{
    struct Histogram
    {
        double lo = 0.0;
        double width = 1.0;
        std::vector<std::size_t> counts;

        [[nodiscard]] std::size_t total () const;
    };

    /// Fixed-width bins starting at `lo`; values past the end land in the last bin.
    [[nodiscard]] Histogram make_histogram (const std::vector<double> &values, double lo, double width, std::size_t bins);

    struct TriangleRow
    {
        TriKey key{};
        TriangleKind kind = TriangleKind::Expansion;
        TriangleMetrics metrics;
    };

    struct CoverageReport
    {
        double covered_area = 0.0;
        double region_area = 0.0;
        double coverage_fraction = 0.0;
        FatnessParams fatness;
        double area_ratio_bound = 0.0;
        double observed_area_ratio = 0.0; ///< largest / smallest triangle area
        std::vector<TriangleRow> rows;
        Histogram area_hist;
        Histogram angle_hist;
        Histogram ratio_hist;
    };

    /// √3ρ² / (2 sin α).
    [[nodiscard]] double area_ratio_bound (const FatnessParams &f);

    /// Area enclosed by the walls, the base edge and the rim of the triangulation,
    /// estimated by a flood fill on a square grid started inside the base triangle.
    /// Rim edges whose endpoints both lie within `wall_touch` of a wall are wall
    /// edges and let the fill through to the wall.
    [[nodiscard]] double enclosed_region_area (const Snapshot &s, const WorkspacePolygon &w, double cell = 0.01,
                                               double wall_touch = 0.1);

    [[nodiscard]] CoverageReport coverage_metrics (const Snapshot &s, const WorkspacePolygon &w, double cell = 0.01);

} // namespace mat
