#include "mat/coverage.hpp"

#include "mat/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mat
{
    std::size_t Histogram::total () const
    {
        std::size_t n = 0;
        for (auto c : counts)
            n += c;
        return n;
    }

    Histogram make_histogram (const std::vector<double> &values, double lo, double width, std::size_t bins)
    {
        Histogram h{lo, width, std::vector<std::size_t> (bins, 0)};
        for (double v : values)
        {
            const double idx = std::floor ((v - lo) / width);
            const auto i = static_cast<std::size_t> (std::clamp (idx, 0.0, static_cast<double> (bins - 1)));
            ++h.counts[i];
        }
        return h;
    }

    double area_ratio_bound (const FatnessParams &f) { return std::sqrt (3.0) * f.rho * f.rho / (2.0 * std::sin (f.alpha)); }

    double enclosed_region_area (const Snapshot &s, const WorkspacePolygon &w, double cell, double wall_touch)
    {
        if (s.triangles.empty ())
            return 0.0;
        double x0 = w.outer[0].x (), x1 = x0, y0 = w.outer[0].y (), y1 = y0;
        for (const auto &p : w.outer)
        {
            x0 = std::min (x0, p.x ());
            x1 = std::max (x1, p.x ());
            y0 = std::min (y0, p.y ());
            y1 = std::max (y1, p.y ());
        }
        const auto nx = static_cast<long> (std::ceil ((x1 - x0) / cell));
        const auto ny = static_cast<long> (std::ceil ((y1 - y0) / cell));
        enum : std::uint8_t { Wall, Open, Barrier, Flooded };
        std::vector<std::uint8_t> grid (static_cast<std::size_t> (nx * ny), Wall);
        auto at = [&] (long i, long j) -> std::uint8_t & { return grid[static_cast<std::size_t> (j * nx + i)]; };
        for (long j = 0; j < ny; ++j)
            for (long i = 0; i < nx; ++i)
                if (in_free_space (w, {x0 + (i + 0.5) * cell, y0 + (j + 0.5) * cell}))
                    at (i, j) = Open;

        auto cell_of = [&] (const Point &p) {
            return std::pair{std::clamp (static_cast<long> ((p.x () - x0) / cell), 0L, nx - 1),
                             std::clamp (static_cast<long> ((p.y () - y0) / cell), 0L, ny - 1)};
        };
        auto block = [&] (const Point &a, const Point &b) {
            const int samples = std::max (2, static_cast<int> (std::ceil ((b - a).norm () / (0.25 * cell))));
            for (int k = 0; k <= samples; ++k)
            {
                const auto [i, j] = cell_of (a + (b - a) * (static_cast<double> (k) / samples));
                if (at (i, j) == Open)
                    at (i, j) = Barrier;
            }
        };

        // the rim bounds the region except where it runs along a wall; sealed edges count as rim
        auto touches_wall = [&] (RobotId id) { return distance_to_walls (w, s.positions.at (id)) <= wall_touch; };
        for (const auto &c : classify_snapshot (s))
            if (c.type == EdgeType::Frontier || (c.type == EdgeType::Wall && !(touches_wall (c.edge.first) && touches_wall (c.edge.second))))
                block (s.positions.at (c.edge.first), s.positions.at (c.edge.second));
        const Point b0 = s.positions.at (s.base_edge.first);
        const Point b1 = s.positions.at (s.base_edge.second);
        block (b0, b1);
        auto to_wall = [&] (const Point &p) {
            Point q;
            (void) distance_to_walls (w, p, &q);
            block (p, q);
        };
        to_wall (b0);
        to_wall (b1);
        for (const auto &[id, l] : s.links)
            if (l.left.has_value () != l.right.has_value ())
                to_wall (s.positions.at (id));

        // seed inside the triangle that rests on the base edge
        std::optional<Point> seed;
        for (const auto &t : s.triangles)
            if (contains (t.key, s.base_edge.first) && contains (t.key, s.base_edge.second))
            {
                const auto c = corners (t.key, s.positions);
                seed = (c[0] + c[1] + c[2]) / 3.0;
            }
        if (!seed)
            return 0.0;
        const auto [si, sj] = cell_of (*seed);
        if (at (si, sj) != Open)
            return 0.0;
        std::deque<std::pair<long, long>> queue{{si, sj}};
        at (si, sj) = Flooded;
        std::size_t flooded = 0;
        std::size_t rim = 0;
        while (!queue.empty ())
        {
            const auto [i, j] = queue.front ();
            queue.pop_front ();
            ++flooded;
            for (auto [di, dj] : {std::pair{1L, 0L}, {-1L, 0L}, {0L, 1L}, {0L, -1L}})
            {
                const long a = i + di, b = j + dj;
                if (a < 0 || b < 0 || a >= nx || b >= ny)
                    continue;
                auto &c = at (a, b);
                if (c == Open)
                {
                    c = Flooded;
                    queue.push_back ({a, b});
                }
                else if (c == Barrier)
                {
                    // half of each barrier cell belongs to the region
                    c = Wall;
                    ++rim;
                }
            }
        }
        return (static_cast<double> (flooded) + 0.5 * static_cast<double> (rim)) * cell * cell;
    }

    CoverageReport coverage_metrics (const Snapshot &s, const WorkspacePolygon &w, double cell)
    {
        CoverageReport r;
        std::vector<double> areas, angles, ratios;
        for (const auto &t : s.triangles)
        {
            const auto c = corners (t.key, s.positions);
            TriangleRow row{t.key, t.kind, triangle_metrics (c[0], c[1], c[2])};
            r.covered_area += row.metrics.area;
            areas.push_back (row.metrics.area);
            angles.push_back (row.metrics.min_angle);
            ratios.push_back (row.metrics.edge_ratio);
            r.rows.push_back (row);
        }
        r.region_area = enclosed_region_area (s, w, cell);
        r.coverage_fraction = r.region_area > 0.0 ? r.covered_area / r.region_area : 0.0;
        r.fatness = fatness_params (s);
        r.area_ratio_bound = area_ratio_bound (r.fatness);
        if (!areas.empty ())
            r.observed_area_ratio = *std::max_element (areas.begin (), areas.end ()) / *std::min_element (areas.begin (), areas.end ());
        r.area_hist = make_histogram (areas, 0.0, 0.02, 30);
        r.angle_hist = make_histogram (angles, 0.0, kPi / 48.0, 16);
        r.ratio_hist = make_histogram (ratios, 1.0, 0.25, 16);
        return r;
    }

} // namespace mat
