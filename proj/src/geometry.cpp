#include "mat/geometry.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace mat
{
    int sector_count (double resolution)
    {
        if (!(resolution > 0.0))
            throw std::invalid_argument ("bearing resolution must be positive");
        const double n = kTwoPi / resolution;
        const double rounded = std::round (n);
        if (rounded < 1.0 || std::abs (n - rounded) > 1e-9 * std::max (1.0, n))
            throw std::invalid_argument ("bearing resolution must divide 2π into whole sectors");
        return static_cast<int> (rounded);
    }

    int sector_index (Angle exact, double resolution)
    {
        const int n = sector_count (resolution);
        const int idx = static_cast<int> (std::floor (exact.rad () / resolution));
        return std::clamp (idx, 0, n - 1);
    }

    Angle sector_center (int index, double resolution) { return Angle ((index + 0.5) * resolution); }

    Angle quantize_bearing (Angle exact, double resolution) { return sector_center (sector_index (exact, resolution), resolution); }

    InnerAngles inner_angles_from_bearings (Angle left_to_u, Angle left_to_right, Angle right_to_u, Angle right_to_left) noexcept
    {
        return {angular_diff (left_to_u, left_to_right), angular_diff (right_to_u, right_to_left)};
    }

    bool occupancy_test (std::span<const Angle> bearings, double slack)
    {
        if (bearings.size () < 3)
            throw std::invalid_argument ("occupancy test needs at least three bearings");
        std::vector<double> sorted;
        sorted.reserve (bearings.size ());
        for (Angle a : bearings)
            sorted.push_back (a.rad ());
        std::sort (sorted.begin (), sorted.end ());
        const double limit = kPi + slack;
        for (std::size_t i = 0; i + 1 < sorted.size (); ++i)
            if (sorted[i + 1] - sorted[i] > limit)
                return false;
        return kTwoPi - sorted.back () + sorted.front () <= limit;
    }

    FrontierAngle frontier_angle (std::optional<Angle> to_left, std::optional<Angle> to_right, UnexploredSweep sweep)
    {
        if (!to_left || !to_right)
            throw UndefinedNeighbor ("frontier angle needs both frontier neighbours");
        if (sweep == UnexploredSweep::CounterClockwise)
        {
            double s = ccw_sweep (*to_right, *to_left);
            if (s == 0.0)
                s = kTwoPi;
            return {s, *to_right + 0.5 * s};
        }
        double s = ccw_sweep (*to_left, *to_right);
        if (s == 0.0)
            s = kTwoPi;
        return {s, *to_right - 0.5 * s};
    }

    TriangleMetrics triangle_metrics (const Point &a, const Point &b, const Point &c)
    {
        const double area = 0.5 * std::abs (orient (a, b, c));
        if (area < kDegenerateArea)
            throw DegenerateTriangle ("triangle has (near) zero area");
        const std::array<Point, 3> v{a, b, c};
        std::array<double, 3> len{};
        std::array<double, 3> ang{};
        for (int i = 0; i < 3; ++i)
        {
            const Point &p = v[i];
            const Point &q = v[(i + 1) % 3];
            const Point &r = v[(i + 2) % 3];
            len[i] = (q - p).norm ();
            const Point e1 = q - p;
            const Point e2 = r - p;
            ang[i] = std::atan2 (std::abs (cross (e1, e2)), e1.dot (e2));
        }
        const auto [lmin, lmax] = std::minmax_element (len.begin (), len.end ());
        const auto [amin, amax] = std::minmax_element (ang.begin (), ang.end ());
        return {*amin, *amax, *lmax / *lmin, area};
    }

    bool point_in_triangle (const Point &p, const Point &a, const Point &b, const Point &c, double tol)
    {
        const double s = orient (a, b, c) >= 0.0 ? 1.0 : -1.0;
        const double d1 = s * orient (a, b, p);
        const double d2 = s * orient (b, c, p);
        const double d3 = s * orient (c, a, p);
        return d1 >= -tol && d2 >= -tol && d3 >= -tol;
    }

    double distance_to_segment (const Point &p, const Point &a, const Point &b, Point *closest)
    {
        const Point ab = b - a;
        const double len2 = ab.squaredNorm ();
        double t = len2 > 0.0 ? (p - a).dot (ab) / len2 : 0.0;
        t = std::clamp (t, 0.0, 1.0);
        const Point q = a + t * ab;
        if (closest)
            *closest = q;
        return (p - q).norm ();
    }

    double distance_to_triangle_boundary (const Point &p, const Point &a, const Point &b, const Point &c)
    {
        return std::min ({distance_to_segment (p, a, b), distance_to_segment (p, b, c), distance_to_segment (p, c, a)});
    }

    namespace
    {
        int sign (double v) { return (v > 0.0) - (v < 0.0); }

        bool on_segment (const Point &p, const Point &a, const Point &b)
        {
            return std::min (a.x (), b.x ()) <= p.x () && p.x () <= std::max (a.x (), b.x ()) && std::min (a.y (), b.y ()) <= p.y () &&
                   p.y () <= std::max (a.y (), b.y ());
        }
    } // namespace

    bool segments_intersect (const Point &p1, const Point &p2, const Point &q1, const Point &q2)
    {
        const int o1 = sign (orient (p1, p2, q1));
        const int o2 = sign (orient (p1, p2, q2));
        const int o3 = sign (orient (q1, q2, p1));
        const int o4 = sign (orient (q1, q2, p2));
        if (o1 != o2 && o3 != o4)
            return true;
        if (o1 == 0 && on_segment (q1, p1, p2))
            return true;
        if (o2 == 0 && on_segment (q2, p1, p2))
            return true;
        if (o3 == 0 && on_segment (p1, q1, q2))
            return true;
        if (o4 == 0 && on_segment (p2, q1, q2))
            return true;
        return false;
    }

    bool segments_cross_properly (const Point &p1, const Point &p2, const Point &q1, const Point &q2)
    {
        const int o1 = sign (orient (p1, p2, q1));
        const int o2 = sign (orient (p1, p2, q2));
        const int o3 = sign (orient (q1, q2, p1));
        const int o4 = sign (orient (q1, q2, p2));
        return o1 * o2 < 0 && o3 * o4 < 0;
    }

    double polygon_signed_area (std::span<const Point> ring)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < ring.size (); ++i)
            s += cross (ring[i], ring[(i + 1) % ring.size ()]);
        return 0.5 * s;
    }

    bool point_in_ring (const Point &p, std::span<const Point> ring)
    {
        bool inside = false;
        for (std::size_t i = 0, j = ring.size () - 1; i < ring.size (); j = i++)
        {
            const Point &a = ring[i];
            const Point &b = ring[j];
            if ((a.y () > p.y ()) != (b.y () > p.y ()))
            {
                const double x = a.x () + (p.y () - a.y ()) * (b.x () - a.x ()) / (b.y () - a.y ());
                if (p.x () < x)
                    inside = !inside;
            }
        }
        return inside;
    }

    double triangle_overlap_area (const std::array<Point, 3> &t1, const std::array<Point, 3> &t2)
    {
        // Sutherland-Hodgman: clip t1 by each edge of t2 (both made CCW).
        auto ccw = [] (std::array<Point, 3> t) {
            if (orient (t[0], t[1], t[2]) < 0.0)
                std::swap (t[1], t[2]);
            return t;
        };
        const auto a = ccw (t1);
        const auto b = ccw (t2);
        std::vector<Point> poly (a.begin (), a.end ());
        for (int e = 0; e < 3 && !poly.empty (); ++e)
        {
            const Point &c0 = b[e];
            const Point &c1 = b[(e + 1) % 3];
            std::vector<Point> out;
            for (std::size_t i = 0; i < poly.size (); ++i)
            {
                const Point &p = poly[i];
                const Point &q = poly[(i + 1) % poly.size ()];
                const double dp = orient (c0, c1, p);
                const double dq = orient (c0, c1, q);
                if (dp >= 0.0)
                    out.push_back (p);
                if ((dp >= 0.0) != (dq >= 0.0))
                {
                    const double t = dp / (dp - dq);
                    out.push_back (p + t * (q - p));
                }
            }
            poly = std::move (out);
        }
        if (poly.size () < 3)
            return 0.0;
        return std::abs (polygon_signed_area (poly));
    }

} // namespace mat
