#include "mat/workspace.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace mat
{
    namespace
    {
        bool ring_is_simple (std::span<const Point> ring)
        {
            const std::size_t n = ring.size ();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                {
                    if (j == i + 1 || (i == 0 && j == n - 1))
                        continue;
                    if (segments_intersect (ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]))
                        return false;
                }
            return true;
        }
    } // namespace

    void validate (const WorkspacePolygon &w, const RobotSpec &spec)
    {
        if (w.outer.size () < 3)
            throw std::invalid_argument ("outer boundary needs at least 3 vertices");
        if (polygon_signed_area (w.outer) <= 0.0)
            throw std::invalid_argument ("outer boundary must be counterclockwise");
        if (!ring_is_simple (w.outer))
            throw std::invalid_argument ("outer boundary is self-intersecting");
        for (std::size_t h = 0; h < w.holes.size (); ++h)
        {
            const auto &hole = w.holes[h];
            if (hole.size () < 3)
                throw std::invalid_argument ("hole " + std::to_string (h) + " needs at least 3 vertices");
            if (polygon_signed_area (hole) >= 0.0)
                throw std::invalid_argument ("hole " + std::to_string (h) + " must be clockwise");
            if (!ring_is_simple (hole))
                throw std::invalid_argument ("hole " + std::to_string (h) + " is self-intersecting");
            for (const Point &p : hole)
                if (!point_in_ring (p, w.outer))
                    throw std::invalid_argument ("hole " + std::to_string (h) + " is not strictly inside the outer boundary");
            for (std::size_t i = 0; i < hole.size (); ++i)
                for (std::size_t j = 0; j < w.outer.size (); ++j)
                    if (segments_intersect (hole[i], hole[(i + 1) % hole.size ()], w.outer[j], w.outer[(j + 1) % w.outer.size ()]))
                        throw std::invalid_argument ("hole " + std::to_string (h) + " touches the outer boundary");
            for (std::size_t g = h + 1; g < w.holes.size (); ++g)
            {
                const auto &other = w.holes[g];
                bool overlap = point_in_ring (hole[0], other) || point_in_ring (other[0], hole);
                for (std::size_t i = 0; i < hole.size () && !overlap; ++i)
                    for (std::size_t j = 0; j < other.size () && !overlap; ++j)
                        overlap = segments_intersect (hole[i], hole[(i + 1) % hole.size ()], other[j], other[(j + 1) % other.size ()]);
                if (overlap)
                    throw std::invalid_argument ("holes " + std::to_string (h) + " and " + std::to_string (g) + " overlap");
            }
        }
        if (!(spec.diameter > 0.0) || !(spec.r_max > 0.0) || !(spec.speed > 0.0) || !(spec.wall_sense_range >= 0.0))
            throw std::invalid_argument ("robot spec values must be positive");
        (void)sector_count (spec.bearing_resolution);
        for (const Point &p : w.base_edge)
            if (!in_free_space (w, p))
                throw std::invalid_argument ("base edge endpoint outside free space");
        const double len = (w.base_edge[1] - w.base_edge[0]).norm ();
        if (len > spec.r_max)
            throw std::invalid_argument ("base edge longer than r_max");
        if (len < 2.0 * spec.diameter)
            throw std::invalid_argument ("base edge shorter than 2 diameters");
    }

    std::vector<Segment> wall_segments (const WorkspacePolygon &w)
    {
        std::vector<Segment> out;
        auto add = [&out] (const std::vector<Point> &ring) {
            for (std::size_t i = 0; i < ring.size (); ++i)
                out.push_back ({ring[i], ring[(i + 1) % ring.size ()]});
        };
        add (w.outer);
        for (const auto &h : w.holes)
            add (h);
        return out;
    }

    bool in_free_space (const WorkspacePolygon &w, const Point &p)
    {
        if (!point_in_ring (p, w.outer))
            return false;
        return std::none_of (w.holes.begin (), w.holes.end (), [&p] (const auto &h) { return point_in_ring (p, h); });
    }

    double free_area (const WorkspacePolygon &w)
    {
        double a = std::abs (polygon_signed_area (w.outer));
        for (const auto &h : w.holes)
            a -= std::abs (polygon_signed_area (h));
        return a;
    }

    double distance_to_walls (const WorkspacePolygon &w, const Point &p, Point *closest)
    {
        double best = std::numeric_limits<double>::infinity ();
        auto scan = [&] (const std::vector<Point> &ring) {
            for (std::size_t i = 0; i < ring.size (); ++i)
            {
                Point q;
                const double d = distance_to_segment (p, ring[i], ring[(i + 1) % ring.size ()], &q);
                if (d < best)
                {
                    best = d;
                    if (closest)
                        *closest = q;
                }
            }
        };
        scan (w.outer);
        for (const auto &h : w.holes)
            scan (h);
        return best;
    }

    bool line_of_sight (const Point &p, const Point &q, const WorkspacePolygon &w)
    {
        auto blocked = [&] (const std::vector<Point> &ring) {
            for (std::size_t i = 0; i < ring.size (); ++i)
                if (segments_intersect (p, q, ring[i], ring[(i + 1) % ring.size ()]))
                    return true;
            return false;
        };
        if (blocked (w.outer))
            return false;
        return std::none_of (w.holes.begin (), w.holes.end (), blocked);
    }

    WallSense sense_walls (const Pose &pose, const RobotSpec &spec, const WorkspacePolygon &w)
    {
        Point foot;
        const double d = distance_to_walls (w, pose.position, &foot);
        WallSense s;
        s.contact = d <= 0.5 * spec.diameter + kContactEpsilon;
        s.near_wall = d <= spec.wall_sense_range;
        if (s.near_wall && d > 0.0)
            s.wall_bearing = Angle (direction (pose.position, foot).rad () - pose.heading);
        return s;
    }

    Pose integrate_motion (const Pose &pose, const MotionCommand &cmd, double dt, const RobotSpec &spec, const WorkspacePolygon &w)
    {
        Pose out = pose;
        out.heading = wrap_two_pi (pose.heading + cmd.turn_rate * dt);
        const double forward = std::clamp (cmd.forward, -spec.speed, spec.speed);
        const double distance = forward * dt;
        if (distance == 0.0)
            return out;

        const double clearance = 0.5 * spec.diameter;
        const int steps = std::max (1, static_cast<int> (std::ceil (std::abs (distance) / (0.25 * clearance))));
        const Point step = (distance / steps) * unit (Angle (out.heading));
        Point p = pose.position;
        for (int s = 0; s < steps; ++s)
        {
            Point q = p + step;
            for (int iter = 0; iter < 8; ++iter)
            {
                Point foot;
                const double d = distance_to_walls (w, q, &foot);
                if (d >= clearance - 1e-12)
                    break;
                const Point away = d > 0.0 ? Point ((q - foot) / d) : Point ((p - q).normalized ());
                q = foot + clearance * away;
            }
            if (distance_to_walls (w, q) < clearance - 1e-9 || !in_free_space (w, q) || !line_of_sight (p, q, w))
                break;
            p = q;
        }
        out.position = p;
        return out;
    }

    MotionCommand steer_toward (Angle bearing, const RobotSpec &spec, double dt, double speed_scale)
    {
        const double err = wrap_signed (bearing.rad ());
        const double max_turn = spec.max_turn_rate * dt;
        const double turn = std::clamp (err, -max_turn, max_turn);
        const double residual = std::abs (err - turn);
        MotionCommand cmd;
        cmd.turn_rate = turn / dt;
        cmd.forward = residual < kPi / 4.0 ? spec.speed * std::clamp (speed_scale, 0.0, 1.0) * std::cos (residual) : 0.0;
        return cmd;
    }

    Point base_normal (const WorkspacePolygon &w)
    {
        const Point d = (w.base_edge[1] - w.base_edge[0]).normalized ();
        return {-d.y (), d.x ()};
    }

} // namespace mat
