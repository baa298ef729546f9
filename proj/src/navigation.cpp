#include "mat/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace mat
{
    namespace
    {
        Point centroid (const std::array<Point, 3> &t) { return (t[0] + t[1] + t[2]) / 3.0; }

        bool free_or_boundary (const WorkspacePolygon &w, const Point &p)
        {
            return in_free_space (w, p) || distance_to_walls (w, p) < 1e-9;
        }

        bool visible (const Point &p, const Point &q, const WorkspacePolygon &w, const std::vector<Segment> &walls)
        {
            for (const auto &s : walls)
                if (segments_cross_properly (p, q, s.a, s.b))
                    return false;
            for (double f : {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875})
                if (!free_or_boundary (w, p + f * (q - p)))
                    return false;
            return true;
        }

        void add_reflex (const std::vector<Point> &ring, std::vector<Point> &out)
        {
            // free space lies to the left of every ring, so a right turn is a reflex corner
            const std::size_t n = ring.size ();
            for (std::size_t i = 0; i < n; ++i)
                if (orient (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]) < 0.0)
                    out.push_back (ring[i]);
        }
    } // namespace

    std::array<Point, 3> corners (const TriKey &k, const std::map<RobotId, Point> &positions)
    {
        return {positions.at (k[0]), positions.at (k[1]), positions.at (k[2])};
    }

    std::map<TriKey, std::uint32_t> dual_bfs (const DualGraph &d, const TriKey &goal) { return dual_distances (d, {goal}); }

    std::vector<TriKey> dual_path (const DualGraph &d, const TriKey &from, const TriKey &to)
    {
        const auto dist = dual_bfs (d, to);
        if (!dist.count (from))
            throw UnreachableError ("no dual path between the triangles");
        std::vector<TriKey> path{from};
        TriKey cur = from;
        while (cur != to)
        {
            const std::uint32_t h = dist.at (cur);
            for (const auto &n : d.adjacency.at (cur))
                if (auto it = dist.find (n); it != dist.end () && it->second + 1 == h)
                {
                    cur = n;
                    break;
                }
            path.push_back (cur);
        }
        return path;
    }

    std::optional<TriKey> locate (const Point &p, const Snapshot &s, double tol)
    {
        std::optional<TriKey> best;
        for (const auto &t : s.triangles)
        {
            const auto c = corners (t.key, s.positions);
            if (point_in_triangle (p, c[0], c[1], c[2], tol) && (!best || t.key < *best))
                best = t.key;
        }
        return best;
    }

    GreedyPath greedy_path (const Point &s, const Point &g, const Snapshot &snap, WaypointRule rule)
    {
        const auto ts = locate (s, snap, 1e-9);
        const auto tg = locate (g, snap, 1e-9);
        if (!ts || !tg)
            throw LocationError ("start or goal lies outside the triangulation");
        GreedyPath path;
        path.dual_sequence = dual_path (extract_dual_graph (snap.triangles), *ts, *tg);
        path.waypoints.push_back (s);
        for (std::size_t i = 1; i < path.dual_sequence.size (); ++i)
        {
            std::vector<Point> shared;
            for (RobotId id : path.dual_sequence[i - 1])
                if (contains (path.dual_sequence[i], id))
                    shared.push_back (snap.positions.at (id));
            Point q = 0.5 * (shared[0] + shared[1]);
            if (rule == WaypointRule::WorstCaseVertex)
            {
                const Point &prev = path.waypoints.back ();
                q = (shared[0] - prev).norm () >= (shared[1] - prev).norm () ? shared[0] : shared[1];
            }
            path.waypoints.push_back (q);
        }
        path.waypoints.push_back (g);
        for (std::size_t i = 1; i < path.waypoints.size (); ++i)
            path.length += (path.waypoints[i] - path.waypoints[i - 1]).norm ();
        return path;
    }

    double exact_shortest_path (const Point &s, const Point &g, const WorkspacePolygon &w)
    {
        if ((s - g).norm () == 0.0)
            return 0.0;
        const auto walls = wall_segments (w);
        if (visible (s, g, w, walls))
            return (s - g).norm ();

        std::vector<Point> nodes{s, g};
        add_reflex (w.outer, nodes);
        for (const auto &h : w.holes)
            add_reflex (h, nodes);

        const std::size_t n = nodes.size ();
        std::vector<double> dist (n, std::numeric_limits<double>::infinity ());
        std::vector<bool> done (n, false);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[0] = 0.0;
        queue.push ({0.0, 0});
        while (!queue.empty ())
        {
            const auto [d, i] = queue.top ();
            queue.pop ();
            if (done[i])
                continue;
            done[i] = true;
            if (i == 1)
                return d;
            for (std::size_t j = 0; j < n; ++j)
            {
                if (done[j] || !visible (nodes[i], nodes[j], w, walls))
                    continue;
                const double nd = d + (nodes[i] - nodes[j]).norm ();
                if (nd < dist[j])
                {
                    dist[j] = nd;
                    queue.push ({nd, j});
                }
            }
        }
        throw UnreachableError ("goal is not reachable inside the free space");
    }

    StretchBounds stretch_bounds (const FatnessParams &f)
    {
        if (!(f.alpha > 0.0))
            throw std::invalid_argument ("alpha must be positive");
        const double scale = f.rho / std::sin (0.5 * f.alpha);
        return {std::floor (kTwoPi / f.alpha) * scale, std::floor (3.0 * kTwoPi / f.alpha) * scale};
    }

    double shortest_edge (const Snapshot &s)
    {
        double best = std::numeric_limits<double>::infinity ();
        for (const auto &t : s.triangles)
            for (const auto &e : edges_of (t.key))
                best = std::min (best, (s.positions.at (e.first) - s.positions.at (e.second)).norm ());
        return best;
    }

    FatnessParams fatness_params (const Snapshot &s)
    {
        double lo = std::numeric_limits<double>::infinity ();
        double hi = 0.0;
        double alpha = kPi;
        for (const auto &t : s.triangles)
        {
            const auto c = corners (t.key, s.positions);
            const auto m = triangle_metrics (c[0], c[1], c[2]);
            alpha = std::min (alpha, m.min_angle);
            for (const auto &e : edges_of (t.key))
            {
                const double len = (s.positions.at (e.first) - s.positions.at (e.second)).norm ();
                lo = std::min (lo, len);
                hi = std::max (hi, len);
            }
        }
        if (s.triangles.empty ())
            return {1.0, kPi / 3.0};
        return {hi / lo, alpha};
    }

    double chord_in_triangle (const std::array<Point, 3> &tri, const Point &p, const Point &d)
    {
        std::array<Point, 3> t = tri;
        if (orient (t[0], t[1], t[2]) < 0.0)
            std::swap (t[1], t[2]);
        double lo = -std::numeric_limits<double>::infinity ();
        double hi = std::numeric_limits<double>::infinity ();
        for (int i = 0; i < 3; ++i)
        {
            const Point e = t[(i + 1) % 3] - t[i];
            const double c0 = cross (e, p - t[i]);
            const double c1 = cross (e, d);
            if (std::abs (c1) < 1e-15)
            {
                if (c0 < 0.0)
                    return 0.0;
                continue;
            }
            const double r = -c0 / c1;
            if (c1 > 0.0)
                lo = std::max (lo, r);
            else
                hi = std::min (hi, r);
        }
        return hi > lo ? (hi - lo) * d.norm () : 0.0;
    }

    double chord_in_disk (const Point &center, double radius, const Point &p, const Point &d)
    {
        const Point u = d.normalized ();
        const double h = std::abs (cross (u, center - p));
        return h >= radius ? 0.0 : 2.0 * std::sqrt (radius * radius - h * h);
    }

    bool intersection_lower_bound (const std::array<Point, 3> &tri, const Point &p, const Point &d, double r_min, double alpha)
    {
        const double threshold = r_min / (2.0 * std::sin (0.5 * alpha));
        if (chord_in_triangle (tri, p, d) >= threshold)
            return true;
        for (const auto &v : tri)
            if (chord_in_disk (v, 0.5 * r_min, p, d) >= threshold)
                return true;
        return false;
    }

    NavigationTrial simulate_navigation (const Snapshot &snap, const WorkspacePolygon &w, const TriKey &start, const TriKey &goal,
                                         const NavigationParams &p)
    {
        const auto dual = extract_dual_graph (snap.triangles);
        const auto hops = dual_bfs (dual, goal);
        if (!hops.count (start))
            throw UnreachableError ("start and goal triangles are not connected");

        NavigationTrial trial;
        trial.start = start;
        trial.goal = goal;
        trial.s = centroid (corners (start, snap.positions));
        Point x = trial.s;
        TriKey cur = start;

        auto containing = [&] (const Point &q) -> std::optional<TriKey> {
            std::optional<TriKey> best;
            auto consider = [&] (const TriKey &k) {
                const auto c = corners (k, snap.positions);
                if (!point_in_triangle (q, c[0], c[1], c[2], 1e-9))
                    return;
                if (!best || std::pair (hops.at (k), k) < std::pair (hops.at (*best), *best))
                    best = k;
            };
            consider (cur);
            for (const auto &n : dual.adjacency.at (cur))
                consider (n);
            return best;
        };

        for (std::size_t tick = 0; tick < p.max_ticks; ++tick)
        {
            if (cur == goal)
            {
                trial.reached = true;
                break;
            }
            TriKey next = cur;
            for (const auto &n : dual.adjacency.at (cur))
                if (std::pair (hops.at (n), n) < std::pair (hops.at (next), next))
                    next = n;
            std::vector<Point> shared;
            for (RobotId id : cur)
                if (contains (next, id))
                    shared.push_back (snap.positions.at (id));
            if (shared.size () != 2)
                break;
            const Angle heading = bisector (direction (x, shared[0]), direction (x, shared[1]));
            x += p.step * unit (heading);
            trial.trajectory += p.step;
            if (const auto t = containing (x); t && *t != cur)
            {
                ++trial.moves;
                if (hops.at (*t) < hops.at (cur))
                    ++trial.good_moves;
                cur = *t;
            }
        }
        trial.reached = cur == goal;
        // a trial that never arrives is measured against the goal centroid
        trial.g = trial.reached ? x : centroid (corners (goal, snap.positions));
        trial.exact = exact_shortest_path (trial.s, trial.g, w);
        trial.stretch = trial.exact > 0.0 ? trial.trajectory / trial.exact : 1.0;
        trial.greedy = greedy_path (trial.s, trial.g, snap).length;
        return trial;
    }

    std::vector<NavigationTrial> navigation_trials (const Snapshot &snap, const WorkspacePolygon &w, std::size_t trials,
                                                    std::mt19937_64 &rng, const NavigationParams &p)
    {
        std::vector<TriKey> keys;
        for (const auto &t : snap.triangles)
            keys.push_back (t.key);
        std::sort (keys.begin (), keys.end ());
        if (keys.size () < 2)
            throw std::invalid_argument ("navigation needs at least two triangles");
        std::uniform_int_distribution<std::size_t> pick (0, keys.size () - 1);
        auto disjoint = [] (const TriKey &a, const TriKey &b) {
            return !contains (b, a[0]) && !contains (b, a[1]) && !contains (b, a[2]);
        };
        std::vector<NavigationTrial> out;
        for (std::size_t i = 0; i < trials; ++i)
        {
            TriKey goal = keys[pick (rng)];
            TriKey start = keys[pick (rng)];
            for (int attempt = 0; attempt < 1000 && !disjoint (start, goal); ++attempt)
            {
                goal = keys[pick (rng)];
                start = keys[pick (rng)];
            }
            out.push_back (simulate_navigation (snap, w, start, goal, p));
        }
        return out;
    }

    Snapshot lattice_snapshot (const WorkspacePolygon &w, const Point &origin, double spacing)
    {
        if (!(spacing > 0.0))
            throw std::invalid_argument ("lattice spacing must be positive");
        double x0 = w.outer[0].x (), x1 = x0, y0 = w.outer[0].y (), y1 = y0;
        for (const auto &p : w.outer)
        {
            x0 = std::min (x0, p.x ());
            x1 = std::max (x1, p.x ());
            y0 = std::min (y0, p.y ());
            y1 = std::max (y1, p.y ());
        }
        const double h = spacing * std::sqrt (3.0) / 2.0;
        const auto j0 = static_cast<long> (std::floor ((y0 - origin.y ()) / h)) - 1;
        const auto j1 = static_cast<long> (std::ceil ((y1 - origin.y ()) / h)) + 1;
        const auto i0 = static_cast<long> (std::floor ((x0 - origin.x ()) / spacing)) - 2;
        const auto i1 = static_cast<long> (std::ceil ((x1 - origin.x ()) / spacing)) + 2;
        auto node = [&] (long i, long j) {
            return Point (origin.x () + (static_cast<double> (i) + 0.5 * static_cast<double> (j & 1)) * spacing, origin.y () + j * h);
        };
        const auto walls = wall_segments (w);
        auto inside = [&] (const std::array<Point, 3> &t) {
            for (int k = 0; k < 3; ++k)
                if (!in_free_space (w, t[k]) || !visible (t[k], t[(k + 1) % 3], w, walls))
                    return false;
            return in_free_space (w, centroid (t));
        };

        Snapshot s;
        std::map<std::pair<long, long>, RobotId> ids;
        auto id_of = [&] (long i, long j) {
            auto [it, fresh] = ids.try_emplace ({i, j}, static_cast<RobotId> (ids.size ()));
            if (fresh)
            {
                s.positions[it->second] = node (i, j);
                s.states[it->second] = FsmState::Internal;
            }
            return it->second;
        };
        for (long j = j0; j < j1; ++j)
            for (long i = i0; i < i1; ++i)
            {
                // odd rows are shifted right by half a side
                const long shift = j & 1;
                const std::array<std::array<std::pair<long, long>, 3>, 2> tris{{
                    {{{i, j}, {i + 1, j}, {i + shift, j + 1}}},
                    {{{i + 1, j}, {i + shift + 1, j + 1}, {i + shift, j + 1}}},
                }};
                for (const auto &t : tris)
                {
                    const std::array<Point, 3> c{node (t[0].first, t[0].second), node (t[1].first, t[1].second),
                                                 node (t[2].first, t[2].second)};
                    if (!inside (c))
                        continue;
                    TriangleRecord r;
                    r.key = make_key (id_of (t[0].first, t[0].second), id_of (t[1].first, t[1].second), id_of (t[2].first, t[2].second));
                    r.owner = r.key[0];
                    s.triangles.push_back (r);
                }
            }
        // the two lowest ids of the first triangle stand in for the base edge
        if (!s.triangles.empty ())
            s.base_edge = {s.triangles.front ().key[0], s.triangles.front ().key[1]};
        for (const auto &t : s.triangles)
            for (const auto &e : edges_of (t.key))
            {
                s.graph[e.first].insert (e.second);
                s.graph[e.second].insert (e.first);
            }
        return s;
    }

} // namespace mat
