#include "mat/tri_store.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace mat
{
    std::string_view to_string (TriangleKind k)
    {
        switch (k)
        {
        case TriangleKind::Expansion:
            return "expansion";
        case TriangleKind::Discovery:
            return "discovery";
        case TriangleKind::Wall:
            return "wall";
        }
        return "?";
    }

    std::map<EdgeKey, int> edge_incidence (const std::vector<TriangleRecord> &records)
    {
        std::map<EdgeKey, int> count;
        for (const auto &r : records)
            for (const auto &e : edges_of (r.key))
                if (++count[e] > 2)
                    throw StructuralError ("edge " + std::to_string (e.first) + "-" + std::to_string (e.second) +
                                           " borders more than two triangles");
        return count;
    }

    std::vector<EdgeClass> classify_edges (const std::vector<TriangleRecord> &records, const std::set<EdgeKey> &wall_edges)
    {
        std::set<TriKey> seen;
        for (const auto &r : records)
            if (!seen.insert (r.key).second)
                throw StructuralError ("duplicate triangle key");
        std::vector<EdgeClass> out;
        for (const auto &[e, n] : edge_incidence (records))
        {
            EdgeType t = EdgeType::Internal;
            if (n == 1)
                t = wall_edges.count (e) ? EdgeType::Wall : EdgeType::Frontier;
            out.push_back ({e, t});
        }
        return out;
    }

    std::set<EdgeKey> linked_edges (const std::map<RobotId, FrontierLinks> &links)
    {
        std::set<EdgeKey> out;
        for (const auto &[id, l] : links)
        {
            if (l.left)
                out.insert (make_edge (id, *l.left));
            if (l.right)
                out.insert (make_edge (id, *l.right));
        }
        return out;
    }

    std::vector<EdgeClass> classify_snapshot (const Snapshot &s)
    {
        const auto linked = linked_edges (s.links);
        std::set<EdgeKey> walls;
        for (const auto &[e, n] : edge_incidence (s.triangles))
            if (n == 1 && (!linked.count (e) || e == s.base_edge))
                walls.insert (e);
        return classify_edges (s.triangles, walls);
    }

    void update_triangle_hop (std::vector<TriangleRecord> &owned, const std::map<TriKey, std::optional<std::uint32_t>> &known_hops,
                              std::uint32_t max_hop)
    {
        for (auto &t : owned)
        {
            if (t.is_frontier)
            {
                t.hop = 0;
                continue;
            }
            std::optional<std::uint32_t> best;
            for (const auto &[k, h] : known_hops)
                if (h && adjacent (k, t.key) && (!best || *h < *best))
                    best = h;
            if (!best)
                continue;
            const std::uint64_t next = static_cast<std::uint64_t> (*best) + 1;
            t.hop = next > max_hop ? std::nullopt : std::optional<std::uint32_t> (static_cast<std::uint32_t> (next));
        }
    }

    DualGraph extract_dual_graph (const std::vector<TriangleRecord> &records)
    {
        DualGraph d;
        std::map<EdgeKey, std::vector<TriKey>> by_edge;
        for (const auto &r : records)
        {
            d.vertices.push_back (r.key);
            d.adjacency[r.key];
            for (const auto &e : edges_of (r.key))
                by_edge[e].push_back (r.key);
        }
        std::sort (d.vertices.begin (), d.vertices.end ());
        for (const auto &[e, tris] : by_edge)
        {
            if (tris.size () > 2)
                throw StructuralError ("edge borders more than two triangles");
            if (tris.size () == 2)
            {
                auto [a, b] = std::minmax (tris[0], tris[1]);
                d.edges.emplace_back (a, b);
                d.adjacency[a].push_back (b);
                d.adjacency[b].push_back (a);
            }
        }
        std::sort (d.edges.begin (), d.edges.end ());
        for (auto &[k, v] : d.adjacency)
            std::sort (v.begin (), v.end ());
        return d;
    }

    std::map<TriKey, std::uint32_t> dual_distances (const DualGraph &d, const std::vector<TriKey> &sources)
    {
        std::map<TriKey, std::uint32_t> dist;
        std::deque<TriKey> queue;
        for (const auto &s : sources)
            if (d.adjacency.count (s) && dist.emplace (s, 0).second)
                queue.push_back (s);
        while (!queue.empty ())
        {
            const TriKey t = queue.front ();
            queue.pop_front ();
            for (const auto &n : d.adjacency.at (t))
                if (dist.emplace (n, dist[t] + 1).second)
                    queue.push_back (n);
        }
        return dist;
    }

    std::vector<TriKey> check_owner_invariant (const Snapshot &s)
    {
        std::set<EdgeKey> frontier;
        for (const auto &c : classify_snapshot (s))
            if (c.type == EdgeType::Frontier)
                frontier.insert (c.edge);
        std::vector<TriKey> bad;
        for (const auto &t : s.triangles)
            for (const auto &e : edges_of (t.key))
                if (frontier.count (e) && t.owner != e.first && t.owner != e.second)
                {
                    bad.push_back (t.key);
                    break;
                }
        return bad;
    }

    std::vector<std::pair<TriKey, TriKey>> check_owner_connectivity (const Snapshot &s)
    {
        std::map<TriKey, RobotId> owner;
        for (const auto &t : s.triangles)
            owner[t.key] = t.owner;
        std::vector<std::pair<TriKey, TriKey>> bad;
        for (const auto &[a, b] : extract_dual_graph (s.triangles).edges)
        {
            const RobotId oa = owner.at (a);
            const RobotId ob = owner.at (b);
            if (oa == ob)
                continue;
            auto it = s.graph.find (oa);
            if (it == s.graph.end () || !it->second.count (ob))
                bad.emplace_back (a, b);
        }
        return bad;
    }

    std::vector<std::pair<TriKey, TriKey>> check_overlaps (const Snapshot &s, double tol)
    {
        std::vector<std::array<Point, 3>> pts;
        for (const auto &t : s.triangles)
            pts.push_back ({s.positions.at (t.key[0]), s.positions.at (t.key[1]), s.positions.at (t.key[2])});
        std::vector<std::pair<TriKey, TriKey>> bad;
        for (std::size_t i = 0; i < pts.size (); ++i)
            for (std::size_t j = i + 1; j < pts.size (); ++j)
                if (triangle_overlap_area (pts[i], pts[j]) > tol)
                    bad.emplace_back (s.triangles[i].key, s.triangles[j].key);
        return bad;
    }

    std::vector<std::string> check_frontier_chain (const Snapshot &s)
    {
        std::vector<std::string> problems;
        auto links_of = [&] (RobotId id) -> FrontierLinks {
            auto it = s.links.find (id);
            return it == s.links.end () ? FrontierLinks{} : it->second;
        };
        for (const auto &[id, l] : s.links)
        {
            const auto st = s.states.count (id) ? s.states.at (id) : FsmState::Internal;
            const bool frontier = st == FsmState::Frontier || st == FsmState::FrontierWall;
            if (!frontier && !is_mobile (st) && (l.left || l.right))
                problems.push_back ("robot " + std::to_string (id) + " holds links while " + std::string (to_string (st)));
            if (!frontier)
                continue;
            if (l.left && (*l.left == id || links_of (*l.left).right != id))
                problems.push_back ("left link of " + std::to_string (id) + " is not mirrored");
            if (l.right && (*l.right == id || links_of (*l.right).left != id))
                problems.push_back ("right link of " + std::to_string (id) + " is not mirrored");
            if (l.left && l.right && *l.left == *l.right)
                problems.push_back ("robot " + std::to_string (id) + " links the same robot twice");
        }
        return problems;
    }

} // namespace mat
