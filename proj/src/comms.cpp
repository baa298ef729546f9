#include "mat/comms.hpp"

#include <algorithm>

namespace mat
{
    const NeighborEntry *NeighborView::find (RobotId id) const
    {
        auto it = std::lower_bound (neighbors.begin (), neighbors.end (), id, [] (const NeighborEntry &e, RobotId v) { return e.id < v; });
        return (it != neighbors.end () && it->id == id) ? &*it : nullptr;
    }

    bool NeighborGraph::connected (RobotId a, RobotId b) const
    {
        auto it = adjacency.find (a);
        return it != adjacency.end () && it->second.count (b) > 0;
    }

    NeighborGraph build_neighbor_graph (const std::vector<RobotPose> &poses, const RobotSpec &spec, const WorkspacePolygon &w)
    {
        NeighborGraph g;
        const double res = spec.bearing_resolution;
        std::vector<RobotPose> sorted = poses;
        std::sort (sorted.begin (), sorted.end (), [] (const RobotPose &a, const RobotPose &b) { return a.id < b.id; });
        for (const auto &p : sorted)
        {
            g.adjacency[p.id];
            g.views[p.id].self = p.id;
        }
        for (std::size_t i = 0; i < sorted.size (); ++i)
            for (std::size_t j = i + 1; j < sorted.size (); ++j)
            {
                const Point &a = sorted[i].pose.position;
                const Point &b = sorted[j].pose.position;
                if ((a - b).norm () > spec.r_max || !line_of_sight (a, b, w))
                    continue;
                g.adjacency[sorted[i].id].insert (sorted[j].id);
                g.adjacency[sorted[j].id].insert (sorted[i].id);
            }
        std::map<RobotId, const Pose *> pose_of;
        for (const auto &p : sorted)
            pose_of[p.id] = &p.pose;
        auto bearing = [&] (RobotId from, RobotId to) {
            const Pose &pf = *pose_of.at (from);
            const Angle exact (direction (pf.position, pose_of.at (to)->position).rad () - pf.heading);
            return sector_index (exact, res);
        };
        for (const auto &[u, nbrs] : g.adjacency)
        {
            auto &view = g.views[u];
            for (RobotId v : nbrs)
            {
                NeighborEntry e;
                e.id = v;
                e.sector = static_cast<std::uint32_t> (bearing (u, v));
                e.bearing = sector_center (static_cast<int> (e.sector), res);
                const Angle back = sector_center (bearing (v, u), res);
                e.orientation = Angle (back.rad () + kPi - e.bearing.rad ());
                view.neighbors.push_back (e);
            }
        }
        return g;
    }

    const RoundMessage *find_message (const Inbox &inbox, RobotId sender)
    {
        for (const auto &m : inbox)
            if (m.sender == sender)
                return &m;
        return nullptr;
    }

    std::optional<InnerAngles> inner_angles_for (RobotId u, RobotId l, RobotId r, const Inbox &inbox, double resolution)
    {
        const RoundMessage *ml = find_message (inbox, l);
        const RoundMessage *mr = find_message (inbox, r);
        if (!ml || !mr)
            return std::nullopt;
        const NeighborAngle *lu = ml->angle_to (u);
        const NeighborAngle *lr = ml->angle_to (r);
        const NeighborAngle *ru = mr->angle_to (u);
        const NeighborAngle *rl = mr->angle_to (l);
        if (!lu || !lr || !ru || !rl)
            return std::nullopt;
        auto c = [resolution] (const NeighborAngle *e) { return sector_center (static_cast<int> (e->sector), resolution); };
        return inner_angles_from_bearings (c (lu), c (lr), c (ru), c (rl));
    }

    std::map<EdgeKey, InnerAngles> two_hop_angles (const NeighborView &u, const Inbox &inbox, double resolution)
    {
        std::map<EdgeKey, InnerAngles> out;
        for (std::size_t i = 0; i < u.neighbors.size (); ++i)
            for (std::size_t j = i + 1; j < u.neighbors.size (); ++j)
            {
                const RobotId l = u.neighbors[i].id;
                const RobotId r = u.neighbors[j].id;
                if (auto a = inner_angles_for (u.self, l, r, inbox, resolution))
                    out.emplace (EdgeKey{l, r}, *a);
            }
        return out;
    }

} // namespace mat
