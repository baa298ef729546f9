#include "mat/agent.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <limits>
#include <tuple>

namespace mat
{
    namespace
    {
        struct KnownTriangle
        {
            TriKey key{};
            RobotId owner = 0;
            std::optional<std::uint32_t> hop;
            std::optional<std::uint8_t> descent;
        };

        std::uint64_t hop_rank (const std::optional<std::uint32_t> &h)
        {
            return h ? *h : std::numeric_limits<std::uint64_t>::max ();
        }

        bool better (const KnownTriangle &a, const KnownTriangle &b)
        {
            return std::tuple (hop_rank (a.hop), a.owner, a.key) < std::tuple (hop_rank (b.hop), b.owner, b.key);
        }

        /// θ_F from quantized bearings. Both neighbours in one sector means a wedge narrower
        /// than a sector, not a full turn.
        double sensed_frontier_angle (Angle to_left, Angle to_right)
        {
            if (to_left.rad () == to_right.rad ())
                return 0.0;
            return frontier_angle (to_left, to_right).theta_f;
        }

        bool is_frontier_state (FsmState s) { return s == FsmState::Frontier || s == FsmState::FrontierWall; }

        /// Frontier links of `id` as seen by `self`: own state or last broadcast.
        FrontierLinks links_of (RobotId id, const AgentState &self, const Inbox &inbox)
        {
            if (id == self.id)
                return is_frontier_state (self.fsm) ? FrontierLinks{self.left, self.right} : FrontierLinks{};
            const RoundMessage *m = find_message (inbox, id);
            if (!m || !is_frontier_state (m->state))
                return {};
            return {m->left_fnbr, m->right_fnbr};
        }

        bool linked (RobotId a, RobotId b, const AgentState &self, const Inbox &inbox)
        {
            const auto la = links_of (a, self, inbox);
            const auto lb = links_of (b, self, inbox);
            return la.left == b || la.right == b || lb.left == a || lb.right == a;
        }

        std::vector<KnownTriangle> known_triangles (const AgentState &self, const Inbox &inbox)
        {
            std::vector<KnownTriangle> out;
            for (const auto &t : self.owned)
                out.push_back ({t.key, self.id, t.hop, t.descent});
            for (const auto &m : inbox)
                for (const auto &th : m.triangle_hop_table)
                    out.push_back ({th.key, m.sender, th.hop, th.descent});
            return out;
        }

        bool shared_elsewhere (const EdgeKey &e, const TriKey &tri, const std::vector<KnownTriangle> &known)
        {
            for (const auto &k : known)
                if (k.key != tri && contains (k.key, e.first) && contains (k.key, e.second))
                    return true;
            return false;
        }

        std::vector<EdgeKey> frontier_edges (const TriKey &tri, const AgentState &self, const Inbox &inbox,
                                             const std::vector<KnownTriangle> &known, const AgentParams &p)
        {
            const EdgeKey base = make_edge (p.base_ids[0], p.base_ids[1]);
            std::vector<EdgeKey> out;
            for (const auto &e : edges_of (tri))
                if (e != base && linked (e.first, e.second, self, inbox) && !shared_elsewhere (e, tri, known))
                    out.push_back (e);
            return out;
        }

        std::optional<Angle> bearing_to (const SensorView &view, RobotId id)
        {
            if (const auto *e = view.neighbors.find (id))
                return e->bearing;
            return std::nullopt;
        }

        Angle sector_angle (const NeighborAngle &a, double res) { return sector_center (static_cast<int> (a.sector), res); }

        /// Order (a, b) so that walking L → R keeps unexplored space on the left.
        std::optional<std::pair<RobotId, RobotId>> orient_edge (RobotId a, RobotId b, const AgentState &self, const Inbox &inbox)
        {
            const auto la = links_of (a, self, inbox);
            const auto lb = links_of (b, self, inbox);
            if (la.right == b || lb.left == a)
                return std::pair{a, b};
            if (lb.right == a || la.left == b)
                return std::pair{b, a};
            return std::nullopt;
        }

        StepResult<AgentState> finish (AgentState next, const AgentState &prev, const SensorView &view, const Inbox &inbox,
                                       const AgentParams &p, MotionCommand motion, std::vector<FrontierUpdate> updates = {},
                                       std::vector<RobotId> disconnects = {})
        {
            if (next.fsm != prev.fsm)
                next.state_since = view.round;
            StepResult<AgentState> r{std::move (next), {}, motion};
            r.message = build_message (r.state, view, inbox, p);
            r.message.frontier_payload = std::move (updates);
            r.message.disconnect_payload = std::move (disconnects);
            return r;
        }

        MotionCommand drive (Angle heading, const AgentParams &p) { return steer_toward (heading, p.spec, p.dt); }

        /// Direction into unexplored space: middle of the wide arc from b_R around to b_L.
        Angle away_from_edge (Angle bl, Angle br)
        {
            const double s = ccw_sweep (bl, br);
            return br + 0.5 * (kTwoPi - s);
        }

        bool beyond_edge (Angle bl, Angle br) { return ccw_sweep (bl, br) < kPi - 1e-9; }

        StepResult<AgentState> revert_to_nav (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p,
                                              const char *why)
        {
            spdlog::debug ("robot {} round {}: {} -> NavInternal ({})", s.id, view.round, to_string (s.fsm), why);
            AgentState n = s;
            n.fsm = FsmState::NavInternal;
            n.left.reset ();
            n.right.reset ();
            n.crossed = false;
            n.touched_wall = false;
            n.range_limited = false;
            // head back through the edge we were working on until a triangle contains us again
            if (s.left && s.right)
            {
                n.target_edge = make_edge (*s.left, *s.right);
                ++n.failures[*n.target_edge];
            }
            return finish (std::move (n), s, view, inbox, p, {});
        }

        /// Another mobile robot with a lower id works on the same edge.
        bool edge_claimed_by_other (const AgentState &s, const Inbox &inbox, RobotId l, RobotId r, bool lower_only)
        {
            for (const auto &m : inbox)
            {
                if (m.state != FsmState::ExpandTriangle && m.state != FsmState::WallFollow)
                    continue;
                if (!m.left_fnbr || !m.right_fnbr)
                    continue;
                if (make_edge (*m.left_fnbr, *m.right_fnbr) != make_edge (l, r))
                    continue;
                if (!lower_only || m.sender < s.id)
                    return true;
            }
            return false;
        }

        void refresh_triangles (AgentState &s, const Inbox &inbox, const AgentParams &p)
        {
            const auto known = known_triangles (s, inbox);
            for (auto &t : s.owned)
                t.is_frontier = !frontier_edges (t.key, s, inbox, known, p).empty ();
            std::map<TriKey, std::optional<std::uint32_t>> hops;
            for (const auto &k : known)
                if (k.hop && (!hops[k.key] || *k.hop < *hops[k.key]))
                    hops[k.key] = k.hop;
            update_triangle_hop (s.owned, hops, p.max_hop);
            // remember which edge leads downhill so navigators that cannot hear the next owner can still descend
            for (auto &t : s.owned)
            {
                t.descent.reset ();
                if (!t.hop || *t.hop == 0)
                    continue;
                std::optional<KnownTriangle> best;
                for (const auto &k : known)
                    if (k.key != t.key && k.hop && *k.hop + 1 == *t.hop && adjacent (k.key, t.key) && (!best || better (k, *best)))
                        best = k;
                if (!best)
                    continue;
                for (std::uint8_t i = 0; i < 3; ++i)
                    if (!contains (best->key, t.key[i]))
                        t.descent = i;
            }
        }

        TriangleRecord make_record (RobotId a, RobotId b, RobotId c, RobotId owner, TriangleKind kind, std::uint64_t round)
        {
            TriangleRecord t;
            t.key = make_key (a, b, c);
            t.owner = owner;
            t.kind = kind;
            t.created_round = round;
            return t;
        }
    } // namespace

    bool legal_transition (FsmState from, FsmState to)
    {
        if (from == to)
            return true;
        switch (from)
        {
        case FsmState::NavInternal:
            return to == FsmState::ExpandTriangle;
        case FsmState::ExpandTriangle:
            return to == FsmState::Frontier || to == FsmState::WallFollow || to == FsmState::NavInternal;
        case FsmState::WallFollow:
            return to == FsmState::FrontierWall || to == FsmState::NavInternal;
        case FsmState::Frontier:
        case FsmState::FrontierWall:
            return to == FsmState::Internal;
        case FsmState::Internal:
            return false;
        }
        return false;
    }

    ExpansionCommand expansion_controller (const InnerAngles &theta, Angle b_left, Angle b_right, double goal_tol, double target_left,
                                           double target_right)
    {
        auto sign = [goal_tol] (double e) { return std::abs (e) <= goal_tol ? 0 : (e > 0 ? 1 : -1); };
        const double e_left = target_left - theta.theta_left;
        const double e_right = target_right - theta.theta_right;
        const int s_left = sign (e_left);
        const int s_right = sign (e_right);
        if (s_left == 0 && s_right == 0)
            return {true, std::nullopt};
        if (s_left > 0 && s_right > 0)
            return {false, e_right >= e_left ? b_left.opposite () : b_right.opposite ()};
        const Point v = s_right * unit (b_left.opposite ()) + s_left * unit (b_right.opposite ());
        if (v.norm () < 1e-12)
            return {false, std::nullopt};
        return {false, Angle (std::atan2 (v.y (), v.x ()))};
    }

    RoundMessage build_message (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p)
    {
        RoundMessage m;
        m.sender = s.id;
        m.state = s.fsm;
        if (s.fsm != FsmState::NavInternal && s.fsm != FsmState::Internal)
        {
            m.left_fnbr = s.left;
            m.right_fnbr = s.right;
        }

        std::set<RobotId> priority;
        if (s.left)
            priority.insert (*s.left);
        if (s.right)
            priority.insert (*s.right);
        for (const auto &t : s.owned)
            priority.insert (t.key.begin (), t.key.end ());
        for (const auto &msg : inbox)
            if (is_mobile (msg.state))
                priority.insert (msg.sender);
        std::vector<const NeighborEntry *> entries;
        for (const auto &e : view.neighbors.neighbors)
            entries.push_back (&e);
        std::sort (entries.begin (), entries.end (), [&] (const NeighborEntry *a, const NeighborEntry *b) {
            const bool pa = priority.count (a->id) > 0;
            const bool pb = priority.count (b->id) > 0;
            return std::tie (pb, a->sector, a->id) < std::tie (pa, b->sector, b->id);
        });
        if (entries.size () > static_cast<std::size_t> (p.max_degree))
            entries.resize (static_cast<std::size_t> (p.max_degree));
        std::sort (entries.begin (), entries.end (), [] (const NeighborEntry *a, const NeighborEntry *b) { return a->id < b->id; });
        for (const auto *e : entries)
            m.neighbor_angle_table.push_back ({e->id, e->sector});

        for (const auto &t : s.owned)
            m.triangle_hop_table.push_back ({t.key, t.hop, t.descent});

        if (is_frontier_state (s.fsm) && s.left && s.right)
        {
            const auto bl = bearing_to (view, *s.left);
            const auto br = bearing_to (view, *s.right);
            if (bl && br)
            {
                m.frontier_angle = static_cast<std::uint32_t> (sector_index (Angle (sensed_frontier_angle (*bl, *br)), p.resolution));
            }
        }
        return m;
    }

    Discovery discover_triangles (const AgentState &u, const SensorView &view, const Inbox &inbox, const AgentParams &p,
                                  bool walk_left, bool walk_right)
    {
        Discovery d;
        const RobotId L = *u.left;
        const RobotId R = *u.right;
        std::set<RobotId> visited{u.id, L, R};
        std::size_t owned = u.owned.size ();

        // left == true walks l_i.L; the mirror walks r_i.R
        auto walk = [&] (bool left) {
            RobotId prev = left ? L : R;
            std::vector<RobotId> consumed;
            while (owned < static_cast<std::size_t> (p.max_owned))
            {
                const RoundMessage *m = find_message (inbox, prev);
                if (!m || !is_frontier_state (m->state))
                    break;
                const auto next = left ? m->left_fnbr : m->right_fnbr;
                if (!next || visited.count (*next) || !view.neighbors.has (*next))
                    break;
                const NeighborAngle *to_next = m->angle_to (*next);
                const NeighborAngle *to_u = m->angle_to (u.id);
                if (!to_next || !to_u)
                    break;
                const Angle a_next = sector_angle (*to_next, p.resolution);
                const Angle a_u = sector_angle (*to_u, p.resolution);
                const double theta_f = left ? sensed_frontier_angle (a_next, a_u) : sensed_frontier_angle (a_u, a_next);
                if (!triangle_quality (theta_f, p.quality_k))
                    break;
                d.triangles.push_back (make_record (u.id, *next, prev, u.id, TriangleKind::Discovery, view.round));
                consumed.push_back (prev);
                visited.insert (*next);
                prev = *next;
                ++owned;
            }
            const RobotId old = consumed.empty () ? (left ? R : L) : consumed.back ();
            d.updates.push_back ({prev, old, u.id});
            d.disconnects.insert (d.disconnects.end (), consumed.begin (), consumed.end ());
            return prev;
        };
        d.new_left = walk_left ? walk (true) : L;
        d.new_right = walk_right ? walk (false) : R;
        return d;
    }

    StepResult<AgentState> step_nav_internal (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p)
    {
        AgentState n = s;
        const auto known = known_triangles (s, inbox);

        // slack only when the strict test finds nothing, so edges do not make us sit in two triangles at once
        std::optional<KnownTriangle> current;
        for (const double slack : {0.0, p.occupancy_slack})
        {
            for (const auto &k : known)
            {
                std::array<Angle, 3> b{};
                bool visible = true;
                for (int i = 0; i < 3; ++i)
                {
                    const auto a = bearing_to (view, k.key[i]);
                    visible = visible && a.has_value ();
                    if (a)
                        b[i] = *a;
                }
                if (visible && occupancy_test (b, slack) && (!current || better (k, *current)))
                    current = k;
            }
            if (current)
                break;
        }

        if (current)
        {
            n.current = current->key;
            n.target_edge.reset ();
            std::vector<EdgeKey> candidates;
            for (const auto &e : frontier_edges (current->key, s, inbox, known, p))
                if (!edge_claimed_by_other (s, inbox, e.first, e.second, false) &&
                    std::find (s.abandoned.begin (), s.abandoned.end (), e) == s.abandoned.end ())
                    candidates.push_back (e);
            std::sort (candidates.begin (), candidates.end ());
            for (const auto &e : candidates)
            {
                const auto f = s.failures.find (e);
                if (f == s.failures.end () || f->second < p.max_attempts)
                    continue;
                // tried too often: close the edge for everyone
                spdlog::info ("robot {} round {}: sealing edge {}-{} after {} attempts", s.id, view.round, e.first, e.second, f->second);
                n.abandoned.push_back (e);
                n.failures.erase (e);
                std::vector<FrontierUpdate> seal{{e.first, e.second, std::nullopt}, {e.second, e.first, std::nullopt}};
                return finish (std::move (n), s, view, inbox, p, {}, std::move (seal));
            }
            for (const auto &e : candidates)
                if (const auto lr = orient_edge (e.first, e.second, s, inbox))
                {
                    n.fsm = FsmState::ExpandTriangle;
                    n.left = lr->first;
                    n.right = lr->second;
                    n.crossed = false;
                    n.target_edge.reset ();
                    return finish (std::move (n), s, view, inbox, p, {});
                }

            std::optional<KnownTriangle> next;
            for (const auto &k : known)
                if (k.hop && adjacent (k.key, current->key) && (!next || better (k, *next)))
                    next = k;
            if (next && hop_rank (next->hop) < hop_rank (current->hop))
            {
                std::vector<RobotId> common;
                for (RobotId id : current->key)
                    if (contains (next->key, id))
                        common.push_back (id);
                n.target_edge = make_edge (common[0], common[1]);
            }
            else if (current->descent)
            {
                const auto &k = current->key;
                const std::uint8_t d = *current->descent;
                n.target_edge = make_edge (k[(d + 1) % 3], k[(d + 2) % 3]);
            }
        }
        else if (known.empty () && view.neighbors.has (p.base_ids[0]) && view.neighbors.has (p.base_ids[1]))
        {
            if (const auto lr = orient_edge (p.base_ids[0], p.base_ids[1], s, inbox))
            {
                n.fsm = FsmState::ExpandTriangle;
                n.left = lr->first;
                n.right = lr->second;
                n.crossed = false;
                return finish (std::move (n), s, view, inbox, p, {});
            }
        }

        spdlog::debug ("robot {} round {}: nav current {} target {}", s.id, view.round,
                       current ? fmt::format ("{}-{}-{} hop {}", current->key[0], current->key[1], current->key[2], hop_rank (current->hop)) : std::string ("none"),
                       n.target_edge ? fmt::format ("{}-{}", n.target_edge->first, n.target_edge->second) : std::string ("none"));
        MotionCommand motion;
        if (n.target_edge)
        {
            const auto ba = bearing_to (view, n.target_edge->first);
            const auto bb = bearing_to (view, n.target_edge->second);
            if (ba && bb)
            {
                Angle heading = bisector (*ba, *bb);
                // near the edge the short arc is ambiguous; head into the arc that excludes the far vertex
                if (current)
                    for (RobotId c : current->key)
                        if (c != n.target_edge->first && c != n.target_edge->second)
                            if (const auto bc = bearing_to (view, c))
                            {
                                const double sweep = ccw_sweep (*ba, *bb);
                                const bool c_inside = ccw_sweep (*ba, *bc) < sweep;
                                heading = c_inside ? *bb + 0.5 * (kTwoPi - sweep) : *ba + 0.5 * sweep;
                            }
                motion = drive (heading, p);
            }
            else if (!current && (ba || bb))
                motion = drive (ba ? *ba : *bb, p);
        }
        if (!current && motion.forward == 0.0 && motion.turn_rate == 0.0 && !view.neighbors.neighbors.empty ())
        {
            // lost with nothing to aim at: close in on the structure until a triangle contains us
            motion = drive (view.neighbors.neighbors.front ().bearing, p);
        }
        return finish (std::move (n), s, view, inbox, p, motion);
    }

    StepResult<AgentState> step_expand_triangle (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                                 const AgentParams &p)
    {
        const RobotId L = *s.left;
        const RobotId R = *s.right;
        const auto bl = bearing_to (view, L);
        const auto br = bearing_to (view, R);
        const std::uint64_t age = view.round - s.state_since;
        if (s.crossed && (bl || br) && !(bl && br) && age <= p.expand_timeout)
        {
            // the apex drifted out of range of one end; back toward the other until both are seen
            AgentState n = s;
            n.range_limited = true;
            return finish (std::move (n), s, view, inbox, p, drive (bl ? *bl : *br, p));
        }
        if (!bl || !br)
            return revert_to_nav (s, view, inbox, p, "lost a frontier neighbour");
        if (!linked (L, R, s, inbox))
            return revert_to_nav (s, view, inbox, p, "edge no longer on the frontier");
        if (edge_claimed_by_other (s, inbox, L, R, true))
            return revert_to_nav (s, view, inbox, p, "edge claimed by a lower id");

        AgentState n = s;
        if (!n.crossed && beyond_edge (*bl, *br))
            n.crossed = true;

        if (!n.crossed)
        {
            if (age > p.expand_timeout)
            {
                // the unexplored side cannot be entered; seal the edge
                spdlog::info ("robot {} round {}: sealing unreachable edge {}-{}", s.id, view.round, L, R);
                n.abandoned.push_back (make_edge (L, R));
                std::vector<FrontierUpdate> seal{{L, R, std::nullopt}, {R, L, std::nullopt}};
                auto r = revert_to_nav (n, view, inbox, p, "could not cross");
                r.message.frontier_payload = std::move (seal);
                return r;
            }
            return finish (std::move (n), s, view, inbox, p, drive (away_from_edge (*bl, *br), p));
        }

        const auto theta = inner_angles_for (s.id, L, R, inbox, p.resolution);
        if (!theta)
            return finish (std::move (n), s, view, inbox, p, {});

        // an end whose wedge is narrower than 2π/3 only gets half of it
        auto target_at = [&] (RobotId x) {
            const RoundMessage *m = find_message (inbox, x);
            if (!m || !m->frontier_angle)
                return kPi / 3.0;
            const double wedge = sector_angle (NeighborAngle{x, *m->frontier_angle}, p.resolution).rad ();
            return std::clamp (0.5 * wedge, 2.0 * p.goal_tol, kPi / 3.0);
        };
        auto cmd = expansion_controller (*theta, *bl, *br, p.goal_tol, target_at (L), target_at (R));
        if (n.range_limited)
        {
            // as far out as the radio allows; settle here unless the triangle is a sliver
            const double apex = kPi - theta->theta_left - theta->theta_right;
            if (std::min ({theta->theta_left, theta->theta_right, apex}) <= std::max (p.resolution, p.sliver_angle) + 1e-9)
                return revert_to_nav (s, view, inbox, p, "range-limited triangle would be a sliver");
            cmd.arrived = true;
        }
        // blocked: the wall sits where the controller wants to go
        if (!cmd.arrived && cmd.heading && view.walls.contact && view.walls.wall_bearing &&
            angular_diff (*view.walls.wall_bearing, *cmd.heading) < kPi / 2.0)
        {
            n.fsm = FsmState::WallFollow;
            n.touched_wall = true;
            return finish (std::move (n), s, view, inbox, p, {});
        }
        if (!cmd.arrived && age <= p.expand_timeout)
            return finish (std::move (n), s, view, inbox, p, cmd.heading ? drive (*cmd.heading, p) : MotionCommand{});
        if (!cmd.arrived)
        {
            const double apex = kPi - theta->theta_left - theta->theta_right;
            if (std::min ({theta->theta_left, theta->theta_right, apex}) <= std::max (p.resolution, p.sliver_angle) + 1e-9)
                return revert_to_nav (s, view, inbox, p, "timed out short of a usable triangle");
        }

        n.owned.push_back (make_record (s.id, L, R, s.id, TriangleKind::Expansion, view.round));
        auto d = discover_triangles (n, view, inbox, p);
        n.owned.insert (n.owned.end (), d.triangles.begin (), d.triangles.end ());
        n.left = d.new_left;
        n.right = d.new_right;
        n.fsm = FsmState::Frontier;
        n.crossed = false;
        n.range_limited = false;
        refresh_triangles (n, inbox, p);
        return finish (std::move (n), s, view, inbox, p, {}, std::move (d.updates), std::move (d.disconnects));
    }

    StepResult<AgentState> step_wall_follow (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p)
    {
        const RobotId L = *s.left;
        const RobotId R = *s.right;
        const auto bl = bearing_to (view, L);
        const auto br = bearing_to (view, R);
        if (!bl || !br)
            return revert_to_nav (s, view, inbox, p, "lost a frontier neighbour");
        if (!linked (L, R, s, inbox))
            return revert_to_nav (s, view, inbox, p, "edge no longer on the frontier");

        AgentState n = s;
        if (view.walls.contact)
            n.touched_wall = true;
        const auto theta = inner_angles_for (s.id, L, R, inbox, p.resolution);
        const std::uint64_t age = view.round - s.state_since;
        const bool isosceles = theta && std::abs (theta->theta_left - theta->theta_right) <= p.goal_tol;
        const bool crossed = beyond_edge (*bl, *br);
        if (!crossed && age > p.wall_timeout)
            return revert_to_nav (s, view, inbox, p, "wall follow never got beyond the edge");

        if (theta && crossed && ((n.touched_wall && isosceles) || age > p.wall_timeout))
        {
            const double apex = kPi - theta->theta_left - theta->theta_right;
            spdlog::debug ("robot {} round {}: wall finish theta {:.3f} {:.3f}", s.id, view.round, theta->theta_left, theta->theta_right);
            if (std::min ({theta->theta_left, theta->theta_right, apex}) <= std::max (p.resolution, p.sliver_angle) + 1e-9)
            {
                // the edge hugs the wall; a triangle here would be a sliver
                n.abandoned.push_back (make_edge (L, R));
                std::vector<FrontierUpdate> seal{{L, R, std::nullopt}, {R, L, std::nullopt}};
                auto r = revert_to_nav (n, view, inbox, p, "wall triangle would be a sliver");
                r.message.frontier_payload = std::move (seal);
                return r;
            }
            n.owned.push_back (make_record (s.id, L, R, s.id, TriangleKind::Wall, view.round));
            auto wall_side = [&] (RobotId x) {
                const RoundMessage *m = find_message (inbox, x);
                return m && m->state == FsmState::FrontierWall;
            };
            const bool wl = wall_side (L);
            const bool wr = wall_side (R);
            auto d = discover_triangles (n, view, inbox, p, !wl, !wr);
            n.owned.insert (n.owned.end (), d.triangles.begin (), d.triangles.end ());
            if (wl)
                d.updates.push_back ({L, R, std::nullopt});
            if (wr)
                d.updates.push_back ({R, L, std::nullopt});
            n.left = wl ? std::nullopt : std::optional<RobotId> (d.new_left);
            n.right = wr ? std::nullopt : std::optional<RobotId> (d.new_right);
            n.fsm = FsmState::FrontierWall;
            refresh_triangles (n, inbox, p);
            return finish (std::move (n), s, view, inbox, p, {}, std::move (d.updates), std::move (d.disconnects));
        }

        const Angle away = away_from_edge (*bl, *br);
        const auto &wall = view.walls.wall_bearing;
        if (!wall)
            return finish (std::move (n), s, view, inbox, p, drive (away, p));
        if (!n.touched_wall || !theta)
            return finish (std::move (n), s, view, inbox, p, drive (*wall, p));

        // |uR| - |uL| falls fastest along unit(b_R) - unit(b_L); take the tangent that follows it
        const Point descent = theta->theta_left > theta->theta_right ? Point (unit (*br) - unit (*bl)) : Point (unit (*bl) - unit (*br));
        const Angle t1 = *wall + kPi / 2.0;
        const Angle t2 = *wall - kPi / 2.0;
        const bool first = unit (t1).dot (descent) >= unit (t2).dot (descent);
        const Angle tangent = first ? t1 : t2;
        const Angle heading = first ? tangent - 0.3 : tangent + 0.3;
        return finish (std::move (n), s, view, inbox, p, drive (heading, p));
    }

    StepResult<AgentState> step_frontier (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p)
    {
        AgentState n = s;
        bool disconnected = false;
        for (const auto &m : inbox)
        {
            if (std::find (m.disconnect_payload.begin (), m.disconnect_payload.end (), s.id) != m.disconnect_payload.end ())
                disconnected = true;
            for (const auto &u : m.frontier_payload)
            {
                if (u.target != s.id)
                    continue;
                if (n.left == u.old_nbr)
                    n.left = u.new_nbr;
                else if (n.right == u.old_nbr)
                    n.right = u.new_nbr;
                else
                    spdlog::debug ("robot {} round {}: ignoring update for unknown neighbour {}", s.id, view.round, u.old_nbr);
            }
        }
        if (disconnected)
        {
            n.left.reset ();
            n.right.reset ();
        }
        std::vector<FrontierUpdate> seal;
        if (n.left && n.right)
        {
            // a wedge too narrow to expand whose sides cannot see each other (a reflex corner
            // sits in between): close it rather than let someone expand into covered space
            const auto bl = bearing_to (view, *n.left);
            const auto br = bearing_to (view, *n.right);
            const RoundMessage *ml = find_message (inbox, *n.left);
            const RoundMessage *mr = find_message (inbox, *n.right);
            const bool mutual = ml && mr && ml->angle_to (*n.right) && mr->angle_to (*n.left);
            if (bl && br && ml && mr && !mutual && sensed_frontier_angle (*bl, *br) < kPi / 4.0)
            {
                spdlog::info ("robot {} round {}: sealing pocket between {} and {}", s.id, view.round, *n.left, *n.right);
                seal = {{*n.left, s.id, std::nullopt}, {*n.right, s.id, std::nullopt}};
                n.left.reset ();
                n.right.reset ();
            }
        }
        if (!n.left && !n.right)
            n.fsm = FsmState::Internal;
        refresh_triangles (n, inbox, p);
        return finish (std::move (n), s, view, inbox, p, {}, std::move (seal));
    }

    StepResult<AgentState> step_internal (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p)
    {
        AgentState n = s;
        n.left.reset ();
        n.right.reset ();
        refresh_triangles (n, inbox, p);
        return finish (std::move (n), s, view, inbox, p, {});
    }

    StepResult<AgentState> step (const AgentState &s, const SensorView &view, const Inbox &inbox, const AgentParams &p)
    {
        switch (s.fsm)
        {
        case FsmState::NavInternal:
            return step_nav_internal (s, view, inbox, p);
        case FsmState::ExpandTriangle:
            return step_expand_triangle (s, view, inbox, p);
        case FsmState::WallFollow:
            return step_wall_follow (s, view, inbox, p);
        case FsmState::Frontier:
        case FsmState::FrontierWall:
            return step_frontier (s, view, inbox, p);
        case FsmState::Internal:
            return step_internal (s, view, inbox, p);
        }
        return step_internal (s, view, inbox, p);
    }

} // namespace mat
