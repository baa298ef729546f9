#include "mat/simulation.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace mat
{
    namespace
    {
        bool has_payload (const WorldT &w)
        {
            for (const auto &r : w.robots)
                if (r.last_message && (!r.last_message->frontier_payload.empty () || !r.last_message->disconnect_payload.empty ()))
                    return true;
            return false;
        }
    } // namespace

    Snapshot make_snapshot (const WorldT &w, const AgentParams &p)
    {
        Snapshot s;
        s.round = w.round;
        s.base_edge = make_edge (p.base_ids[0], p.base_ids[1]);
        std::vector<RobotPose> poses;
        for (const auto &r : w.robots)
        {
            poses.push_back ({r.id, r.pose});
            s.positions[r.id] = r.pose.position;
            s.states[r.id] = r.state.fsm;
            if (r.state.fsm == FsmState::Frontier || r.state.fsm == FsmState::FrontierWall)
                s.links[r.id] = {r.state.left, r.state.right};
            s.triangles.insert (s.triangles.end (), r.state.owned.begin (), r.state.owned.end ());
        }
        s.graph = build_neighbor_graph (poses, w.spec, w.workspace).adjacency;
        return s;
    }

    std::map<TriKey, std::optional<std::uint32_t>> oracle_hops (const Snapshot &s, std::uint32_t max_hop)
    {
        std::set<EdgeKey> frontier;
        for (const auto &c : classify_snapshot (s))
            if (c.type == EdgeType::Frontier)
                frontier.insert (c.edge);
        std::vector<TriKey> sources;
        for (const auto &t : s.triangles)
            for (const auto &e : edges_of (t.key))
                if (frontier.count (e))
                {
                    sources.push_back (t.key);
                    break;
                }
        const auto dist = dual_distances (extract_dual_graph (s.triangles), sources);
        std::map<TriKey, std::optional<std::uint32_t>> out;
        for (const auto &t : s.triangles)
        {
            auto it = dist.find (t.key);
            out[t.key] = (it != dist.end () && it->second <= max_hop) ? std::optional<std::uint32_t> (it->second) : std::nullopt;
        }
        return out;
    }

    Simulation::Simulation (Scenario scenario, RunOptions options)
        : scenario_ (std::move (scenario)), options_ (options), rng_ (scenario_.seed)
    {
        validate (scenario_);
        params_ = agent_params (scenario_);
        world_.workspace = scenario_.workspace;
        world_.spec = scenario_.robot;
        world_.codec = make_codec_params (scenario_.n_robots, scenario_.robot.bearing_resolution);
        world_.dt = params_.dt;
        result_.message_budget_bytes = size_budget_bytes (world_.codec);

        std::uniform_real_distribution<double> heading (0.0, kTwoPi);
        for (int i = 0; i < 2; ++i)
        {
            SimRobot<AgentState> r;
            r.id = params_.base_ids[i];
            r.pose = {scenario_.workspace.base_edge[i], heading (rng_)};
            r.state.id = r.id;
            r.state.fsm = FsmState::FrontierWall;
            if (i == 0)
                r.state.right = params_.base_ids[1];
            else
                r.state.left = params_.base_ids[0];
            world_.robots.push_back (r);
        }
    }

    bool Simulation::frontier_exists () const
    {
        for (const auto &r : world_.robots)
            if ((r.state.fsm == FsmState::Frontier || r.state.fsm == FsmState::FrontierWall) && (r.state.left || r.state.right))
                return true;
        return false;
    }

    void Simulation::inject ()
    {
        if (next_id_ >= scenario_.n_robots || !frontier_exists ())
            return;
        const auto mobile = std::count_if (world_.robots.begin (), world_.robots.end (),
                                           [] (const auto &r) { return is_mobile (r.state.fsm); });
        if (static_cast<std::size_t> (mobile) >= scenario_.max_navigators)
            return;
        const auto &b = scenario_.workspace.base_edge;
        SimRobot<AgentState> r;
        r.id = next_id_++;
        r.pose.position = 0.5 * (b[0] + b[1]) + 0.25 * (b[1] - b[0]).norm () * base_normal (scenario_.workspace);
        r.pose.heading = std::uniform_real_distribution<double> (0.0, kTwoPi) (rng_);
        r.state.id = r.id;
        r.state.fsm = FsmState::NavInternal;
        r.state.state_since = world_.round;
        world_.robots.push_back (r);
        result_.last_structure_change = world_.round;
        spdlog::debug ("round {}: injected robot {}", world_.round, r.id);
    }

    Snapshot Simulation::snapshot () const { return make_snapshot (world_, params_); }

    void Simulation::check (const WorldT &before)
    {
        std::vector<std::string> found;
        const auto tag = "round " + std::to_string (before.round) + ": ";
        for (std::size_t i = 0; i < before.robots.size (); ++i)
        {
            const auto &a = before.robots[i].state;
            const auto &b = world_.robots[i].state;
            if (!legal_transition (a.fsm, b.fsm))
                found.push_back (tag + "illegal transition " + std::string (to_string (a.fsm)) + " -> " +
                                 std::string (to_string (b.fsm)) + " by robot " + std::to_string (a.id));
        }
        for (const auto &r : world_.robots)
        {
            if (distance_to_walls (world_.workspace, r.pose.position) < 0.5 * world_.spec.diameter - 1e-9)
                found.push_back (tag + "robot " + std::to_string (r.id) + " violates wall clearance");
            const bool settled = r.state.fsm == FsmState::Frontier || r.state.fsm == FsmState::FrontierWall ||
                                 r.state.fsm == FsmState::Internal;
            if (settled && r.id >= 2 && r.state.owned.empty ())
                found.push_back (tag + "settled robot " + std::to_string (r.id) + " owns no triangle");
            for (const auto &t : r.state.owned)
                if (!contains (t.key, t.owner))
                    found.push_back (tag + "owner " + std::to_string (t.owner) + " is not a vertex of its triangle");
        }

        const Snapshot s = snapshot ();
        try
        {
            for (const auto &k : check_owner_invariant (s))
                found.push_back (tag + "owner invariant violated by triangle " + std::to_string (k[0]) + "," + std::to_string (k[1]) +
                                 "," + std::to_string (k[2]));
            if (!check_owner_connectivity (s).empty ())
                found.push_back (tag + "owners of adjacent triangles are not connected");
            if (s.triangles.size () != last_triangle_count_)
            {
                last_triangle_count_ = s.triangles.size ();
                if (!check_overlaps (s).empty ())
                    found.push_back (tag + "triangle interiors overlap");
            }
        }
        catch (const StructuralError &e)
        {
            found.push_back (tag + e.what ());
        }
        if (!has_payload (world_))
            for (const auto &p : check_frontier_chain (s))
                found.push_back (tag + p);

        for (auto &f : found)
        {
            spdlog::error ("{}", f);
            result_.violations.push_back (std::move (f));
        }
        if (!result_.violations.empty () && options_.stop_on_violation)
            done_ = true;
    }

    bool Simulation::step ()
    {
        if (done_)
            return false;
        inject ();
        const WorldT before = world_;
        world_ = run_round (std::move (world_), [this] (const AgentState &s, const SensorView &v, const Inbox &in) {
            return mat::step (s, v, in, params_);
        });

        bool structure = false;
        bool messages_same = true;
        for (std::size_t i = 0; i < before.robots.size (); ++i)
        {
            const auto &a = before.robots[i];
            const auto &b = world_.robots[i];
            result_.max_message_bytes = std::max (result_.max_message_bytes, b.last_message_bytes);
            if (a.state.fsm != b.state.fsm || a.state.left != b.state.left || a.state.right != b.state.right)
                structure = true;
            if (a.last_message != b.last_message)
                messages_same = false;
        }
        if (structure)
            result_.last_structure_change = before.round;

        if (options_.check_invariants)
            check (before);

        const Snapshot s = snapshot ();
        const auto oracle = oracle_hops (s, params_.max_hop);
        bool exact = true;
        for (const auto &t : s.triangles)
            exact = exact && oracle.at (t.key) == t.hop;
        if (!exact)
            result_.hops_exact_since.reset ();
        else if (!result_.hops_exact_since)
            result_.hops_exact_since = before.round;

        const bool any_mobile = std::any_of (world_.robots.begin (), world_.robots.end (),
                                             [] (const auto &r) { return is_mobile (r.state.fsm); });
        const bool pending = next_id_ < scenario_.n_robots && frontier_exists ();
        quiet_rounds_ = (messages_same && !any_mobile && !pending) ? quiet_rounds_ + 1 : 0;
        if (quiet_rounds_ >= 2)
        {
            result_.quiescent = true;
            done_ = true;
        }
        const std::uint64_t limit = options_.max_rounds.value_or (scenario_.max_rounds);
        if (world_.round >= limit)
            done_ = true;
        return !done_;
    }

    RunResult Simulation::run (const std::function<void (const WorldT &)> &observer)
    {
        while (!done_)
        {
            step ();
            if (observer)
                observer (world_);
        }
        result_.final_snapshot = snapshot ();
        result_.rounds = world_.round;
        result_.deployed = static_cast<std::size_t> (std::count_if (
            world_.robots.begin (), world_.robots.end (), [] (const auto &r) { return !is_mobile (r.state.fsm); }));
        return result_;
    }

} // namespace mat
