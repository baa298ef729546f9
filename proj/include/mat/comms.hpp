#pragma once
/**
 * @file   comms.hpp
 * @brief  Line-of-sight neighbour graph, lockstep round scheduler, and 2-hop angle sharing.
 */

#include "mat/message.hpp"
#include "mat/workspace.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace mat
{
    struct NeighborEntry
    {
        RobotId id = 0;
        Angle bearing;       ///< quantized B_u(v), robot frame
        std::uint32_t sector = 0;
        Angle orientation;   ///< Ori(v) = B_v(u) + π − B_u(v)
    };

    /// What robot `self` can sense about its neighbours this round.
    struct NeighborView
    {
        RobotId self = 0;
        std::vector<NeighborEntry> neighbors; ///< sorted by id

        [[nodiscard]] const NeighborEntry *find (RobotId id) const;
        [[nodiscard]] bool has (RobotId id) const { return find (id) != nullptr; }
    };

    struct RobotPose
    {
        RobotId id = 0;
        Pose pose;
    };

    struct NeighborGraph
    {
        std::map<RobotId, std::set<RobotId>> adjacency;
        std::map<RobotId, NeighborView> views;

        [[nodiscard]] bool connected (RobotId a, RobotId b) const;
    };

    [[nodiscard]] NeighborGraph build_neighbor_graph (const std::vector<RobotPose> &poses, const RobotSpec &spec,
                                                      const WorkspacePolygon &w);

    /// Messages heard this round; each was produced in the previous round.
    using Inbox = std::vector<RoundMessage>;

    [[nodiscard]] const RoundMessage *find_message (const Inbox &inbox, RobotId sender);

    /// Inner angles of Δ(u, l, r) for every mutually adjacent neighbour pair (l < r).
    /// `theta_left` is the angle at l, `theta_right` the angle at r.
    [[nodiscard]] std::map<EdgeKey, InnerAngles> two_hop_angles (const NeighborView &u, const Inbox &inbox, double resolution);

    /// Inner angles at l and r of Δ(u, l, r), from l's and r's announced tables.
    [[nodiscard]] std::optional<InnerAngles> inner_angles_for (RobotId u, RobotId l, RobotId r, const Inbox &inbox, double resolution);

    /// Sensor input handed to a controller.
    struct SensorView
    {
        std::uint64_t round = 0;
        NeighborView neighbors;
        WallSense walls;
    };

    template <class State> struct StepResult
    {
        State state;
        RoundMessage message;
        MotionCommand motion;
    };

    template <class State> struct SimRobot
    {
        RobotId id = 0;
        Pose pose;
        State state;
        std::optional<RoundMessage> last_message; ///< broadcast at the end of the previous round
        std::size_t last_message_bytes = 0;
    };

    template <class State> struct World
    {
        std::uint64_t round = 0;
        std::vector<SimRobot<State>> robots; ///< sorted by id
        WorkspacePolygon workspace;
        RobotSpec spec;
        CodecParams codec;
        double dt = 0.1;
        NeighborGraph graph; ///< graph used in the last executed round
    };

    /// One synchronous round: deliver last round's broadcasts, step every
    /// controller on the pre-round snapshot, integrate motion, advance t_r.
    /// Throws MessageTooLarge when an outgoing message exceeds the budget.
    template <class State, class Step> World<State> run_round (World<State> world, Step &&step)
    {
        std::vector<RobotPose> poses;
        poses.reserve (world.robots.size ());
        for (const auto &r : world.robots)
            poses.push_back ({r.id, r.pose});
        world.graph = build_neighbor_graph (poses, world.spec, world.workspace);

        std::map<RobotId, std::size_t> index;
        for (std::size_t i = 0; i < world.robots.size (); ++i)
            index[world.robots[i].id] = i;

        const std::size_t budget = size_budget_bytes (world.codec);
        std::vector<StepResult<State>> results;
        results.reserve (world.robots.size ());
        for (const auto &r : world.robots)
        {
            SensorView view;
            view.round = world.round;
            view.neighbors = world.graph.views.at (r.id);
            view.walls = sense_walls (r.pose, world.spec, world.workspace);
            Inbox inbox;
            for (const auto &nb : view.neighbors.neighbors)
                if (const auto &other = world.robots[index.at (nb.id)]; other.last_message)
                    inbox.push_back (*other.last_message);
            results.push_back (step (r.state, view, inbox));
        }

        for (std::size_t i = 0; i < world.robots.size (); ++i)
        {
            auto &r = world.robots[i];
            auto &res = results[i];
            const auto bytes = encode (res.message, world.codec);
            if (bytes.size () > budget)
                throw MessageTooLarge ("robot " + std::to_string (r.id) + " exceeded the message budget");
            r.state = std::move (res.state);
            r.last_message = std::move (res.message);
            r.last_message_bytes = bytes.size ();
            r.pose = integrate_motion (r.pose, res.motion, world.dt, world.spec, world.workspace);
        }
        ++world.round;
        return world;
    }

} // namespace mat
