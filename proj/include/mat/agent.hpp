#pragma once
/**
 * @file   agent.hpp
 * @brief  Per-robot controller: navigation, triangle expansion, wall following,
 *         frontier upkeep and triangle discovery.
 */

#include "mat/comms.hpp"
#include "mat/tri_store.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace mat
{
    struct AgentParams
    {
        double quality_k = 3.0 * kPi / 4.0;
        double goal_tol = kPi / 16.0;
        double resolution = kPi / 8.0;
        std::array<RobotId, 2> base_ids{0, 1};
        std::uint32_t max_hop = 255;
        double occupancy_slack = kPi / 8.0; ///< extra gap allowed by the navigator's occupancy test
        std::uint64_t expand_timeout = 800; ///< rounds in ExpandTriangle before giving up
        std::uint64_t wall_timeout = 400;   ///< rounds in WallFollow before settling
        int max_owned = kMaxOwned;
        int max_degree = kMaxDegree;
        int max_attempts = 3;          ///< failed expansions of one edge before a navigator seals it
        double sliver_angle = kPi / 8.0; ///< smallest angle a settled triangle may have
        RobotSpec spec;
        double dt = 0.1;
    };

    /// Local state of one robot. Nothing here is global knowledge.
    struct AgentState
    {
        RobotId id = 0;
        FsmState fsm = FsmState::NavInternal;
        std::optional<RobotId> left;  ///< u.L
        std::optional<RobotId> right; ///< u.R
        std::vector<TriangleRecord> owned;

        std::uint64_t state_since = 0; ///< round the current state was entered
        bool crossed = false;          ///< ExpandTriangle: already beyond edge {L, R}
        bool touched_wall = false;     ///< WallFollow: contact made at least once
        bool range_limited = false;    ///< ExpandTriangle: drifted out of range of L or R once
        std::optional<EdgeKey> target_edge; ///< NavInternal: shared edge being crossed
        std::optional<TriKey> current;      ///< NavInternal: triangle occupied last round
        std::vector<EdgeKey> abandoned;     ///< frontier edges this robot failed to expand
        std::map<EdgeKey, int> failures;    ///< reverts per frontier edge
    };

    /// Expansion controller output: a robot-frame heading, or arrival.
    struct ExpansionCommand
    {
        bool arrived = false;
        std::optional<Angle> heading;
    };

    /// Drives θ_L and θ_R toward their targets (π/3 for an equilateral triangle).
    /// Moving straight away from L keeps θ_L fixed and grows θ_R; moving away
    /// from R does the mirror image.
    [[nodiscard]] ExpansionCommand expansion_controller (const InnerAngles &theta, Angle b_left, Angle b_right, double goal_tol,
                                                         double target_left = kPi / 3.0, double target_right = kPi / 3.0);

    /// Result of scanning the frontier chain after an expansion.
    struct Discovery
    {
        std::vector<TriangleRecord> triangles;
        RobotId new_left = 0;
        RobotId new_right = 0;
        std::vector<FrontierUpdate> updates;
        std::vector<RobotId> disconnects;
    };

    /// u has just built Δ(u, L, R). Walk l1 = L.L, l2 = l1.L, ... (and the mirror
    /// on the right) accepting Δ(u, l_i, l_{i-1}) while θ_F at l_{i-1} < k.
    /// A side that is not walked keeps its link and produces no update.
    [[nodiscard]] Discovery discover_triangles (const AgentState &u, const SensorView &view, const Inbox &inbox,
                                                const AgentParams &p, bool walk_left = true, bool walk_right = true);

    [[nodiscard]] StepResult<AgentState> step_nav_internal (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                                            const AgentParams &p);
    [[nodiscard]] StepResult<AgentState> step_expand_triangle (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                                               const AgentParams &p);
    [[nodiscard]] StepResult<AgentState> step_wall_follow (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                                           const AgentParams &p);
    [[nodiscard]] StepResult<AgentState> step_frontier (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                                        const AgentParams &p);
    [[nodiscard]] StepResult<AgentState> step_internal (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                                        const AgentParams &p);

    /// Dispatch on the FSM state.
    [[nodiscard]] StepResult<AgentState> step (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                               const AgentParams &p);

    /// Outgoing broadcast for a state. Overflowing neighbour tables keep frontier
    /// neighbours, triangle vertices and mobile robots first, then the smallest sectors.
    [[nodiscard]] RoundMessage build_message (const AgentState &s, const SensorView &view, const Inbox &inbox,
                                              const AgentParams &p);

    /// Transitions allowed by the controller, including the two recovery edges
    /// back to NavInternal.
    [[nodiscard]] bool legal_transition (FsmState from, FsmState to);

} // namespace mat
