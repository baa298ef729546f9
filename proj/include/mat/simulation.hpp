#pragma once
/**
 * @file   simulation.hpp
 * @brief  Triangulation run loop: robot injection, lockstep rounds, per-round checks.
 */

#include "mat/agent.hpp"
#include "mat/scenario.hpp"
#include "mat/tri_store.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace mat
{
    struct RunOptions
    {
        bool check_invariants = true;
        bool stop_on_violation = true;
        std::optional<std::uint64_t> max_rounds; ///< overrides the scenario value
    };

    struct RunResult
    {
        Snapshot final_snapshot;
        std::uint64_t rounds = 0;
        std::size_t deployed = 0;
        bool quiescent = false;                 ///< stopped because nothing changed any more
        std::uint64_t last_structure_change = 0; ///< last round in which a state or link changed
        std::optional<std::uint64_t> hops_exact_since; ///< first round from which hops always matched the oracle
        std::size_t max_message_bytes = 0;
        std::size_t message_budget_bytes = 0;
        std::vector<std::string> violations;
    };

    /// Triangle hops expected from the structure alone: dual-graph distance to
    /// the nearest frontier triangle, unset when above `max_hop` or unreachable.
    [[nodiscard]] std::map<TriKey, std::optional<std::uint32_t>> oracle_hops (const Snapshot &s, std::uint32_t max_hop);

    using WorldT = World<AgentState>;

    class Simulation
    {
      public:
        explicit Simulation (Scenario scenario, RunOptions options = {});

        /// Executes one round. Returns false once the run is over.
        bool step ();

        /// Runs to completion, calling `observer` after every round.
        RunResult run (const std::function<void (const WorldT &)> &observer = {});

        [[nodiscard]] const WorldT &world () const { return world_; }
        [[nodiscard]] const Scenario &scenario () const { return scenario_; }
        [[nodiscard]] const AgentParams &params () const { return params_; }
        [[nodiscard]] Snapshot snapshot () const;
        [[nodiscard]] const RunResult &result () const { return result_; }

      private:
        void inject ();
        void check (const WorldT &before);
        [[nodiscard]] bool frontier_exists () const;

        Scenario scenario_;
        RunOptions options_;
        AgentParams params_;
        WorldT world_;
        std::mt19937_64 rng_;
        RobotId next_id_ = 2;
        std::size_t last_triangle_count_ = 0;
        std::uint64_t quiet_rounds_ = 0;
        bool done_ = false;
        RunResult result_;
    };

    /// Snapshot of an arbitrary world, with the primal graph rebuilt from current poses.
    [[nodiscard]] Snapshot make_snapshot (const WorldT &w, const AgentParams &p);

} // namespace mat
