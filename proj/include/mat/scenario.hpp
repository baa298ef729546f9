#pragma once

#include "mat/agent.hpp"
#include "mat/workspace.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mat
{
    struct Scenario
    {
        std::string name = "scenario";
        WorkspacePolygon workspace;
        RobotSpec robot;
        std::size_t n_robots = 12;
        double quality_k = 3.0 * kPi / 4.0;
        double goal_tol = kPi / 16.0;
        std::size_t max_navigators = 1;
        std::uint64_t seed = 42;
        std::uint64_t max_rounds = 30000;
    };

    struct ScenarioError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// Parses and validates a scenario document. Throws ScenarioError.
    [[nodiscard]] Scenario parse_scenario (const std::string &json_text);
    [[nodiscard]] Scenario load_scenario (const std::string &path);
    [[nodiscard]] std::string scenario_to_json (const Scenario &s);

    /// Throws ScenarioError on the first violated constraint.
    void validate (const Scenario &s);

    [[nodiscard]] AgentParams agent_params (const Scenario &s);

    /// Built-in arenas used by the tests and the bundled scenario files.
    [[nodiscard]] Scenario rectangle_scenario (std::size_t n_robots, std::uint64_t seed);
    [[nodiscard]] Scenario l_room_scenario (std::size_t n_robots, std::uint64_t seed);
    [[nodiscard]] Scenario hole_room_scenario (std::size_t n_robots, std::uint64_t seed);

} // namespace mat
