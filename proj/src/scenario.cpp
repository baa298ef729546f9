#include "mat/scenario.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace mat
{
    namespace
    {
        using nlohmann::json;

        Point to_point (const json &j)
        {
            if (!j.is_array () || j.size () != 2)
                throw ScenarioError ("a point must be [x, y]");
            return {j.at (0).get<double> (), j.at (1).get<double> ()};
        }

        std::vector<Point> to_ring (const json &j)
        {
            if (!j.is_array ())
                throw ScenarioError ("a ring must be a list of points");
            std::vector<Point> ring;
            for (const auto &p : j)
                ring.push_back (to_point (p));
            return ring;
        }

        json from_ring (const std::vector<Point> &ring)
        {
            json out = json::array ();
            for (const auto &p : ring)
                out.push_back ({p.x (), p.y ()});
            return out;
        }

        Scenario base_scenario (std::vector<Point> outer, std::vector<std::vector<Point>> holes, std::size_t n, std::uint64_t seed)
        {
            Scenario s;
            s.workspace.outer = std::move (outer);
            s.workspace.holes = std::move (holes);
            s.workspace.base_edge = {Point (1.275, 0.06), Point (1.725, 0.06)};
            s.n_robots = n;
            s.seed = seed;
            return s;
        }
    } // namespace

    void validate (const Scenario &s)
    {
        if (s.n_robots < 3)
            throw ScenarioError ("n_robots must be at least 3 (two base robots and one navigator)");
        if (s.max_navigators < 1)
            throw ScenarioError ("max_navigators must be at least 1");
        if (!(s.quality_k > 0.0 && s.quality_k <= kTwoPi))
            throw ScenarioError ("quality_k must lie in (0, 2π]");
        if (!(s.goal_tol > 0.0 && s.goal_tol < kPi / 3.0))
            throw ScenarioError ("goal_tol must lie in (0, π/3)");
        if (s.robot.speed <= 0.0 || s.robot.diameter <= 0.0 || s.robot.r_max <= 0.0)
            throw ScenarioError ("robot speed, diameter and r_max must be positive");
        try
        {
            validate (s.workspace, s.robot);
        }
        catch (const std::invalid_argument &e)
        {
            throw ScenarioError (e.what ());
        }
    }

    Scenario parse_scenario (const std::string &json_text)
    {
        Scenario s;
        try
        {
            const json j = json::parse (json_text);
            s.name = j.value ("name", s.name);
            s.workspace.outer = to_ring (j.at ("outer"));
            if (j.contains ("holes"))
                for (const auto &h : j.at ("holes"))
                    s.workspace.holes.push_back (to_ring (h));
            const auto &be = j.at ("base_edge");
            if (!be.is_array () || be.size () != 2)
                throw ScenarioError ("base_edge must hold two points");
            s.workspace.base_edge = {to_point (be.at (0)), to_point (be.at (1))};
            if (j.contains ("robot"))
            {
                const auto &r = j.at ("robot");
                s.robot.diameter = r.value ("diameter", s.robot.diameter);
                s.robot.r_max = r.value ("r_max", s.robot.r_max);
                s.robot.bearing_resolution = r.value ("bearing_resolution", s.robot.bearing_resolution);
                s.robot.wall_sense_range = r.value ("wall_sense_range", s.robot.wall_sense_range);
                s.robot.speed = r.value ("speed", s.robot.speed);
            }
            const auto n = j.at ("n_robots").get<long long> ();
            if (n < 0)
                throw ScenarioError ("n_robots must be non-negative");
            s.n_robots = static_cast<std::size_t> (n);
            s.seed = j.value ("seed", s.seed);
            s.quality_k = j.value ("quality_k", s.quality_k);
            s.goal_tol = j.value ("goal_tol", s.goal_tol);
            s.max_navigators = j.value ("max_navigators", s.max_navigators);
            s.max_rounds = j.value ("max_rounds", s.max_rounds);
        }
        catch (const json::exception &e)
        {
            throw ScenarioError (std::string ("malformed scenario: ") + e.what ());
        }
        validate (s);
        return s;
    }

    Scenario load_scenario (const std::string &path)
    {
        std::ifstream in (path);
        if (!in)
            throw ScenarioError ("cannot open scenario file " + path);
        std::stringstream ss;
        ss << in.rdbuf ();
        return parse_scenario (ss.str ());
    }

    std::string scenario_to_json (const Scenario &s)
    {
        json j;
        j["name"] = s.name;
        j["outer"] = from_ring (s.workspace.outer);
        j["holes"] = json::array ();
        for (const auto &h : s.workspace.holes)
            j["holes"].push_back (from_ring (h));
        j["base_edge"] = from_ring ({s.workspace.base_edge[0], s.workspace.base_edge[1]});
        j["robot"] = {{"diameter", s.robot.diameter},
                      {"r_max", s.robot.r_max},
                      {"bearing_resolution", s.robot.bearing_resolution},
                      {"wall_sense_range", s.robot.wall_sense_range},
                      {"speed", s.robot.speed}};
        j["n_robots"] = s.n_robots;
        j["seed"] = s.seed;
        j["quality_k"] = s.quality_k;
        j["goal_tol"] = s.goal_tol;
        j["max_navigators"] = s.max_navigators;
        j["max_rounds"] = s.max_rounds;
        return j.dump ();
    }

    AgentParams agent_params (const Scenario &s)
    {
        AgentParams p;
        p.quality_k = s.quality_k;
        p.goal_tol = s.goal_tol;
        p.resolution = s.robot.bearing_resolution;
        p.spec = s.robot;
        const auto codec = make_codec_params (s.n_robots, s.robot.bearing_resolution);
        // all-ones in the hop field means "unset"
        p.max_hop = static_cast<std::uint32_t> ((std::uint64_t{1} << (codec.id_bits + 1)) - 2);
        return p;
    }

    Scenario rectangle_scenario (std::size_t n_robots, std::uint64_t seed)
    {
        auto s = base_scenario ({{0, 0}, {3, 0}, {3, 2.5}, {0, 2.5}}, {}, n_robots, seed);
        s.name = "rectangle";
        return s;
    }

    Scenario l_room_scenario (std::size_t n_robots, std::uint64_t seed)
    {
        auto s = base_scenario ({{0, 0}, {3, 0}, {3, 1.5}, {1.5, 1.5}, {1.5, 3}, {0, 3}}, {}, n_robots, seed);
        s.name = "l_room";
        return s;
    }

    Scenario hole_room_scenario (std::size_t n_robots, std::uint64_t seed)
    {
        auto s = base_scenario ({{0, 0}, {3, 0}, {3, 3}, {0, 3}}, {{{1.2, 1.2}, {1.2, 1.8}, {1.8, 1.8}, {1.8, 1.2}}}, n_robots, seed);
        s.name = "hole_room";
        return s;
    }

} // namespace mat
