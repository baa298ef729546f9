#include "mat/trace.hpp"

#include "json.hpp"

#include <istream>
#include <ostream>

namespace mat
{
    namespace
    {
        using nlohmann::json;

        json opt_id (const std::optional<RobotId> &v) { return v ? json (*v) : json (nullptr); }

        std::optional<RobotId> read_opt_id (const json &j)
        {
            if (j.is_null ())
                return std::nullopt;
            return j.get<RobotId> ();
        }

        json triangle_json (const TriangleRecord &t)
        {
            return {{"key", {t.key[0], t.key[1], t.key[2]}},
                    {"owner", t.owner},
                    {"hop", t.hop ? json (*t.hop) : json (nullptr)},
                    {"frontier", t.is_frontier},
                    {"kind", std::string (to_string (t.kind))},
                    {"created_round", t.created_round}};
        }

        TriangleRecord read_triangle (const json &j)
        {
            TriangleRecord t;
            const auto &k = j.at ("key");
            t.key = make_key (k.at (0).get<RobotId> (), k.at (1).get<RobotId> (), k.at (2).get<RobotId> ());
            t.owner = j.at ("owner").get<RobotId> ();
            if (!j.at ("hop").is_null ())
                t.hop = j.at ("hop").get<std::uint32_t> ();
            t.is_frontier = j.at ("frontier").get<bool> ();
            t.kind = parse_kind (j.at ("kind").get<std::string> ());
            t.created_round = j.value ("created_round", std::uint64_t{0});
            return t;
        }

        std::map<RobotId, std::set<RobotId>> rebuild_graph (const std::map<RobotId, Point> &positions, const Scenario &sc)
        {
            std::vector<RobotPose> poses;
            for (const auto &[id, p] : positions)
                poses.push_back ({id, {p, 0.0}});
            return build_neighbor_graph (poses, sc.robot, sc.workspace).adjacency;
        }
    } // namespace

    FsmState parse_state (const std::string &name)
    {
        for (auto s : {FsmState::NavInternal, FsmState::ExpandTriangle, FsmState::WallFollow, FsmState::Frontier,
                       FsmState::FrontierWall, FsmState::Internal})
            if (to_string (s) == name)
                return s;
        throw TraceError ("unknown state " + name);
    }

    TriangleKind parse_kind (const std::string &name)
    {
        for (auto k : {TriangleKind::Expansion, TriangleKind::Discovery, TriangleKind::Wall})
            if (to_string (k) == name)
                return k;
        throw TraceError ("unknown triangle kind " + name);
    }

    void TraceWriter::header (const Scenario &s)
    {
        json j{{"type", "header"}, {"version", 1}, {"scenario", json::parse (scenario_to_json (s))}};
        out_ << j.dump () << '\n';
    }

    void TraceWriter::round (const WorldT &w)
    {
        const std::uint64_t r = w.round == 0 ? 0 : w.round - 1;
        for (const auto &robot : w.robots)
        {
            json nbrs = json::array ();
            if (auto it = w.graph.views.find (robot.id); it != w.graph.views.end ())
                for (const auto &e : it->second.neighbors)
                    nbrs.push_back (e.id);
            json owned = json::array ();
            for (const auto &t : robot.state.owned)
                owned.push_back (triangle_json (t));
            json j{{"round", r},
                   {"id", robot.id},
                   {"state", std::string (to_string (robot.state.fsm))},
                   {"pose", {{"x", robot.pose.position.x ()}, {"y", robot.pose.position.y ()}, {"heading", robot.pose.heading}}},
                   {"neighbors", nbrs},
                   {"fnbrs", {{"left", opt_id (robot.state.left)}, {"right", opt_id (robot.state.right)}}},
                   {"owned_triangles", owned},
                   {"msg_bytes", robot.last_message_bytes}};
            out_ << j.dump () << '\n';
        }
    }

    void TraceWriter::footer (const RunResult &r)
    {
        json j{{"type", "end"}, {"rounds", r.rounds}, {"quiescent", r.quiescent}, {"violations", r.violations.size ()}};
        out_ << j.dump () << '\n';
        out_.flush ();
    }

    Trace read_trace (std::istream &in)
    {
        Trace t;
        std::string line;
        bool have_header = false;
        bool have_footer = false;
        std::size_t lineno = 0;
        while (std::getline (in, line))
        {
            ++lineno;
            if (line.empty ())
                continue;
            if (have_footer)
                throw TraceError ("data after the end record");
            json j;
            try
            {
                j = json::parse (line);
            }
            catch (const json::exception &e)
            {
                throw TraceError ("line " + std::to_string (lineno) + " is not valid JSON");
            }
            try
            {
                if (j.contains ("type"))
                {
                    const auto type = j.at ("type").get<std::string> ();
                    if (type == "header")
                    {
                        t.scenario = parse_scenario (j.at ("scenario").dump ());
                        have_header = true;
                    }
                    else if (type == "end")
                    {
                        t.rounds = j.at ("rounds").get<std::uint64_t> ();
                        have_footer = true;
                    }
                    continue;
                }
                if (!have_header)
                    throw TraceError ("trace has no header");
                TraceRobot r;
                r.round = j.at ("round").get<std::uint64_t> ();
                r.id = j.at ("id").get<RobotId> ();
                r.state = parse_state (j.at ("state").get<std::string> ());
                const auto &p = j.at ("pose");
                r.pose = {{p.at ("x").get<double> (), p.at ("y").get<double> ()}, p.at ("heading").get<double> ()};
                r.neighbors = j.at ("neighbors").get<std::vector<RobotId>> ();
                r.fnbrs = {read_opt_id (j.at ("fnbrs").at ("left")), read_opt_id (j.at ("fnbrs").at ("right"))};
                for (const auto &o : j.at ("owned_triangles"))
                    r.owned.push_back (read_triangle (o));
                r.msg_bytes = j.at ("msg_bytes").get<std::size_t> ();
                t.records.push_back (std::move (r));
            }
            catch (const json::exception &e)
            {
                throw TraceError ("line " + std::to_string (lineno) + ": " + e.what ());
            }
            catch (const ScenarioError &e)
            {
                throw TraceError (std::string ("bad scenario in header: ") + e.what ());
            }
        }
        if (!have_header)
            throw TraceError ("trace has no header");
        if (!have_footer)
            throw TraceError ("trace is truncated (no end record)");
        return t;
    }

    Snapshot final_snapshot (const Trace &t)
    {
        Snapshot s;
        s.base_edge = make_edge (0, 1);
        if (t.records.empty ())
            return s;
        std::uint64_t last = 0;
        for (const auto &r : t.records)
            last = std::max (last, r.round);
        s.round = last;
        for (const auto &r : t.records)
        {
            if (r.round != last)
                continue;
            s.positions[r.id] = r.pose.position;
            s.states[r.id] = r.state;
            if (r.state == FsmState::Frontier || r.state == FsmState::FrontierWall)
                s.links[r.id] = r.fnbrs;
            s.triangles.insert (s.triangles.end (), r.owned.begin (), r.owned.end ());
        }
        s.graph = rebuild_graph (s.positions, t.scenario);
        return s;
    }

    void write_snapshot (std::ostream &out, const Snapshot &s, const Scenario &scenario)
    {
        json robots = json::array ();
        for (const auto &[id, p] : s.positions)
        {
            const auto links = s.links.count (id) ? s.links.at (id) : FrontierLinks{};
            robots.push_back ({{"id", id},
                               {"x", p.x ()},
                               {"y", p.y ()},
                               {"state", std::string (to_string (s.states.at (id)))},
                               {"left", opt_id (links.left)},
                               {"right", opt_id (links.right)}});
        }
        json tris = json::array ();
        for (const auto &t : s.triangles)
            tris.push_back (triangle_json (t));
        json j{{"scenario", json::parse (scenario_to_json (scenario))},
               {"round", s.round},
               {"base_edge", {s.base_edge.first, s.base_edge.second}},
               {"robots", robots},
               {"triangles", tris}};
        out << j.dump (1) << '\n';
    }

    SnapshotFile read_snapshot (std::istream &in)
    {
        SnapshotFile f;
        try
        {
            const json j = json::parse (in);
            f.scenario = parse_scenario (j.at ("scenario").dump ());
            f.snapshot.round = j.at ("round").get<std::uint64_t> ();
            f.snapshot.base_edge = make_edge (j.at ("base_edge").at (0).get<RobotId> (), j.at ("base_edge").at (1).get<RobotId> ());
            for (const auto &r : j.at ("robots"))
            {
                const auto id = r.at ("id").get<RobotId> ();
                f.snapshot.positions[id] = {r.at ("x").get<double> (), r.at ("y").get<double> ()};
                f.snapshot.states[id] = parse_state (r.at ("state").get<std::string> ());
                FrontierLinks l{read_opt_id (r.at ("left")), read_opt_id (r.at ("right"))};
                if (l.left || l.right)
                    f.snapshot.links[id] = l;
            }
            for (const auto &t : j.at ("triangles"))
                f.snapshot.triangles.push_back (read_triangle (t));
        }
        catch (const json::exception &e)
        {
            throw TraceError (std::string ("malformed snapshot: ") + e.what ());
        }
        catch (const ScenarioError &e)
        {
            throw TraceError (std::string ("bad scenario in snapshot: ") + e.what ());
        }
        f.snapshot.graph = rebuild_graph (f.snapshot.positions, f.scenario);
        return f;
    }

} // namespace mat
