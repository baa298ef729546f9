// mat_sim: triangulate / navigate / metrics

#include "mat/coverage.hpp"
#include "mat/navigation.hpp"
#include "mat/simulation.hpp"
#include "mat/trace.hpp"

#include "CLI11.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

namespace fs = std::filesystem;
using namespace mat;

namespace
{
    void configure_logging ()
    {
        const char *env = std::getenv ("MAT_LOG_LEVEL");
        const std::string level = env ? env : "error";
        if (level == "debug")
            spdlog::set_level (spdlog::level::debug);
        else if (level == "info")
            spdlog::set_level (spdlog::level::info);
        else
            spdlog::set_level (spdlog::level::err);
    }

    std::string key_str (const TriKey &k)
    {
        return std::to_string (k[0]) + "-" + std::to_string (k[1]) + "-" + std::to_string (k[2]);
    }

    std::ofstream open_out (const fs::path &p)
    {
        std::ofstream out (p);
        if (!out)
            throw std::runtime_error ("cannot write " + p.string ());
        out.precision (10);
        return out;
    }

    void write_triangles_csv (const fs::path &p, const CoverageReport &r)
    {
        auto out = open_out (p);
        out << "key,area,min_angle,maxmin_ratio,kind\n";
        for (const auto &row : r.rows)
            out << key_str (row.key) << ',' << row.metrics.area << ',' << row.metrics.min_angle << ',' << row.metrics.edge_ratio
                << ',' << to_string (row.kind) << '\n';
    }

    void write_histogram (const fs::path &p, const Histogram &h)
    {
        auto out = open_out (p);
        out << "bin_lo,bin_hi,count\n";
        for (std::size_t i = 0; i < h.counts.size (); ++i)
            out << h.lo + i * h.width << ',' << h.lo + (i + 1) * h.width << ',' << h.counts[i] << '\n';
    }

    struct StretchSummary
    {
        double mean = 0.0;
        double max = 0.0;
    };

    void write_metrics_csv (const fs::path &p, std::size_t n_robots, const CoverageReport &r, const std::optional<StretchSummary> &st)
    {
        auto out = open_out (p);
        out << "trial,n_robots,covered_area,coverage_fraction,rho,alpha,mean_stretch,max_stretch,c,c_prime\n";
        const auto b = stretch_bounds (r.fatness);
        out << 0 << ',' << n_robots << ',' << r.covered_area << ',' << r.coverage_fraction << ',' << r.fatness.rho << ','
            << r.fatness.alpha << ',';
        if (st)
            out << st->mean << ',' << st->max;
        else
            out << ',';
        out << ',' << b.c << ',' << b.c_prime << '\n';
    }

    int cmd_triangulate (const std::string &scenario_path, const fs::path &out_dir, std::optional<std::uint64_t> rounds,
                         std::optional<std::uint64_t> seed)
    {
        Scenario sc;
        try
        {
            sc = load_scenario (scenario_path);
            if (seed)
                sc.seed = *seed;
            if (rounds)
                sc.max_rounds = *rounds;
            validate (sc);
        }
        catch (const ScenarioError &e)
        {
            std::cerr << "invalid scenario: " << e.what () << '\n';
            return 1;
        }
        fs::create_directories (out_dir);
        auto trace = open_out (out_dir / "trace.jsonl");
        TraceWriter writer (trace);
        writer.header (sc);
        Simulation sim (sc);
        const auto result = sim.run ([&] (const WorldT &w) { writer.round (w); });
        writer.footer (result);

        auto snap = open_out (out_dir / "snapshot.json");
        write_snapshot (snap, result.final_snapshot, sc);

        if (!result.final_snapshot.triangles.empty ())
        {
            const auto report = coverage_metrics (result.final_snapshot, sc.workspace);
            write_metrics_csv (out_dir / "metrics.csv", sc.n_robots, report, std::nullopt);
            write_triangles_csv (out_dir / "triangles.csv", report);
            std::cout << "rounds " << result.rounds << ", triangles " << result.final_snapshot.triangles.size () << ", coverage "
                      << report.coverage_fraction << ", rho " << report.fatness.rho << ", alpha " << report.fatness.alpha << '\n';
        }
        if (!result.violations.empty ())
        {
            for (const auto &v : result.violations)
                std::cerr << "invariant violation: " << v << '\n';
            return 2;
        }
        return 0;
    }

    int cmd_navigate (const std::string &snapshot_path, std::size_t trials, std::uint64_t seed, const fs::path &out_dir)
    {
        std::ifstream in (snapshot_path);
        if (!in)
        {
            std::cerr << "cannot open " << snapshot_path << '\n';
            return 1;
        }
        SnapshotFile f;
        try
        {
            f = read_snapshot (in);
        }
        catch (const TraceError &e)
        {
            std::cerr << e.what () << '\n';
            return 1;
        }
        const auto &snap = f.snapshot;
        const auto dual = extract_dual_graph (snap.triangles);
        if (dual.vertices.size () < 2 || dual_bfs (dual, dual.vertices.front ()).size () != dual.vertices.size ())
        {
            std::cerr << "dual graph is disconnected or too small\n";
            return 2;
        }
        // navigation draws from its own stream so it never shares state with the triangulation
        std::seed_seq seq{seed, std::uint64_t{0x6e6176}};
        std::mt19937_64 rng (seq);
        const auto results = navigation_trials (snap, f.scenario.workspace, trials, rng);

        fs::create_directories (out_dir);
        auto out = open_out (out_dir / "stretch.csv");
        out << "trial,start,goal,trajectory,greedy,exact,stretch,moves,good_moves,reached\n";
        double sum = 0.0, mx = 0.0;
        std::size_t moves = 0, good = 0;
        for (std::size_t i = 0; i < results.size (); ++i)
        {
            const auto &t = results[i];
            out << i << ',' << key_str (t.start) << ',' << key_str (t.goal) << ',' << t.trajectory << ',' << t.greedy << ','
                << t.exact << ',' << t.stretch << ',' << t.moves << ',' << t.good_moves << ',' << (t.reached ? 1 : 0) << '\n';
            sum += t.stretch;
            mx = std::max (mx, t.stretch);
            moves += t.moves;
            good += t.good_moves;
        }
        const auto report = coverage_metrics (snap, f.scenario.workspace);
        const StretchSummary st{results.empty () ? 0.0 : sum / results.size (), mx};
        write_metrics_csv (out_dir / "metrics.csv", snap.positions.size (), report, st);
        std::cout << "mean stretch " << st.mean << ", max " << st.max << ", correctness "
                  << (moves ? static_cast<double> (good) / moves : 1.0) << '\n';
        return 0;
    }

    int cmd_metrics (const std::string &trace_path, const fs::path &out_dir)
    {
        std::ifstream in (trace_path);
        if (!in)
        {
            std::cerr << "cannot open " << trace_path << '\n';
            return 1;
        }
        Trace t;
        try
        {
            t = read_trace (in);
        }
        catch (const TraceError &e)
        {
            std::cerr << e.what () << '\n';
            return 1;
        }
        const auto snap = final_snapshot (t);
        if (snap.triangles.empty ())
        {
            std::cerr << "trace contains no triangles\n";
            return 1;
        }
        const auto report = coverage_metrics (snap, t.scenario.workspace);
        fs::create_directories (out_dir);
        write_metrics_csv (out_dir / "metrics.csv", t.scenario.n_robots, report, std::nullopt);
        write_triangles_csv (out_dir / "triangles.csv", report);
        write_histogram (out_dir / "hist_area.csv", report.area_hist);
        write_histogram (out_dir / "hist_min_angle.csv", report.angle_hist);
        write_histogram (out_dir / "hist_maxmin_ratio.csv", report.ratio_hist);
        auto pie = open_out (out_dir / "coverage.csv");
        pie << "part,area\n"
            << "covered," << report.covered_area << '\n'
            << "uncovered," << std::max (0.0, report.region_area - report.covered_area) << '\n';
        std::cout << "triangles " << report.rows.size () << ", coverage " << report.coverage_fraction << '\n';
        return 0;
    }
} // namespace

int main (int argc, char **argv)
{
    configure_logging ();
    CLI::App app{"Max-area triangulation simulator"};
    app.require_subcommand (1);

    std::string scenario, snapshot, trace, out = "out";
    std::optional<std::uint64_t> rounds, seed;
    std::size_t trials = 34;
    std::uint64_t nav_seed = 1;

    auto *tri = app.add_subcommand ("triangulate", "run a triangulation and write trace, snapshot and metrics");
    tri->add_option ("--scenario", scenario, "scenario JSON")->required ();
    tri->add_option ("--out", out, "output directory")->required ();
    tri->add_option ("--rounds", rounds, "round limit");
    tri->add_option ("--seed", seed, "override the scenario seed");

    auto *nav = app.add_subcommand ("navigate", "navigation trials on a snapshot");
    nav->add_option ("--snapshot", snapshot, "snapshot JSON")->required ();
    nav->add_option ("--trials", trials, "number of trials");
    nav->add_option ("--seed", nav_seed, "random seed");
    nav->add_option ("--out", out, "output directory")->required ();

    auto *met = app.add_subcommand ("metrics", "coverage and quality metrics from a trace");
    met->add_option ("--trace", trace, "trace JSONL")->required ();
    met->add_option ("--out", out, "output directory")->required ();

    try
    {
        app.parse (argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit (e) == 0 ? 0 : 1;
    }

    try
    {
        if (*tri)
            return cmd_triangulate (scenario, out, rounds, seed);
        if (*nav)
            return cmd_navigate (snapshot, trials, nav_seed, out);
        return cmd_metrics (trace, out);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what () << '\n';
        return 2;
    }
}
