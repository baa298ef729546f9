#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{
    int run (const std::string &args)
    {
        const std::string cmd = std::string (MAT_SIM_PATH) + " " + args + " >/dev/null 2>&1";
        const int status = std::system (cmd.c_str ());
        return WIFEXITED (status) ? WEXITSTATUS (status) : -1;
    }

    std::string slurp (const fs::path &p)
    {
        std::ifstream in (p);
        std::stringstream ss;
        ss << in.rdbuf ();
        return ss.str ();
    }

    std::size_t line_count (const fs::path &p)
    {
        std::ifstream in (p);
        std::size_t n = 0;
        std::string line;
        while (std::getline (in, line))
            ++n;
        return n;
    }

    class Cli : public ::testing::Test
    {
      protected:
        static void SetUpTestSuite ()
        {
            dir_ = fs::temp_directory_path () / ("mat_cli_test_" + std::to_string (::getpid ()));
            fs::remove_all (dir_);
            fs::create_directories (dir_);
            status_ = run ("triangulate --scenario " + scenario ("rectangle") + " --out " + (dir_ / "tri").string ());
        }
        static void TearDownTestSuite () { fs::remove_all (dir_); }
        static std::string scenario (const std::string &name) { return std::string (MAT_SCENARIO_DIR) + "/" + name + ".json"; }
        static fs::path dir_;
        static int status_;
    };
    fs::path Cli::dir_;
    int Cli::status_ = -1;
} // namespace

TEST_F (Cli, TriangulateWritesOutputs)
{
    EXPECT_EQ (status_, 0);
    for (const char *f : {"trace.jsonl", "snapshot.json", "metrics.csv", "triangles.csv"})
        EXPECT_TRUE (fs::exists (dir_ / "tri" / f)) << f;
    std::ifstream m (dir_ / "tri" / "metrics.csv");
    std::string header;
    std::getline (m, header);
    EXPECT_EQ (header, "trial,n_robots,covered_area,coverage_fraction,rho,alpha,mean_stretch,max_stretch,c,c_prime");
    std::ifstream t (dir_ / "tri" / "triangles.csv");
    std::getline (t, header);
    EXPECT_EQ (header, "key,area,min_angle,maxmin_ratio,kind");
}

TEST_F (Cli, RerunGivesIdenticalTrace)
{
    ASSERT_EQ (run ("triangulate --scenario " + scenario ("rectangle") + " --out " + (dir_ / "again").string ()), 0);
    EXPECT_EQ (slurp (dir_ / "tri" / "trace.jsonl"), slurp (dir_ / "again" / "trace.jsonl"));
}

TEST_F (Cli, TwoRobotsIsAValidationError)
{
    auto j = json::parse (slurp (scenario ("rectangle")));
    j["n_robots"] = 2;
    std::ofstream (dir_ / "two.json") << j.dump ();
    EXPECT_EQ (run ("triangulate --scenario " + (dir_ / "two.json").string () + " --out " + (dir_ / "two").string ()), 1);
}

TEST_F (Cli, MissingArgumentsFail)
{
    EXPECT_EQ (run (""), 1);
    EXPECT_EQ (run ("triangulate --out " + (dir_ / "x").string ()), 1);
}

TEST_F (Cli, NavigateWritesOneRowPerTrial)
{
    const auto out = dir_ / "nav";
    ASSERT_EQ (run ("navigate --snapshot " + (dir_ / "tri" / "snapshot.json").string () + " --trials 34 --seed 3 --out " + out.string ()), 0);
    EXPECT_EQ (line_count (out / "stretch.csv"), 35u);
    EXPECT_TRUE (fs::exists (out / "metrics.csv"));
}

TEST_F (Cli, NavigateRejectsDisconnectedDual)
{
    auto j = json::parse (slurp (dir_ / "tri" / "snapshot.json"));
    // keep two triangles with no shared edge
    json kept = json::array ();
    for (const auto &t : j["triangles"])
    {
        bool touches = false;
        for (const auto &k : kept)
        {
            int shared = 0;
            for (const auto &a : t["key"])
                for (const auto &b : k["key"])
                    shared += a == b;
            touches = touches || shared >= 2;
        }
        if (!touches && kept.size () < 2)
            kept.push_back (t);
    }
    ASSERT_EQ (kept.size (), 2u);
    j["triangles"] = kept;
    std::ofstream (dir_ / "split.json") << j.dump ();
    EXPECT_EQ (run ("navigate --snapshot " + (dir_ / "split.json").string () + " --trials 3 --seed 1 --out " + (dir_ / "split").string ()), 2);
}

TEST_F (Cli, MetricsFromTrace)
{
    const auto out = dir_ / "met";
    ASSERT_EQ (run ("metrics --trace " + (dir_ / "tri" / "trace.jsonl").string () + " --out " + out.string ()), 0);
    for (const char *f : {"metrics.csv", "triangles.csv", "hist_area.csv", "hist_min_angle.csv", "hist_maxmin_ratio.csv", "coverage.csv"})
        EXPECT_TRUE (fs::exists (out / f)) << f;
    // histogram bins add up to the triangle count
    std::ifstream h (out / "hist_area.csv");
    std::string line;
    std::getline (h, line);
    std::size_t total = 0;
    while (std::getline (h, line))
        total += std::stoul (line.substr (line.rfind (',') + 1));
    EXPECT_EQ (total, line_count (out / "triangles.csv") - 1);
}

TEST_F (Cli, TruncatedTraceFails)
{
    auto text = slurp (dir_ / "tri" / "trace.jsonl");
    text.resize (text.size () / 2);
    std::ofstream (dir_ / "cut.jsonl") << text;
    EXPECT_EQ (run ("metrics --trace " + (dir_ / "cut.jsonl").string () + " --out " + (dir_ / "cut").string ()), 1);
}
