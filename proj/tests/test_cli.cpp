// SPDX-License-Identifier: Apache-2.0
//
// fdasim: frequency diverse array beampattern simulator
// Copyright (C) 2026 The fdasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "support.hpp"

#include <fda/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace fda;
using fda::test::config_path;
using fda::test::deg;

namespace
{
    struct Run
    {
        int code;
        std::string out;
        std::string err;
    };

    Run run(std::vector<std::string> args)
    {
        args.insert(args.begin(), "fdasim");
        std::vector<const char *> argv;
        for (const auto &a : args)
            argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return {code, out.str(), err.str()};
    }

    // Small-grid copy of a bundled config so the tests stay fast.
    std::string shrunk(const std::string &name, std::size_t count = 121)
    {
        auto doc = io::json::parse(io::read_text_file(config_path(name)));
        doc["grid"]["time_ns"]["count"] = count;
        doc["grid"]["range_m"]["count"] = count;
        doc["grid"]["angle_deg"]["count"] = count;
        const auto path = std::filesystem::temp_directory_path() / ("fdasim-cli-" + name);
        std::ofstream(path) << doc.dump();
        return path.string();
    }

    std::string temp(const std::string &name)
    {
        return (std::filesystem::temp_directory_path() / ("fdasim-cli-" + name)).string();
    }
}

TEST(Cli, RangeAngleFocusAtDesignPoint)
{
    const auto r = run({"simulate", "range-angle", "--config", config_path("paper-fig1a.json"), "--t", "0ns", "--threads", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const PowerGrid g = io::read_grid(in);
    const auto p = find_focus(g, AxisKind::time).points.at(0);
    EXPECT_NEAR(p.argmax, 15.0, 0.1);
    EXPECT_NEAR(p.argmax_secondary, -30 * deg, 1 * deg);
}

TEST(Cli, TimeRangeWithGatingLeavesFloorOutsideCone)
{
    const auto r = run({"simulate", "time-range", "--config", shrunk("paper-fig2b.json"), "--theta", "-30deg"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const PowerGrid g = io::read_grid(in);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (emission_time(g.point(i, j), g.scenario.geometry) < 0.0)
            {
                EXPECT_EQ(g.at(i, j), g.floor_db);
            }
}

TEST(Cli, OutputIsByteIdenticalAcrossRunsAndThreadCounts)
{
    const std::string cfg = shrunk("paper-fig2a.json");
    const auto a = run({"simulate", "time-range", "--config", cfg, "--theta", "-30deg", "--threads", "1"});
    const auto b = run({"simulate", "time-range", "--config", cfg, "--theta", "-30deg", "--threads", "5"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, FocusReadsWrittenGrid)
{
    const std::string grid = temp("fig1c-grid.csv");
    ASSERT_EQ(run({"simulate", "time-range", "--config", shrunk("paper-fig1c.json", 301), "--theta", "-30deg", "--out", grid}).code, 0);
    const auto r = run({"focus", "--grid", grid, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = io::json::parse(r.out);
    ASSERT_FALSE(doc["velocity"].is_null());
    EXPECT_NEAR(doc["velocity"]["slope_m_per_s"].get<double>() / 3e8, 1.0, 5e-3);

    const auto text = run({"focus", "--grid", grid});
    EXPECT_EQ(text.code, 0);
    EXPECT_EQ(text.out.rfind("t_ns,r_m,peak_db,on_boundary\n", 0), 0u);
    EXPECT_NE(text.out.find("# velocity"), std::string::npos);
}

TEST(Cli, VerifyPassesOnBundledConfig)
{
    const auto r = run({"verify", "--config", shrunk("paper-fig1a.json"), "--format", "json"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const auto doc = io::json::parse(r.out);
    EXPECT_TRUE(doc["all_ok"].get<bool>());
}

TEST(Cli, CompareWritesFiveColumns)
{
    const auto r = run({"compare", "--config", shrunk("paper-fig8a-naive.json", 31)});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line, "t_ns,r_m,naive_db,causal_db,diff_db");
    std::size_t rows = 0;
    while (std::getline(in, line))
        ++rows;
    EXPECT_EQ(rows, 31u * 31u);
}

TEST(Cli, BadInputExitsWithOne)
{
    EXPECT_EQ(run({"simulate", "range-angle", "--config", "/nonexistent.json", "--t", "0"}).code, 1);
    EXPECT_EQ(run({"simulate", "range-angle", "--config", config_path("paper-fig1a.json")}).code, 1);
    EXPECT_EQ(run({"simulate", "range-angle", "--config", config_path("paper-fig1a.json"), "--t", "soon"}).code, 1);
    EXPECT_EQ(run({"bogus"}).code, 1);

    const std::string bad = temp("bad.json");
    std::ofstream(bad) << R"({"array": {"n_half": 1, "f0_hz": 3e9}, "focus": {"theta0_deg": 0, "g": [1]}, "model": {"type": "constant"}})";
    const auto r = run({"verify", "--config", bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("focus.t_m_ns"), std::string::npos);
}

TEST(Cli, HelpExitsCleanly)
{
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}
