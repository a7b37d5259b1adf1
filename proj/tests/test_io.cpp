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

#include <fda/io.hpp>

#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

using namespace fda;
using fda::test::config_path;
using fda::test::deg;
using fda::test::ns;
using fda::test::paper_scenario;
using io::json;

namespace
{
    json minimal_constant()
    {
        return json::parse(R"({
            "array": {"n_half": 2, "f0_hz": 3e9},
            "focus": {"theta0_deg": -30, "g": [1.8, 4.4], "t_m_ns": -50},
            "model": {"type": "constant"}
        })");
    }

    std::string validation_path(const json &doc)
    {
        try
        {
            io::load_config(doc);
        }
        catch (const io::ValidationError &e)
        {
            return e.path();
        }
        return "<accepted>";
    }

    std::size_t count_lines(const std::string &s)
    {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
    }
}

TEST(Config, LoadsBundledFile)
{
    const auto cfg = io::load_config_file(config_path("paper-fig1a.json"));
    EXPECT_EQ(cfg.array.n_half, 5);
    EXPECT_DOUBLE_EQ(cfg.array.d_m, 0.05);
    EXPECT_EQ(cfg.model.type, "constant");
    EXPECT_EQ(*cfg.focus.t_m_ns, -50.0);
    EXPECT_EQ(cfg.seed, 20180330u);

    const Scenario s = io::to_scenario(cfg);
    EXPECT_NEAR(s.focus.t_m, -50 * ns, 1e-24);
    EXPECT_NEAR(s.focus.theta0, -30 * deg, 1e-15);
    EXPECT_EQ(s.gating, GatingMode::none);
    EXPECT_EQ(io::axis(cfg, AxisKind::range).step(), 0.05);
}

TEST(Config, AllBundledConfigsLoad)
{
    for (const char *name : {"paper-fig1a.json", "paper-fig1b.json", "paper-fig1c.json", "paper-fig2a.json",
                             "paper-fig2b.json", "paper-fig8a-naive.json"})
    {
        const auto cfg = io::load_config_file(config_path(name));
        EXPECT_NO_THROW(io::to_scenario(cfg).validate()) << name;
    }
}

TEST(Config, DefaultsAreFilledIn)
{
    const auto cfg = io::load_config(minimal_constant());
    EXPECT_DOUBLE_EQ(cfg.array.d_m, 0.05);
    EXPECT_EQ(cfg.array.c_m_per_s, 3e8);
    EXPECT_EQ(cfg.array.phi_deg, std::vector<double>(5, 0.0));
    EXPECT_EQ(cfg.excitation.gating, "none");
    EXPECT_EQ(cfg.render.floor_db, -50.0);
    EXPECT_EQ(cfg.grid.range_m.count, 601u);
}

TEST(Config, ErrorsCarryFieldPath)
{
    json doc = minimal_constant();
    doc["focus"].erase("t_m_ns");
    EXPECT_EQ(validation_path(doc), "focus.t_m_ns");

    doc = minimal_constant();
    doc["model"] = {{"type", "naive"}, {"T_ns", 30}};
    EXPECT_EQ(validation_path(doc), "focus.r1_m");

    doc["focus"]["r1_m"] = 15;
    doc["model"].erase("T_ns");
    EXPECT_EQ(validation_path(doc), "model.T_ns");

    doc = minimal_constant();
    doc["focus"]["g"] = {1.0};
    EXPECT_EQ(validation_path(doc), "focus.g");

    doc = minimal_constant();
    doc["array"]["phi_deg"] = {0, 0};
    EXPECT_EQ(validation_path(doc), "array.phi_deg");

    doc = minimal_constant();
    doc["excitation"] = {{"gating", "sometimes"}};
    EXPECT_EQ(validation_path(doc), "excitation.gating");

    doc = minimal_constant();
    doc["model"]["type"] = "quantum";
    EXPECT_EQ(validation_path(doc), "model.type");
}

TEST(Config, UnknownFieldsAreRejected)
{
    json doc = minimal_constant();
    doc["array"]["spacing"] = 0.05;
    EXPECT_THROW(io::load_config(doc), io::ValidationError);
    doc = minimal_constant();
    doc["extra"] = 1;
    EXPECT_THROW(io::load_config(doc), io::ValidationError);
}

TEST(Config, MalformedJsonIsParseError)
{
    EXPECT_THROW(io::load_config(std::string_view("{\"array\": ")), io::ParseError);
}

TEST(Config, RoundTripsThroughJson)
{
    for (const char *name : {"paper-fig1a.json", "paper-fig2b.json", "paper-fig8a-naive.json"})
    {
        const auto cfg = io::load_config_file(config_path(name));
        const auto again = io::load_config(std::string_view(io::to_json(cfg).dump()));
        EXPECT_EQ(cfg, again) << name;
    }
}

TEST(Config, ScenarioRoundTrip)
{
    Scenario s = paper_scenario(CausalTimeModulated{25 * ns}, true);
    s.window = {-90 * ns, 40 * ns};
    s.gating = GatingMode::observation_time;
    const Scenario back = io::to_scenario(io::load_config(std::string_view(io::to_json(io::config_from_scenario(s)).dump())));
    EXPECT_EQ(back.gating, s.gating);
    EXPECT_NEAR(back.window.t_start, s.window.t_start, 1e-22);
    EXPECT_NEAR(back.focus.r1, 15.0, 1e-12);
    EXPECT_NEAR(std::get<CausalTimeModulated>(back.model).T, 25 * ns, 1e-22);
    for (std::size_t k = 0; k < s.geometry.phi.size(); ++k)
        EXPECT_NEAR(back.geometry.phi[k], s.geometry.phi[k], 1e-9);
}

TEST(Quantity, UnitsAndBareNumbers)
{
    EXPECT_DOUBLE_EQ(io::parse_quantity("30ns", AxisKind::time), 30e-9);
    EXPECT_DOUBLE_EQ(io::parse_quantity("-90ns", AxisKind::time), -90e-9);
    EXPECT_DOUBLE_EQ(io::parse_quantity("1.5us", AxisKind::time), 1.5e-6);
    EXPECT_DOUBLE_EQ(io::parse_quantity("2e-9s", AxisKind::time), 2e-9);
    EXPECT_DOUBLE_EQ(io::parse_quantity("0", AxisKind::time), 0.0);
    EXPECT_DOUBLE_EQ(io::parse_quantity("-30deg", AxisKind::angle), -30 * deg);
    EXPECT_DOUBLE_EQ(io::parse_quantity("0.5rad", AxisKind::angle), 0.5);
    EXPECT_THROW(io::parse_quantity("30 parsecs", AxisKind::time), io::ParseError);
    EXPECT_THROW(io::parse_quantity("nan", AxisKind::angle), io::ParseError);
}

TEST(GridCsv, TwoByTwoLayout)
{
    const Scenario s = paper_scenario(ConstantOffsets{}, true);
    const PowerGrid g = sweep_range_angle(s, {AxisKind::range, 10.0, 20.0, 2}, {AxisKind::angle, -30 * deg, 30 * deg, 2}, 0.0);
    const std::string text = io::grid_to_string(g);
    EXPECT_EQ(count_lines(text), 2u + 1u + 4u);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# {", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# reference_magnitude=", 0), 0u);
    EXPECT_NE(line.find("fixed=time:0"), std::string::npos);
    std::getline(in, line);
    EXPECT_EQ(line, "r_m,theta_deg,power_db");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("10,-30,", 0), 0u);
}

TEST(GridCsv, TimeRangeHeader)
{
    const Scenario s = paper_scenario(ConstantOffsets{});
    const PowerGrid g = sweep_time_range(s, {AxisKind::time, 0.0, 10 * ns, 3}, {AxisKind::range, 0.0, 1.0, 2}, 0.0);
    std::istringstream in(io::grid_to_string(g));
    std::string line;
    for (int k = 0; k < 3; ++k)
        std::getline(in, line);
    EXPECT_EQ(line, "t_ns,r_m,power_db");
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("5,0,", 0), 0u);
}

TEST(GridCsv, ReadBackIsBitForBit)
{
    Scenario s = paper_scenario(CausalTimeModulated{}, true);
    s.window.t_start = -20 * ns;
    s.gating = GatingMode::emission_time;
    const PowerGrid g = sweep_time_range(s, {AxisKind::time, -100 * ns, 50 * ns, 76}, {AxisKind::range, 0.0, 30.0, 61}, -30 * deg);
    std::stringstream ss(io::grid_to_string(g));
    const PowerGrid back = io::read_grid(ss);
    ASSERT_EQ(back.values.size(), g.values.size());
    EXPECT_EQ(std::memcmp(back.values.data(), g.values.data(), g.values.size() * sizeof(double)), 0);
    EXPECT_EQ(back.cells, g.cells);
    EXPECT_EQ(back.reference_magnitude, g.reference_magnitude);
    EXPECT_EQ(back.axis1.min, g.axis1.min);
    EXPECT_EQ(back.axis2.max, g.axis2.max);
    EXPECT_EQ(back.fixed.value, g.fixed.value);
    EXPECT_EQ(io::grid_to_string(back), io::grid_to_string(g));
}

TEST(GridCsv, SingularCellsWrittenAsNan)
{
    Scenario s = paper_scenario(CausalTimeModulated{}, true);
    s.focus.r1 = 0.0;
    const double pole = -(s.geometry.d / s.geometry.c) * std::sin(s.focus.theta0);
    const PowerGrid g = sweep_time_range(s, {AxisKind::time, pole, pole + 10 * ns, 3}, {AxisKind::range, 0.0, 3.0, 3}, 0.0);
    ASSERT_EQ(g.state(0, 0), CellState::singular);
    const std::string text = io::grid_to_string(g);
    EXPECT_NE(text.find(",nan\n"), std::string::npos);
    std::stringstream ss(text);
    const PowerGrid back = io::read_grid(ss);
    EXPECT_EQ(back.state(0, 0), CellState::singular);
    EXPECT_EQ(back.cells, g.cells);
}

TEST(GridCsv, TruncatedOrMalformedFilesRaise)
{
    const Scenario s = paper_scenario(ConstantOffsets{});
    const PowerGrid g = sweep_time_range(s, {AxisKind::time, 0.0, 10 * ns, 3}, {AxisKind::range, 0.0, 1.0, 2}, 0.0);
    std::string text = io::grid_to_string(g);
    std::stringstream truncated(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    EXPECT_THROW(io::read_grid(truncated), io::ParseError);
    std::stringstream no_header("hello\n");
    EXPECT_THROW(io::read_grid(no_header), io::ParseError);
}

TEST(Reports, JsonShapes)
{
    VerificationInput in;
    in.base = paper_scenario(ConstantOffsets{}, true);
    in.time_axis.count = 61;
    in.range_axis.count = 61;
    in.sampling.sample_count = 50;
    in.constancy_samples = 50;
    const auto res = run_verification(in);
    const json doc = io::to_json(res);
    ASSERT_TRUE(doc.contains("checks"));
    EXPECT_EQ(doc["checks"].size(), 6u);
    const std::string text = io::to_text(res);
    EXPECT_NE(text.find("invariance/naive"), std::string::npos);
}
