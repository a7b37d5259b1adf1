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

#ifndef FDA_CLI_HPP
#define FDA_CLI_HPP

#include "io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fda::cli
{
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_invalid = 1;
    inline constexpr int exit_property_failure = 2;

    namespace detail
    {
        inline void emit(const std::string &text, const std::string &out_path, std::ostream &out)
        {
            if (out_path.empty())
            {
                out << text;
                out.flush();
                return;
            }
            std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
            if (!f)
                throw std::runtime_error("cannot open " + out_path + " for writing");
            f << text;
            if (!f)
                throw std::runtime_error("write to " + out_path + " failed");
        }

        // Inputs for the property suite derived from one configuration.
        inline VerificationInput verification_input(const io::SimulationConfig &cfg, unsigned threads)
        {
            VerificationInput in;
            in.base = io::to_scenario(cfg);
            const double c = in.base.geometry.c;
            if (cfg.focus.r1_m)
                in.base.focus.r1 = *cfg.focus.r1_m;
            else
                in.base.focus.r1 = c * std::abs(*cfg.focus.t_m_ns * 1e-9);
            if (!(in.base.focus.r1 > 0.0))
                throw io::ValidationError("focus.r1_m", "verify needs a positive focus range (r1_m or nonzero t_m_ns)");
            if (!cfg.focus.t_m_ns)
                in.base.focus.t_m = -in.base.focus.r1 / c;
            in.modulation_window = cfg.model.T_ns.value_or(NaiveTimeModulated{}.T * 1e9) * 1e-9;
            in.time_axis = io::axis(cfg, AxisKind::time);
            in.range_axis = io::axis(cfg, AxisKind::range);
            in.sampling.seed = cfg.seed;
            in.sampling.t_min = in.time_axis.min;
            in.sampling.t_max = in.time_axis.max;
            in.sampling.r_min = in.range_axis.min;
            in.sampling.r_max = in.range_axis.max;
            in.sweep_options.threads = threads;
            return in;
        }

        inline std::string comparison_csv(const ModelComparison &cmp, const std::string &config_echo)
        {
            const PowerGrid &a = cmp.naive;
            std::string text = "# " + config_echo + "\n";
            text += "# naive_reference_magnitude=" + io::exact(a.reference_magnitude) +
                    " causal_reference_magnitude=" + io::exact(cmp.causal.reference_magnitude) +
                    " fixed=" + axis_name(a.fixed.kind) + ":" + io::exact(a.fixed.value) + "\n";
            text += std::string(io::column_name(a.axis1.kind)) + "," + io::column_name(a.axis2.kind) +
                    ",naive_db,causal_db,diff_db\n";
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j)
                {
                    const std::size_t k = a.index(i, j);
                    auto cell = [](const PowerGrid &g, std::size_t k)
                    { return g.cells[k] == CellState::singular ? std::string("nan") : io::exact(g.values[k]); };
                    text += io::sig9(io::to_engineering(a.axis1.kind, a.axis1.value(i))) + "," +
                            io::sig9(io::to_engineering(a.axis2.kind, a.axis2.value(j))) + "," + cell(cmp.naive, k) +
                            "," + cell(cmp.causal, k) + "," +
                            (cmp.difference_valid[k] ? io::exact(cmp.difference_db[k]) : std::string("nan")) + "\n";
                }
            return text;
        }
    }

    /*!
     * Entry point of the fdasim command line.
     *
     *   simulate range-angle --config F --t <time>     range-angle grid at a fixed instant
     *   simulate time-range  --config F --theta <ang>  time-range grid at a fixed angle
     *   focus   --grid F                               ridge extraction and velocity fit
     *   verify  --config F                             causality / invariance / constancy suite
     *   compare --config F [--theta <ang>]             naive vs causal time-range grids
     *
     * Returns 0 on success, 1 on bad input, 2 when verify finds an unexpected outcome.
     */
    inline int cli_main(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
    {
        CLI::App app{"Frequency diverse array beampattern simulator"};
        app.require_subcommand(1);

        std::string config_path, grid_path, out_path, format = "text", slice_axis, t_text, theta_text;
        unsigned threads = 0;
        double min_peak_db = VelocityOptions{}.min_peak_db;

        auto *simulate = app.add_subcommand("simulate", "Sweep the power pattern over a 2-D slice");
        simulate->require_subcommand(1);
        auto *range_angle = simulate->add_subcommand("range-angle", "Range-angle projection at a fixed time");
        range_angle->add_option("--config", config_path, "Configuration file")->required();
        range_angle->add_option("--t", t_text, "Observation time, e.g. 0ns, 30ns")->required();
        range_angle->add_option("--out", out_path, "Output file (default: standard output)");
        range_angle->add_option("--threads", threads, "Worker threads, 0 = all cores");
        auto *time_range = simulate->add_subcommand("time-range", "Time-range projection at a fixed angle");
        time_range->add_option("--config", config_path, "Configuration file")->required();
        time_range->add_option("--theta", theta_text, "Angle, e.g. -30deg")->required();
        time_range->add_option("--out", out_path, "Output file (default: standard output)");
        time_range->add_option("--threads", threads, "Worker threads, 0 = all cores");

        auto *focus = app.add_subcommand("focus", "Extract the focus ridge from a grid file");
        focus->add_option("--grid", grid_path, "Grid file written by simulate")->required();
        focus->add_option("--slice-axis", slice_axis, "time, range or angle (default: time)");
        focus->add_option("--min-peak-db", min_peak_db, "Weakest slice peak used in the velocity fit");
        focus->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
        focus->add_option("--out", out_path, "Output file (default: standard output)");

        auto *verify = app.add_subcommand("verify", "Run the causality and invariance property suite");
        verify->add_option("--config", config_path, "Configuration file")->required();
        verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
        verify->add_option("--out", out_path, "Output file (default: standard output)");
        verify->add_option("--threads", threads, "Worker threads, 0 = all cores");

        auto *compare = app.add_subcommand("compare", "Naive vs causal time-range grids");
        compare->add_option("--config", config_path, "Configuration file")->required();
        compare->add_option("--theta", theta_text, "Angle (default: the steering angle)");
        compare->add_option("--out", out_path, "Output file (default: standard output)");
        compare->add_option("--threads", threads, "Worker threads, 0 = all cores");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            out << app.help();
            return exit_ok;
        }
        catch (const CLI::CallForAllHelp &e)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return exit_ok;
        }
        catch (const CLI::ParseError &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_invalid;
        }

        try
        {
            if (*range_angle || *time_range)
            {
                const io::SimulationConfig cfg = io::load_config_file(config_path);
                const Scenario scenario = io::to_scenario(cfg);
                const SweepOptions opts{threads};
                PowerGrid grid;
                if (*range_angle)
                    grid = sweep_range_angle(scenario, io::axis(cfg, AxisKind::range), io::axis(cfg, AxisKind::angle),
                                             io::parse_quantity(t_text, AxisKind::time), opts);
                else
                    grid = sweep_time_range(scenario, io::axis(cfg, AxisKind::time), io::axis(cfg, AxisKind::range),
                                            io::parse_quantity(theta_text, AxisKind::angle), opts);
                grid.config_echo = io::to_json(cfg).dump();
                detail::emit(io::grid_to_string(grid), out_path, out);
                return exit_ok;
            }

            if (*focus)
            {
                const PowerGrid grid = io::read_grid_file(grid_path);
                const AxisKind kind = slice_axis.empty() ? AxisKind::time : io::parse_axis_kind(slice_axis);
                const FocusTrajectory traj = find_focus(grid, kind);
                std::optional<VelocityReport> velocity;
                if (traj.slice_kind == AxisKind::time && traj.argmax_kind == AxisKind::range)
                {
                    try
                    {
                        velocity = estimate_focus_velocity(traj, grid.scenario.geometry.c, {min_peak_db, true});
                    }
                    catch (const DegenerateTrajectory &)
                    {
                    }
                }
                if (format == "json")
                {
                    io::json doc{{"trajectory", io::to_json(traj)}};
                    doc["velocity"] = velocity ? io::to_json(*velocity) : io::json(nullptr);
                    detail::emit(doc.dump(2) + "\n", out_path, out);
                }
                else
                    detail::emit(io::to_text(traj, velocity), out_path, out);
                return exit_ok;
            }

            if (*verify)
            {
                const io::SimulationConfig cfg = io::load_config_file(config_path);
                const VerificationResult result = run_verification(detail::verification_input(cfg, threads));
                if (format == "json")
                    detail::emit(io::to_json(result).dump(2) + "\n", out_path, out);
                else
                    detail::emit(io::to_text(result), out_path, out);
                return result.all_ok() ? exit_ok : exit_property_failure;
            }

            if (*compare)
            {
                const io::SimulationConfig cfg = io::load_config_file(config_path);
                Scenario scenario = io::to_scenario(cfg);
                if (!cfg.focus.r1_m && cfg.focus.t_m_ns)
                    scenario.focus.r1 = scenario.geometry.c * std::abs(scenario.focus.t_m);
                const double theta = theta_text.empty() ? scenario.focus.theta0
                                                        : io::parse_quantity(theta_text, AxisKind::angle);
                const ModelComparison cmp = compare_models(scenario, io::axis(cfg, AxisKind::time),
                                                           io::axis(cfg, AxisKind::range),
                                                           {AxisKind::angle, theta}, {threads});
                detail::emit(detail::comparison_csv(cmp, io::to_json(cfg).dump()), out_path, out);
                return exit_ok;
            }
        }
        catch (const io::ValidationError &e)
        {
            err << "validation error: " << e.what() << "\n";
            return exit_invalid;
        }
        catch (const io::ParseError &e)
        {
            err << "parse error: " << e.what() << "\n";
            return exit_invalid;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_invalid;
        }
        return exit_invalid;
    }
}

#endif
