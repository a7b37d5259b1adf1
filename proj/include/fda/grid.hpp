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

#ifndef FDA_GRID_HPP
#define FDA_GRID_HPP

#include "array_factor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fda
{
    enum class AxisKind
    {
        time,
        range,
        angle,
    };

    inline const char *axis_name(AxisKind kind)
    {
        switch (kind)
        {
        case AxisKind::time:
            return "time";
        case AxisKind::range:
            return "range";
        default:
            return "angle";
        }
    }

    // Uniform axis with inclusive endpoints, SI units (s, m, rad).
    struct AxisSpec
    {
        AxisKind kind = AxisKind::range;
        double min = 0.0;
        double max = 1.0;
        std::size_t count = 2;

        double step() const { return (max - min) / static_cast<double>(count - 1); }

        double value(std::size_t i) const
        {
            if (i + 1 == count)
                return max;
            return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
        }

        void validate() const
        {
            if (!(min < max) || !std::isfinite(min) || !std::isfinite(max))
                throw std::invalid_argument(std::string("AxisSpec(") + axis_name(kind) + "): min must be < max");
            if (count < 2)
                throw std::invalid_argument(std::string("AxisSpec(") + axis_name(kind) + "): count must be >= 2");
        }

        bool operator==(const AxisSpec &) const = default;
    };

    // The coordinate held constant over a 2-D slice.
    struct FixedCoordinate
    {
        AxisKind kind = AxisKind::time;
        double value = 0.0;
        bool operator==(const FixedCoordinate &) const = default;
    };

    // Everything needed to evaluate the field at a point, in SI units.
    struct Scenario
    {
        ArrayGeometry geometry;
        FocusSpec focus;
        OffsetModel model = ConstantOffsets{};
        ExcitationWindow window;
        GatingMode gating = GatingMode::none;
        double floor_db = default_floor_db;
        double pole_epsilon = default_pole_epsilon;

        void validate() const
        {
            geometry.validate();
            focus.validate(geometry);
            fda::validate(model);
            window.validate();
            if (!(floor_db < 0.0))
                throw std::invalid_argument("Scenario: floor_db must be negative");
            if (!(pole_epsilon > 0.0))
                throw std::invalid_argument("Scenario: pole_epsilon must be positive");
        }

        FieldSample field(const SpaceTimePoint &p) const
        {
            return array_factor(geometry, model, focus, window, gating, p, pole_epsilon);
        }

        bool operator==(const Scenario &) const = default;
    };

    enum class CellState : std::uint8_t
    {
        ok,
        gated,    // outside the excitation window, power is the floor
        singular, // offset law evaluated at its pole, no power value
    };

    struct PowerGrid
    {
        AxisSpec axis1;
        AxisSpec axis2;
        FixedCoordinate fixed;
        std::vector<double> values;   // dB, row-major over (axis1, axis2)
        std::vector<CellState> cells; // same layout as values
        double reference_magnitude = 1.0;
        double floor_db = default_floor_db;
        Scenario scenario;
        std::string config_echo; // resolved configuration document, if known

        std::size_t rows() const { return axis1.count; }
        std::size_t cols() const { return axis2.count; }
        std::size_t index(std::size_t i, std::size_t j) const { return i * axis2.count + j; }
        double at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
        CellState state(std::size_t i, std::size_t j) const { return cells[index(i, j)]; }
        bool valid(std::size_t i, std::size_t j) const { return state(i, j) != CellState::singular; }

        SpaceTimePoint point(std::size_t i, std::size_t j) const
        {
            SpaceTimePoint p;
            assign(p, fixed.kind, fixed.value);
            assign(p, axis1.kind, axis1.value(i));
            assign(p, axis2.kind, axis2.value(j));
            return p;
        }

        const AxisSpec *axis(AxisKind kind) const
        {
            if (axis1.kind == kind)
                return &axis1;
            if (axis2.kind == kind)
                return &axis2;
            return nullptr;
        }

        static void assign(SpaceTimePoint &p, AxisKind kind, double v)
        {
            switch (kind)
            {
            case AxisKind::time:
                p.t = v;
                break;
            case AxisKind::range:
                p.r = v;
                break;
            default:
                p.theta = v;
            }
        }
    };

    class AllSamplesInvalid : public std::runtime_error
    {
    public:
        AllSamplesInvalid() : std::runtime_error("every grid cell is gated or singular") {}
    };

    class EmptyGrid : public std::runtime_error
    {
    public:
        EmptyGrid() : std::runtime_error("grid has no usable cells") {}
    };

    struct SweepOptions
    {
        unsigned threads = 1; // 0 selects the hardware concurrency
    };

    namespace detail
    {
        inline unsigned resolve_threads(unsigned requested, std::size_t rows)
        {
            unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
            return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(rows, 1)));
        }

        // Runs body(i) for every row, partitioned into contiguous blocks.
        template <typename Body>
        void for_each_row(std::size_t rows, unsigned threads, Body &&body)
        {
            const unsigned workers = resolve_threads(threads, rows);
            if (workers <= 1)
            {
                for (std::size_t i = 0; i < rows; ++i)
                    body(i);
                return;
            }
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            const std::size_t block = (rows + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w)
            {
                const std::size_t lo = w * block;
                const std::size_t hi = std::min(rows, lo + block);
                if (lo >= hi)
                    break;
                pool.emplace_back([lo, hi, &body]
                                  { for (std::size_t i = lo; i < hi; ++i) body(i); });
            }
        }
    }

    /*!
     * Samples the array factor over axis1 x axis2 with the third coordinate held fixed and
     * converts to dB normalized to the largest magnitude among non-gated, non-singular cells.
     *
     * Each cell is an independent evaluation; the reference magnitude is reduced afterwards
     * in index order, so the result does not depend on options.threads.
     */
    inline PowerGrid sweep(const Scenario &scenario, const AxisSpec &axis1, const AxisSpec &axis2,
                           const FixedCoordinate &fixed, const SweepOptions &options = {})
    {
        scenario.validate();
        axis1.validate();
        axis2.validate();
        if (axis1.kind == axis2.kind || fixed.kind == axis1.kind || fixed.kind == axis2.kind)
            throw std::invalid_argument("sweep: axes and fixed coordinate must be distinct kinds");

        PowerGrid grid;
        grid.axis1 = axis1;
        grid.axis2 = axis2;
        grid.fixed = fixed;
        grid.floor_db = scenario.floor_db;
        grid.scenario = scenario;

        const std::size_t total = axis1.count * axis2.count;
        std::vector<double> magnitude(total, 0.0);
        grid.cells.assign(total, CellState::ok);

        detail::for_each_row(axis1.count, options.threads, [&](std::size_t i)
                             {
            for (std::size_t j = 0; j < axis2.count; ++j)
            {
                const std::size_t k = grid.index(i, j);
                const FieldSample s = scenario.field(grid.point(i, j));
                if (s.gated)
                    grid.cells[k] = CellState::gated;
                else if (!s.valid)
                    grid.cells[k] = CellState::singular;
                else
                    magnitude[k] = std::abs(s.value);
            } });

        double reference = 0.0;
        bool any = false;
        for (std::size_t k = 0; k < total; ++k)
        {
            if (grid.cells[k] != CellState::ok)
                continue;
            any = true;
            reference = std::max(reference, magnitude[k]);
        }
        if (!any || !(reference > 0.0))
            throw AllSamplesInvalid();
        grid.reference_magnitude = reference;

        grid.values.assign(total, scenario.floor_db);
        for (std::size_t k = 0; k < total; ++k)
        {
            if (grid.cells[k] != CellState::ok || magnitude[k] == 0.0)
                continue;
            grid.values[k] = std::max(20.0 * std::log10(magnitude[k] / reference), scenario.floor_db);
        }
        return grid;
    }

    // Range-angle projection at a fixed observation time.
    inline PowerGrid sweep_range_angle(const Scenario &scenario, const AxisSpec &range, const AxisSpec &angle,
                                       double t_fixed, const SweepOptions &options = {})
    {
        if (range.kind != AxisKind::range || angle.kind != AxisKind::angle)
            throw std::invalid_argument("sweep_range_angle: expected range and angle axes");
        return sweep(scenario, range, angle, {AxisKind::time, t_fixed}, options);
    }

    // Time-range projection at a fixed angle.
    inline PowerGrid sweep_time_range(const Scenario &scenario, const AxisSpec &time, const AxisSpec &range,
                                      double theta_fixed, const SweepOptions &options = {})
    {
        if (time.kind != AxisKind::time || range.kind != AxisKind::range)
            throw std::invalid_argument("sweep_time_range: expected time and range axes");
        return sweep(scenario, time, range, {AxisKind::angle, theta_fixed}, options);
    }

    struct FocusPoint
    {
        double slice = 0.0;  // coordinate identifying the slice
        double argmax = 0.0; // location of the peak along the searched axis
        double argmax_secondary = std::numeric_limits<double>::quiet_NaN(); // second coordinate for 2-D slices
        double peak_db = 0.0;
        bool on_boundary = false; // peak sits on an edge of the searched axis
    };

    struct FocusTrajectory
    {
        AxisKind slice_kind = AxisKind::time;
        AxisKind argmax_kind = AxisKind::range;
        AxisKind secondary_kind = AxisKind::angle; // only meaningful for 2-D slices
        std::vector<FocusPoint> points;
        std::vector<double> omitted_slices; // slices without any usable cell
    };

    /*!
     * Per-slice argmax of a power grid. Gated and singular cells are skipped; ties go to the
     * smallest index. When slice_axis is the grid's fixed coordinate the whole grid is one
     * slice and the peak is 2-D (argmax along axis1, argmax_secondary along axis2).
     */
    inline FocusTrajectory find_focus(const PowerGrid &grid, AxisKind slice_axis)
    {
        if (grid.values.empty())
            throw EmptyGrid();

        auto usable = [&](std::size_t i, std::size_t j)
        { return grid.state(i, j) == CellState::ok; };

        FocusTrajectory traj;
        traj.slice_kind = slice_axis;

        if (slice_axis == grid.fixed.kind)
        {
            traj.argmax_kind = grid.axis1.kind;
            traj.secondary_kind = grid.axis2.kind;
            bool found = false;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < grid.rows(); ++i)
                for (std::size_t j = 0; j < grid.cols(); ++j)
                    if (usable(i, j) && (!found || grid.at(i, j) > grid.at(bi, bj)))
                    {
                        found = true;
                        bi = i;
                        bj = j;
                    }
            if (!found)
                throw EmptyGrid();
            FocusPoint fp;
            fp.slice = grid.fixed.value;
            fp.argmax = grid.axis1.value(bi);
            fp.argmax_secondary = grid.axis2.value(bj);
            fp.peak_db = grid.at(bi, bj);
            fp.on_boundary = bi == 0 || bi + 1 == grid.rows() || bj == 0 || bj + 1 == grid.cols();
            traj.points.push_back(fp);
            return traj;
        }

        const bool by_rows = slice_axis == grid.axis1.kind;
        if (!by_rows && slice_axis != grid.axis2.kind)
            throw std::invalid_argument("find_focus: slice axis is not part of the grid");
        const AxisSpec &slice_ax = by_rows ? grid.axis1 : grid.axis2;
        const AxisSpec &search_ax = by_rows ? grid.axis2 : grid.axis1;
        traj.argmax_kind = search_ax.kind;

        for (std::size_t s = 0; s < slice_ax.count; ++s)
        {
            bool found = false;
            std::size_t best = 0;
            double best_db = 0.0;
            for (std::size_t k = 0; k < search_ax.count; ++k)
            {
                const std::size_t i = by_rows ? s : k;
                const std::size_t j = by_rows ? k : s;
                if (usable(i, j) && (!found || grid.at(i, j) > best_db))
                {
                    found = true;
                    best = k;
                    best_db = grid.at(i, j);
                }
            }
            if (!found)
            {
                traj.omitted_slices.push_back(slice_ax.value(s));
                continue;
            }
            FocusPoint fp;
            fp.slice = slice_ax.value(s);
            fp.argmax = search_ax.value(best);
            fp.peak_db = best_db;
            fp.on_boundary = best == 0 || best + 1 == search_ax.count;
            traj.points.push_back(fp);
        }
        if (traj.points.empty())
            throw EmptyGrid();
        return traj;
    }
}

#endif
