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

#ifndef FDA_ANALYSIS_HPP
#define FDA_ANALYSIS_HPP

#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fda
{
    // ---------------------------------------------------------------- causality

    struct CausalityViolation
    {
        double t = 0.0;
        double r = 0.0;
        double theta = 0.0;
        double power_db = 0.0;
    };

    struct CausalityReport
    {
        bool pass = true;
        std::vector<CausalityViolation> violations;
        double worst_violation_db = -std::numeric_limits<double>::infinity();
        double threshold_db = 0.0;
        double t_start = 0.0;
        std::size_t cells_outside_cone = 0;
    };

    class WrongGridKind : public std::invalid_argument
    {
    public:
        explicit WrongGridKind(const std::string &what) : std::invalid_argument(what) {}
    };

    /*!
     * Flags every time-range cell that lies outside the light cone of the excitation start
     * (emission time t - r/c earlier than window.t_start) yet carries power above threshold_db.
     * The cone test is the same inequality the emission-time gate uses, so a gated simulation
     * cannot report a violation. An unbounded start makes the check vacuous.
     */
    inline CausalityReport check_causality(const PowerGrid &grid, const ExcitationWindow &window, double threshold_db)
    {
        if (grid.fixed.kind != AxisKind::angle || !grid.axis(AxisKind::time) || !grid.axis(AxisKind::range))
            throw WrongGridKind("check_causality: expected a time-range grid");

        CausalityReport report;
        report.threshold_db = threshold_db;
        report.t_start = window.t_start;
        if (!std::isfinite(window.t_start))
            return report;

        const ArrayGeometry &geom = grid.scenario.geometry;
        for (std::size_t i = 0; i < grid.rows(); ++i)
            for (std::size_t j = 0; j < grid.cols(); ++j)
            {
                const SpaceTimePoint p = grid.point(i, j);
                if (!(emission_time(p, geom) < window.t_start))
                    continue;
                ++report.cells_outside_cone;
                if (grid.state(i, j) == CellState::singular)
                    continue;
                const double db = grid.at(i, j);
                if (db > threshold_db)
                {
                    report.violations.push_back({p.t, p.r, p.theta, db});
                    report.worst_violation_db = std::max(report.worst_violation_db, db);
                }
            }
        report.pass = report.violations.empty();
        return report;
    }

    inline CausalityReport check_causality(const PowerGrid &grid, const ExcitationWindow &window)
    {
        return check_causality(grid, window, grid.floor_db + 3.0);
    }

    // ---------------------------------------------------------------- invariance

    struct InvarianceReport
    {
        std::string model;
        double max_relative_deviation = 0.0;
        std::size_t sample_count = 0;
        double tolerance = 0.0;
        bool pass = true;
        std::uint64_t seed = 0;
        std::size_t resamples = 0;
        std::size_t exceedances = 0; // samples above 1e-3
        SpaceTimePoint worst_point;
        double worst_shift = 0.0;
    };

    struct InvarianceSampling
    {
        std::size_t sample_count = 1000;
        double max_shift = 50e-9; // s
        double tolerance = 1e-10;
        std::uint64_t seed = 20180330;
        double t_min = -100e-9;
        double t_max = 100e-9;
        double r_min = 0.0;
        double r_max = 30.0;
        double theta_min = -pi / 2.0;
        double theta_max = pi / 2.0;
    };

    inline constexpr double invariance_magnitude_epsilon = 1e-12;
    inline constexpr double invariance_exceedance_level = 1e-3;

    namespace detail
    {
        // First-order estimate of the change in AF caused by rounding of the emission time
        // t - r/c at p. For the causal law the offsets themselves depend on t - r/c and the
        // estimate grows like 1/den^2 next to a pole.
        inline double rounding_sensitivity(const Scenario &s, const SpaceTimePoint &p)
        {
            const ArrayGeometry &geom = s.geometry;
            const double retarded = emission_time(p, geom);
            const double ulp = std::numeric_limits<double>::epsilon() * std::max(std::abs(p.t), p.r / geom.c);
            const bool retarded_offsets = std::holds_alternative<CausalTimeModulated>(s.model);
            const double spatial = geom.d * std::sin(p.theta) / geom.c;
            const double tau = fda::detail::offset_time_argument(s.model, s.focus, geom, p);
            double bound = 0.0;
            for (int n = -geom.n_half; n <= geom.n_half; ++n)
            {
                if (n == 0)
                    continue;
                const auto df = try_offset_at(s.model, s.focus, geom, n, p, s.pole_epsilon);
                if (!df)
                    return std::numeric_limits<double>::infinity();
                const double den = std::abs(offset_denominator(geom, s.focus, n, tau));
                const double chain = retarded_offsets ? std::abs(retarded + n * spatial) / den : 0.0;
                bound += 2.0 * pi * std::abs(*df) * (1.0 + chain) * ulp;
            }
            return bound;
        }
    }

    /*!
     * Compares AF(t + D, r + c D, theta) with AF(t, r, theta) over seeded random samples and
     * reports the largest relative deviation |diff| / (|AF(t, r, theta)| + eps).
     *
     * Draws are redrawn (and counted in the report) when any element denominator at either point
     * lies within 10 pole epsilons of zero, or when rounding of t - r/c alone could move AF by more
     * than a tenth of the tolerance.
     */
    inline InvarianceReport check_retarded_invariance(const Scenario &scenario, const InvarianceSampling &sampling = {})
    {
        scenario.validate();
        if (scenario.gating != GatingMode::none)
            throw std::invalid_argument("check_retarded_invariance: scenario must be ungated");
        if (!(sampling.max_shift >= 0.0) || !(sampling.tolerance >= 0.0))
            throw std::invalid_argument("check_retarded_invariance: bad sampling parameters");

        InvarianceReport report;
        report.model = model_name(scenario.model);
        report.tolerance = sampling.tolerance;
        report.seed = sampling.seed;

        std::mt19937_64 rng(sampling.seed);
        std::uniform_real_distribution<double> ut(sampling.t_min, sampling.t_max);
        std::uniform_real_distribution<double> ur(sampling.r_min, sampling.r_max);
        std::uniform_real_distribution<double> uth(sampling.theta_min, sampling.theta_max);
        std::uniform_real_distribution<double> ud(0.0, sampling.max_shift);

        const ArrayGeometry &geom = scenario.geometry;
        const double margin = 10.0 * scenario.pole_epsilon;
        const std::size_t max_redraws = 1000 * std::max<std::size_t>(sampling.sample_count, 1);

        while (report.sample_count < sampling.sample_count)
        {
            const SpaceTimePoint p{ut(rng), ur(rng), uth(rng)};
            const double shift = ud(rng);
            const SpaceTimePoint q{p.t + shift, p.r + geom.c * shift, p.theta};

            const FieldSample a = scenario.field(p);
            const FieldSample b = scenario.field(q);
            bool reject = !a.valid || !b.valid ||
                          min_abs_denominator(scenario.model, scenario.focus, geom, p) < margin ||
                          min_abs_denominator(scenario.model, scenario.focus, geom, q) < margin;
            if (!reject)
            {
                const double scale = std::abs(a.value) + invariance_magnitude_epsilon;
                const double predicted = (detail::rounding_sensitivity(scenario, p) +
                                          detail::rounding_sensitivity(scenario, q)) / scale;
                reject = predicted > sampling.tolerance / 10.0;
            }
            if (reject)
            {
                if (++report.resamples > max_redraws)
                    throw std::runtime_error("check_retarded_invariance: sampler cannot avoid poles");
                continue;
            }

            const double dev = std::abs(b.value - a.value) / (std::abs(a.value) + invariance_magnitude_epsilon);
            if (dev > invariance_exceedance_level)
                ++report.exceedances;
            if (dev > report.max_relative_deviation || report.sample_count == 0)
            {
                report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
                report.worst_point = p;
                report.worst_shift = shift;
            }
            ++report.sample_count;
        }
        report.pass = report.max_relative_deviation <= sampling.tolerance;
        return report;
    }

    struct FocusConstancyReport
    {
        InvarianceReport invariance; // max_relative_deviation holds the spread (max - min) / max
        double magnitude = 0.0;      // mean |AF| at the focus
        double min_magnitude = 0.0;
        double max_magnitude = 0.0;
    };

    /*!
     * Samples |AF(t, r1, theta0)| at n_time_samples evenly spaced instants over [0, T] for the
     * naive time-modulated model. Gating is ignored; the property concerns the bare field.
     */
    inline FocusConstancyReport check_naive_focus_constancy(const Scenario &scenario, std::size_t n_time_samples = 1000,
                                                            double tolerance = 1e-9)
    {
        scenario.validate();
        const auto *naive = std::get_if<NaiveTimeModulated>(&scenario.model);
        if (!naive)
            throw std::invalid_argument("check_naive_focus_constancy: requires the naive model");
        if (n_time_samples < 2)
            throw std::invalid_argument("check_naive_focus_constancy: need at least 2 samples");

        FocusConstancyReport out;
        out.invariance.model = model_name(scenario.model);
        out.invariance.tolerance = tolerance;

        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double sum = 0.0;
        for (std::size_t k = 0; k < n_time_samples; ++k)
        {
            const double t = naive->T * static_cast<double>(k) / static_cast<double>(n_time_samples - 1);
            const SpaceTimePoint p{t, scenario.focus.r1, scenario.focus.theta0};
            const FieldSample s = array_factor(scenario.geometry, scenario.model, scenario.focus, scenario.window,
                                               GatingMode::none, p, scenario.pole_epsilon);
            if (!s.valid)
                throw SingularDenominator();
            const double m = std::abs(s.value);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
            sum += m;
        }
        out.min_magnitude = lo;
        out.max_magnitude = hi;
        out.magnitude = sum / static_cast<double>(n_time_samples);
        out.invariance.sample_count = n_time_samples;
        out.invariance.max_relative_deviation = hi > 0.0 ? (hi - lo) / hi : 0.0;
        out.invariance.pass = out.invariance.max_relative_deviation <= tolerance;
        return out;
    }

    // ---------------------------------------------------------------- velocity

    struct VelocityReport
    {
        double slope = 0.0;        // m/s
        double intercept = 0.0;    // m, range at t = 0
        double residual_rms = 0.0; // m
        double relative_error_vs_c = 0.0;
        std::size_t points_used = 0;
    };

    struct VelocityOptions
    {
        double min_peak_db = -3.0;   // slices whose peak is weaker than this are not part of the ridge
        bool skip_boundary = true;   // a peak clipped by the axis edge is not a localized focus
    };

    class DegenerateTrajectory : public std::invalid_argument
    {
    public:
        DegenerateTrajectory() : std::invalid_argument("focus trajectory is degenerate") {}
    };

    // Least-squares fit r*(t) = slope * t + intercept over the usable trajectory points.
    inline VelocityReport estimate_focus_velocity(const FocusTrajectory &traj, double c,
                                                  const VelocityOptions &options = {})
    {
        if (traj.slice_kind != AxisKind::time || traj.argmax_kind != AxisKind::range)
            throw WrongGridKind("estimate_focus_velocity: expected a trajectory of range over time");

        std::vector<double> ts, rs;
        for (const auto &p : traj.points)
        {
            if (p.peak_db < options.min_peak_db || (options.skip_boundary && p.on_boundary))
                continue;
            ts.push_back(p.slice);
            rs.push_back(p.argmax);
        }
        if (ts.size() < 2)
            throw DegenerateTrajectory();

        const double n = static_cast<double>(ts.size());
        double mt = 0.0, mr = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k)
        {
            mt += ts[k];
            mr += rs[k];
        }
        mt /= n;
        mr /= n;
        double stt = 0.0, str = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k)
        {
            stt += (ts[k] - mt) * (ts[k] - mt);
            str += (ts[k] - mt) * (rs[k] - mr);
        }
        if (!(stt > 0.0))
            throw DegenerateTrajectory();

        VelocityReport out;
        out.slope = str / stt;
        out.intercept = mr - out.slope * mt;
        double ss = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k)
        {
            const double e = rs[k] - (out.slope * ts[k] + out.intercept);
            ss += e * e;
        }
        out.residual_rms = std::sqrt(ss / n);
        out.relative_error_vs_c = std::abs(out.slope - c) / c;
        out.points_used = ts.size();
        return out;
    }

    // ---------------------------------------------------------------- comparison

    struct ModelComparison
    {
        PowerGrid naive;
        PowerGrid causal;
        std::vector<double> difference_db; // naive - causal, each on its own normalization
        std::vector<bool> difference_valid;
    };

    // Naive and causal grids for identical parameters and axes. A constant scenario uses the default window T.
    inline ModelComparison compare_models(const Scenario &scenario, const AxisSpec &axis1, const AxisSpec &axis2,
                                          const FixedCoordinate &fixed, const SweepOptions &options = {})
    {
        double T = NaiveTimeModulated{}.T;
        if (const auto *m = std::get_if<NaiveTimeModulated>(&scenario.model))
            T = m->T;
        else if (const auto *m = std::get_if<CausalTimeModulated>(&scenario.model))
            T = m->T;

        Scenario naive = scenario;
        naive.model = NaiveTimeModulated{T};
        Scenario causal = scenario;
        causal.model = CausalTimeModulated{T};

        ModelComparison out{sweep(naive, axis1, axis2, fixed, options), sweep(causal, axis1, axis2, fixed, options), {}, {}};
        const std::size_t total = out.naive.values.size();
        out.difference_db.assign(total, 0.0);
        out.difference_valid.assign(total, true);
        for (std::size_t k = 0; k < total; ++k)
        {
            const bool ok = out.naive.cells[k] != CellState::singular && out.causal.cells[k] != CellState::singular;
            out.difference_valid[k] = ok;
            out.difference_db[k] = ok ? out.naive.values[k] - out.causal.values[k] : 0.0;
        }
        return out;
    }

    // ---------------------------------------------------------------- verification suite

    namespace detail
    {
        inline std::string sci(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", v);
            return buf;
        }
    }

    struct VerificationCheck
    {
        std::string name;
        bool expected_pass = true;
        bool observed_pass = true;
        std::string detail;

        bool ok() const { return expected_pass == observed_pass; }
    };

    struct VerificationInput
    {
        Scenario base;              // geometry, focus (theta0, g, r1, t_m), floor, window
        double modulation_window = 30e-9; // T
        AxisSpec time_axis{AxisKind::time, -100e-9, 50e-9, 601};
        AxisSpec range_axis{AxisKind::range, 0.0, 30.0, 601};
        InvarianceSampling sampling;
        std::size_t constancy_samples = 1000;
        double constancy_tolerance = 1e-9;
        SweepOptions sweep_options;
    };

    struct VerificationResult
    {
        CausalityReport causal_causality;
        CausalityReport naive_causality;
        InvarianceReport constant_invariance;
        InvarianceReport causal_invariance;
        InvarianceReport naive_invariance;
        FocusConstancyReport naive_constancy;
        std::vector<VerificationCheck> checks;

        bool all_ok() const
        {
            return std::all_of(checks.begin(), checks.end(), [](const auto &c)
                               { return c.ok(); });
        }
    };

    /*!
     * Runs the full property suite for one array and focus:
     *  - causal model with emission-time gating stays inside the light cone (expected pass);
     *  - naive model declared excited at t = 0 puts power outside the cone (expected violation);
     *  - constant and causal fields depend on t - r/c only (expected pass);
     *  - naive field does not (expected failure, some deviation above 1e-3);
     *  - naive focus magnitude is constant over [0, T] (expected pass).
     */
    inline VerificationResult run_verification(const VerificationInput &in)
    {
        VerificationResult out;
        const double theta0 = in.base.focus.theta0;
        const double T = in.modulation_window;

        Scenario causal = in.base;
        causal.model = CausalTimeModulated{T};
        causal.gating = GatingMode::emission_time;
        if (!std::isfinite(causal.window.t_start))
            causal.window.t_start = 0.0;
        {
            const PowerGrid g = sweep_time_range(causal, in.time_axis, in.range_axis, theta0, in.sweep_options);
            out.causal_causality = check_causality(g, causal.window);
            out.checks.push_back({"causality/causal-gated", true, out.causal_causality.pass,
                                  std::to_string(out.causal_causality.violations.size()) + " violations"});
        }

        Scenario naive = in.base;
        naive.model = NaiveTimeModulated{T};
        naive.gating = GatingMode::none;
        naive.window = ExcitationWindow{};
        {
            const ExcitationWindow declared{0.0, std::numeric_limits<double>::infinity()};
            const PowerGrid g = sweep_time_range(naive, in.time_axis, in.range_axis, theta0, in.sweep_options);
            out.naive_causality = check_causality(g, declared);
            out.checks.push_back({"causality/naive-declared-t0", false, out.naive_causality.pass,
                                  std::to_string(out.naive_causality.violations.size()) + " violations"});
        }

        Scenario constant = in.base;
        constant.model = ConstantOffsets{};
        constant.gating = GatingMode::none;
        out.constant_invariance = check_retarded_invariance(constant, in.sampling);
        out.checks.push_back({"invariance/constant", true, out.constant_invariance.pass,
                              "max deviation " + detail::sci(out.constant_invariance.max_relative_deviation)});

        Scenario causal_free = causal;
        causal_free.gating = GatingMode::none;
        out.causal_invariance = check_retarded_invariance(causal_free, in.sampling);
        out.checks.push_back({"invariance/causal", true, out.causal_invariance.pass,
                              "max deviation " + detail::sci(out.causal_invariance.max_relative_deviation)});

        out.naive_invariance = check_retarded_invariance(naive, in.sampling);
        // Expected to fail, and by a clear margin rather than rounding noise.
        const bool naive_breaks = out.naive_invariance.exceedances > 0;
        out.checks.push_back({"invariance/naive", false, !naive_breaks,
                              std::to_string(out.naive_invariance.exceedances) + " samples above 1e-3"});

        out.naive_constancy = check_naive_focus_constancy(naive, in.constancy_samples, in.constancy_tolerance);
        out.checks.push_back({"constancy/naive-focus", true, out.naive_constancy.invariance.pass,
                              "spread " + detail::sci(out.naive_constancy.invariance.max_relative_deviation) +
                                  ", |AF| " + detail::sci(out.naive_constancy.magnitude)});
        return out;
    }
}

#endif
