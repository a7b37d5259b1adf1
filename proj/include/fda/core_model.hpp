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

#ifndef FDA_CORE_MODEL_HPP
#define FDA_CORE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace fda
{
    inline constexpr double speed_of_light = 3.0e8;           // m/s, exact value used throughout
    inline constexpr double default_pole_epsilon = 1.0e-15;   // s
    inline constexpr double pi = std::numbers::pi;

    // Linear array of 2N+1 isotropic elements indexed n = -N..N.
    struct ArrayGeometry
    {
        int n_half = 0;                  // N
        double f0 = 3.0e9;               // carrier of the center element, Hz
        double d = 0.05;                 // spacing, m
        std::vector<double> phi = {0.0}; // static phases for n = -N..N, rad
        double c = speed_of_light;       // propagation speed, m/s

        int element_count() const { return 2 * n_half + 1; }

        // Static phase of element n.
        double phase(int n) const { return phi[static_cast<std::size_t>(n + n_half)]; }

        // Half-wavelength spacing and zero phases.
        static ArrayGeometry make(int n_half, double f0, double c = speed_of_light)
        {
            ArrayGeometry g;
            g.n_half = n_half;
            g.f0 = f0;
            g.c = c;
            g.d = c / (2.0 * f0);
            g.phi.assign(static_cast<std::size_t>(2 * std::max(n_half, 0) + 1), 0.0);
            g.validate();
            return g;
        }

        void validate() const
        {
            if (n_half < 0)
                throw std::invalid_argument("ArrayGeometry: n_half must be >= 0");
            if (!(f0 > 0.0) || !std::isfinite(f0))
                throw std::invalid_argument("ArrayGeometry: f0 must be positive");
            if (!(d > 0.0) || !std::isfinite(d))
                throw std::invalid_argument("ArrayGeometry: d must be positive");
            if (!(c > 0.0) || !std::isfinite(c))
                throw std::invalid_argument("ArrayGeometry: c must be positive");
            if (phi.size() != static_cast<std::size_t>(element_count()))
                throw std::invalid_argument("ArrayGeometry: phi must have 2N+1 entries");
        }

        bool operator==(const ArrayGeometry &) const = default;
    };

    // Steering angle, optimized factors and focus parameters.
    // g holds g_1..g_N; g_0 = 0 and g_{-n} = g_n are implied.
    struct FocusSpec
    {
        double theta0 = 0.0;    // rad
        std::vector<double> g;  // n = 1..N
        double r1 = 0.0;        // m, naive / causal laws
        double t_m = 0.0;       // s, constant law

        double factor(int n) const
        {
            if (n == 0)
                return 0.0;
            return g[static_cast<std::size_t>(std::abs(n) - 1)];
        }

        void validate(const ArrayGeometry &geom) const
        {
            if (g.size() != static_cast<std::size_t>(geom.n_half))
                throw std::invalid_argument("FocusSpec: g must have exactly N entries");
            if (!(std::abs(theta0) <= pi / 2.0))
                throw std::invalid_argument("FocusSpec: |theta0| must be <= pi/2");
            if (!std::isfinite(r1) || !std::isfinite(t_m))
                throw std::invalid_argument("FocusSpec: r1 and t_m must be finite");
        }

        bool operator==(const FocusSpec &) const = default;
    };

    // Offset law evaluated with a fixed emission-time parameter t_m.
    struct ConstantOffsets
    {
        bool operator==(const ConstantOffsets &) const = default;
    };

    // Time-modulated law evaluated at the observation time t.
    struct NaiveTimeModulated
    {
        double T = 30e-9; // modulation window, s
        bool operator==(const NaiveTimeModulated &) const = default;
    };

    // Time-modulated law evaluated at the emission time t - r/c.
    struct CausalTimeModulated
    {
        double T = 30e-9;
        bool operator==(const CausalTimeModulated &) const = default;
    };

    using OffsetModel = std::variant<ConstantOffsets, NaiveTimeModulated, CausalTimeModulated>;

    inline std::string model_name(const OffsetModel &model)
    {
        switch (model.index())
        {
        case 0:
            return "constant";
        case 1:
            return "naive";
        default:
            return "causal";
        }
    }

    inline void validate(const OffsetModel &model)
    {
        std::visit([](const auto &m)
                   {
            if constexpr (!std::is_same_v<std::decay_t<decltype(m)>, ConstantOffsets>)
                if (!(m.T > 0.0))
                    throw std::invalid_argument("OffsetModel: T must be positive"); },
                   model);
    }

    // Emission-time interval; infinite bounds mean "always radiating".
    struct ExcitationWindow
    {
        double t_start = -std::numeric_limits<double>::infinity();
        double t_end = std::numeric_limits<double>::infinity();

        bool contains(double t) const { return t >= t_start && t <= t_end; }

        void validate() const
        {
            if (!(t_start < t_end))
                throw std::invalid_argument("ExcitationWindow: t_start must be < t_end");
        }

        bool operator==(const ExcitationWindow &) const = default;
    };

    struct SpaceTimePoint
    {
        double t = 0.0;     // s
        double r = 0.0;     // m
        double theta = 0.0; // rad
    };

    // Thrown by offset_at when the offset law is evaluated at its pole.
    class SingularDenominator : public std::domain_error
    {
    public:
        SingularDenominator() : std::domain_error("frequency offset denominator is singular") {}
    };

    // Time at which the signal observed at p left the array.
    inline double emission_time(const SpaceTimePoint &p, const ArrayGeometry &geom)
    {
        return p.t - p.r / geom.c;
    }

    namespace detail
    {
        inline double offset_time_argument(const OffsetModel &model, const FocusSpec &focus,
                                           const ArrayGeometry &geom, const SpaceTimePoint &p)
        {
            switch (model.index())
            {
            case 0:
                return focus.t_m;
            case 1:
                return p.t - focus.r1 / geom.c;
            default:
                return emission_time(p, geom) - focus.r1 / geom.c;
            }
        }
    }

    // Denominator of the offset law for element n at time argument tau.
    inline double offset_denominator(const ArrayGeometry &geom, const FocusSpec &focus, int n, double tau)
    {
        return tau + (n * geom.d / geom.c) * std::sin(focus.theta0);
    }

    // Frequency offset of element n, or nullopt at the pole.
    //   df_n = (g_n - n d f0 sin(theta0) / c) / (tau + (n d / c) sin(theta0))
    // where tau is t - r1/c (naive), (t - r/c) - r1/c (causal) or t_m (constant).
    inline std::optional<double> try_offset_at(const OffsetModel &model, const FocusSpec &focus,
                                               const ArrayGeometry &geom, int n, const SpaceTimePoint &p,
                                               double pole_epsilon = default_pole_epsilon)
    {
        if (n == 0)
            return 0.0;
        const double sin0 = std::sin(focus.theta0);
        const double tau = detail::offset_time_argument(model, focus, geom, p);
        const double den = tau + (n * geom.d / geom.c) * sin0;
        if (!(std::abs(den) >= pole_epsilon))
            return std::nullopt;
        const double num = focus.factor(n) - n * geom.d * geom.f0 * sin0 / geom.c;
        return num / den;
    }

    // Throwing form of try_offset_at.
    inline double offset_at(const OffsetModel &model, const FocusSpec &focus, const ArrayGeometry &geom,
                            int n, const SpaceTimePoint &p, double pole_epsilon = default_pole_epsilon)
    {
        if (n < -geom.n_half || n > geom.n_half)
            throw std::out_of_range("offset_at: element index outside [-N, N]");
        auto v = try_offset_at(model, focus, geom, n, p, pole_epsilon);
        if (!v)
            throw SingularDenominator();
        return *v;
    }

    // Smallest |denominator| over all elements n != 0 at point p.
    inline double min_abs_denominator(const OffsetModel &model, const FocusSpec &focus,
                                      const ArrayGeometry &geom, const SpaceTimePoint &p)
    {
        const double tau = detail::offset_time_argument(model, focus, geom, p);
        double best = std::numeric_limits<double>::infinity();
        for (int n = -geom.n_half; n <= geom.n_half; ++n)
            if (n != 0)
                best = std::min(best, std::abs(offset_denominator(geom, focus, n, tau)));
        return best;
    }
}

#endif
