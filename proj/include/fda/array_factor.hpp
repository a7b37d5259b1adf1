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

#ifndef FDA_ARRAY_FACTOR_HPP
#define FDA_ARRAY_FACTOR_HPP

#include "core_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace fda
{
    struct FieldSample
    {
        std::complex<double> value{0.0, 0.0};
        bool valid = true;  // false when gated out or singular
        bool gated = false; // true when zeroed by the excitation window

        bool singular() const { return !valid && !gated; }
    };

    enum class GatingMode
    {
        none,
        emission_time,    // gate on t - r/c
        observation_time, // gate on t
    };

    // True when the excitation window lets p through under the given gating.
    inline bool passes_gate(const ArrayGeometry &geom, const ExcitationWindow &window, GatingMode gating,
                            const SpaceTimePoint &p)
    {
        switch (gating)
        {
        case GatingMode::emission_time:
            return window.contains(emission_time(p, geom));
        case GatingMode::observation_time:
            return window.contains(p.t);
        default:
            return true;
        }
    }

    /*!
     * Complex array factor at p:
     *
     *   AF = sum_n exp(j {2 pi [df_n (t - r/c) + (n d sin(theta) / c)(f0 + df_n)] + phi_n})
     *
     * with df_n taken from the selected offset law. A single range r is used for every
     * element (far field). Elements are summed in index order n = -N..N, so the result is
     * a pure function of its arguments.
     *
     * A point outside the excitation window yields a gated zero. If any element offset
     * hits its pole the sample is returned invalid with a zero value.
     */
    inline FieldSample array_factor(const ArrayGeometry &geom, const OffsetModel &model, const FocusSpec &focus,
                                    const ExcitationWindow &window, GatingMode gating, const SpaceTimePoint &p,
                                    double pole_epsilon = default_pole_epsilon)
    {
        FieldSample out;
        if (!passes_gate(geom, window, gating, p))
        {
            out.valid = false;
            out.gated = true;
            return out;
        }

        const double retarded = emission_time(p, geom);
        const double spatial = geom.d * std::sin(p.theta) / geom.c;
        const double two_pi = 2.0 * pi;

        std::complex<double> sum{0.0, 0.0};
        for (int n = -geom.n_half; n <= geom.n_half; ++n)
        {
            const auto df = try_offset_at(model, focus, geom, n, p, pole_epsilon);
            if (!df)
            {
                out.valid = false;
                return out;
            }
            const double phase = two_pi * (*df * retarded + n * spatial * (geom.f0 + *df)) + geom.phase(n);
            sum += std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out.value = sum;
        return out;
    }

    inline constexpr double default_floor_db = -50.0;

    // Normalized power in dB, clamped at floor_db. Gated, singular and zero samples map to the floor.
    inline double power_db(const FieldSample &sample, double reference_magnitude, double floor_db = default_floor_db)
    {
        if (!(reference_magnitude > 0.0))
            throw std::invalid_argument("power_db: reference magnitude must be positive");
        if (!sample.valid)
            return floor_db;
        const double mag = std::abs(sample.value);
        if (mag == 0.0)
            return floor_db;
        return std::max(20.0 * std::log10(mag / reference_magnitude), floor_db);
    }
}

#endif
