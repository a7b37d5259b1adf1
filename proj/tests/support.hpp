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

#ifndef FDA_TESTS_SUPPORT_HPP
#define FDA_TESTS_SUPPORT_HPP

#include <fda/grid.hpp>

#include <cmath>
#include <string>

namespace fda::test
{
    inline constexpr double ns = 1e-9;
    inline constexpr double deg = pi / 180.0;

#ifdef FDASIM_CONFIG_DIR
    inline std::string config_path(const std::string &name)
    {
        return std::string(FDASIM_CONFIG_DIR) + "/" + name;
    }
#endif

    // N = 5, f0 = 3 GHz, d = lambda/2, g = [1.8, 4.4, 4.4, 5.5, 4.8], theta0 = -30 deg.
    inline Scenario paper_scenario(OffsetModel model, bool coherent_phases = false)
    {
        Scenario s;
        s.geometry = ArrayGeometry::make(5, 3e9);
        s.focus.theta0 = -30.0 * deg;
        s.focus.g = {1.8, 4.4, 4.4, 5.5, 4.8};
        s.focus.r1 = 15.0;
        s.focus.t_m = -50 * ns;
        s.model = model;
        if (coherent_phases)
            for (int n = -5; n <= 5; ++n)
                s.geometry.phi[static_cast<std::size_t>(n + 5)] = -2.0 * pi * s.focus.factor(n);
        return s;
    }

    inline double relative(double a, double b)
    {
        return std::abs(a - b) / std::abs(b);
    }
}

#endif
