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

#ifndef FDA_IO_HPP
#define FDA_IO_HPP

#include "analysis.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fda::io
{
    using json = nlohmann::json;

    class ParseError : public std::runtime_error
    {
    public:
        explicit ParseError(const std::string &what) : std::runtime_error(what) {}
    };

    class ValidationError : public std::runtime_error
    {
    public:
        ValidationError(std::string path, const std::string &what)
            : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
        const std::string &path() const { return path_; }

    private:
        std::string path_;
    };

    // Axis in engineering units (ns, m, deg).
    struct AxisConfig
    {
        double min = 0.0;
        double max = 1.0;
        std::size_t count = 2;
        bool operator==(const AxisConfig &) const = default;
    };

    /*!
     * Simulation configuration as written by the user, engineering units. load_config fills every
     * default so the struct is fully resolved; to_scenario / axis() convert to SI.
     */
    struct SimulationConfig
    {
        struct Array
        {
            int n_half = 0;
            double f0_hz = 0.0;
            double d_m = 0.0;
            std::vector<double> phi_deg; // n = -N..N
            double c_m_per_s = speed_of_light;
            bool operator==(const Array &) const = default;
        } array;

        struct Focus
        {
            double theta0_deg = 0.0;
            std::vector<double> g;
            std::optional<double> r1_m;
            std::optional<double> t_m_ns;
            bool operator==(const Focus &) const = default;
        } focus;

        struct Model
        {
            std::string type = "constant";
            std::optional<double> T_ns;
            bool operator==(const Model &) const = default;
        } model;

        struct Excitation
        {
            std::optional<double> t_start_ns;
            std::optional<double> t_end_ns;
            std::string gating = "none";
            bool operator==(const Excitation &) const = default;
        } excitation;

        struct Grid
        {
            AxisConfig time_ns{-100.0, 50.0, 601};
            AxisConfig range_m{0.0, 30.0, 601};
            AxisConfig angle_deg{-90.0, 90.0, 361};
            bool operator==(const Grid &) const = default;
        } grid;

        struct Render
        {
            double floor_db = default_floor_db;
            bool operator==(const Render &) const = default;
        } render;

        std::uint64_t seed = 20180330;

        bool operator==(const SimulationConfig &) const = default;
    };

    inline constexpr double deg = pi / 180.0;

    // ------------------------------------------------------------------ loading

    namespace detail
    {
        inline void reject_unknown(const json &obj, const std::string &path, std::initializer_list<std::string_view> keys)
        {
            for (auto it = obj.begin(); it != obj.end(); ++it)
            {
                bool known = false;
                for (auto k : keys)
                    known = known || it.key() == k;
                if (!known)
                    throw ValidationError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
            }
        }

        inline const json &object_at(const json &parent, const char *key, const std::string &path, bool required)
        {
            static const json empty = json::object();
            if (!parent.contains(key))
            {
                if (required)
                    throw ValidationError(path, "required section missing");
                return empty;
            }
            const json &v = parent.at(key);
            if (!v.is_object())
                throw ValidationError(path, "expected an object");
            return v;
        }

        inline std::optional<double> number(const json &obj, const char *key, const std::string &path)
        {
            if (!obj.contains(key) || obj.at(key).is_null())
                return std::nullopt;
            const json &v = obj.at(key);
            if (!v.is_number())
                throw ValidationError(path, "expected a number");
            const double x = v.get<double>();
            if (!std::isfinite(x))
                throw ValidationError(path, "must be finite");
            return x;
        }

        inline double required_number(const json &obj, const char *key, const std::string &path)
        {
            auto v = number(obj, key, path);
            if (!v)
                throw ValidationError(path, "required field missing");
            return *v;
        }

        inline std::vector<double> number_list(const json &obj, const char *key, const std::string &path)
        {
            const json &v = obj.at(key);
            if (!v.is_array())
                throw ValidationError(path, "expected an array of numbers");
            std::vector<double> out;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if (!v[i].is_number())
                    throw ValidationError(path + "[" + std::to_string(i) + "]", "expected a number");
                out.push_back(v[i].get<double>());
            }
            return out;
        }

        inline AxisConfig axis(const json &grid, const char *key, const std::string &path, AxisConfig fallback)
        {
            if (!grid.contains(key))
                return fallback;
            const json &a = grid.at(key);
            if (!a.is_object())
                throw ValidationError(path, "expected an object");
            reject_unknown(a, path, {"min", "max", "count"});
            AxisConfig out = fallback;
            if (auto v = number(a, "min", path + ".min"))
                out.min = *v;
            if (auto v = number(a, "max", path + ".max"))
                out.max = *v;
            if (a.contains("count"))
            {
                if (!a.at("count").is_number_unsigned())
                    throw ValidationError(path + ".count", "expected a non-negative integer");
                out.count = a.at("count").get<std::size_t>();
            }
            if (!(out.min < out.max))
                throw ValidationError(path, "min must be < max");
            if (out.count < 2)
                throw ValidationError(path + ".count", "must be >= 2");
            return out;
        }
    }

    // Parses and validates a configuration document, applying defaults.
    inline SimulationConfig load_config(const json &doc)
    {
        using namespace detail;
        if (!doc.is_object())
            throw ValidationError("$", "configuration must be a JSON object");
        reject_unknown(doc, "", {"array", "focus", "model", "excitation", "grid", "render", "seed"});

        SimulationConfig cfg;

        const json &arr = object_at(doc, "array", "array", true);
        reject_unknown(arr, "array", {"n_half", "f0_hz", "d_m", "phi_deg", "c_m_per_s"});
        if (!arr.contains("n_half") || !arr.at("n_half").is_number_integer())
            throw ValidationError("array.n_half", "required integer");
        cfg.array.n_half = arr.at("n_half").get<int>();
        if (cfg.array.n_half < 0)
            throw ValidationError("array.n_half", "must be >= 0");
        cfg.array.f0_hz = required_number(arr, "f0_hz", "array.f0_hz");
        if (!(cfg.array.f0_hz > 0.0))
            throw ValidationError("array.f0_hz", "must be positive");
        cfg.array.c_m_per_s = number(arr, "c_m_per_s", "array.c_m_per_s").value_or(speed_of_light);
        if (!(cfg.array.c_m_per_s > 0.0))
            throw ValidationError("array.c_m_per_s", "must be positive");
        cfg.array.d_m = number(arr, "d_m", "array.d_m").value_or(cfg.array.c_m_per_s / (2.0 * cfg.array.f0_hz));
        if (!(cfg.array.d_m > 0.0))
            throw ValidationError("array.d_m", "must be positive");
        const std::size_t elements = static_cast<std::size_t>(2 * cfg.array.n_half + 1);
        if (arr.contains("phi_deg"))
        {
            cfg.array.phi_deg = number_list(arr, "phi_deg", "array.phi_deg");
            if (cfg.array.phi_deg.size() != elements)
                throw ValidationError("array.phi_deg", "must have 2*n_half+1 entries");
        }
        else
            cfg.array.phi_deg.assign(elements, 0.0);

        const json &foc = object_at(doc, "focus", "focus", true);
        reject_unknown(foc, "focus", {"theta0_deg", "g", "r1_m", "t_m_ns"});
        cfg.focus.theta0_deg = required_number(foc, "theta0_deg", "focus.theta0_deg");
        if (!(std::abs(cfg.focus.theta0_deg) <= 90.0))
            throw ValidationError("focus.theta0_deg", "must lie in [-90, 90]");
        if (!foc.contains("g"))
            throw ValidationError("focus.g", "required field missing");
        cfg.focus.g = number_list(foc, "g", "focus.g");
        if (cfg.focus.g.size() != static_cast<std::size_t>(cfg.array.n_half))
            throw ValidationError("focus.g", "must have n_half entries (g_1..g_N)");
        cfg.focus.r1_m = number(foc, "r1_m", "focus.r1_m");
        cfg.focus.t_m_ns = number(foc, "t_m_ns", "focus.t_m_ns");

        const json &mod = object_at(doc, "model", "model", true);
        reject_unknown(mod, "model", {"type", "T_ns"});
        if (!mod.contains("type") || !mod.at("type").is_string())
            throw ValidationError("model.type", "required string");
        cfg.model.type = mod.at("type").get<std::string>();
        cfg.model.T_ns = number(mod, "T_ns", "model.T_ns");
        if (cfg.model.type == "constant")
        {
            if (!cfg.focus.t_m_ns)
                throw ValidationError("focus.t_m_ns", "required for the constant model");
        }
        else if (cfg.model.type == "naive" || cfg.model.type == "causal")
        {
            if (!cfg.focus.r1_m)
                throw ValidationError("focus.r1_m", "required for the " + cfg.model.type + " model");
            if (!cfg.model.T_ns)
                throw ValidationError("model.T_ns", "required for the " + cfg.model.type + " model");
        }
        else
            throw ValidationError("model.type", "must be one of constant, naive, causal");
        if (cfg.model.T_ns && !(*cfg.model.T_ns > 0.0))
            throw ValidationError("model.T_ns", "must be positive");

        const json &exc = object_at(doc, "excitation", "excitation", false);
        reject_unknown(exc, "excitation", {"t_start_ns", "t_end_ns", "gating"});
        cfg.excitation.t_start_ns = number(exc, "t_start_ns", "excitation.t_start_ns");
        cfg.excitation.t_end_ns = number(exc, "t_end_ns", "excitation.t_end_ns");
        if (exc.contains("gating"))
        {
            if (!exc.at("gating").is_string())
                throw ValidationError("excitation.gating", "expected a string");
            cfg.excitation.gating = exc.at("gating").get<std::string>();
        }
        if (cfg.excitation.gating != "none" && cfg.excitation.gating != "emission" && cfg.excitation.gating != "observation")
            throw ValidationError("excitation.gating", "must be one of none, emission, observation");
        if (cfg.excitation.t_start_ns && cfg.excitation.t_end_ns && !(*cfg.excitation.t_start_ns < *cfg.excitation.t_end_ns))
            throw ValidationError("excitation", "t_start_ns must be < t_end_ns");

        const json &grid = object_at(doc, "grid", "grid", false);
        reject_unknown(grid, "grid", {"time_ns", "range_m", "angle_deg"});
        cfg.grid.time_ns = axis(grid, "time_ns", "grid.time_ns", cfg.grid.time_ns);
        cfg.grid.range_m = axis(grid, "range_m", "grid.range_m", cfg.grid.range_m);
        cfg.grid.angle_deg = axis(grid, "angle_deg", "grid.angle_deg", cfg.grid.angle_deg);
        if (cfg.grid.range_m.min < 0.0)
            throw ValidationError("grid.range_m.min", "must be >= 0");

        const json &ren = object_at(doc, "render", "render", false);
        reject_unknown(ren, "render", {"floor_db"});
        cfg.render.floor_db = number(ren, "floor_db", "render.floor_db").value_or(default_floor_db);
        if (!(cfg.render.floor_db < 0.0))
            throw ValidationError("render.floor_db", "must be negative");

        if (doc.contains("seed"))
        {
            if (!doc.at("seed").is_number_unsigned())
                throw ValidationError("seed", "expected a non-negative integer");
            cfg.seed = doc.at("seed").get<std::uint64_t>();
        }
        return cfg;
    }

    inline SimulationConfig load_config(std::string_view text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ParseError(std::string("malformed configuration: ") + e.what());
        }
        return load_config(doc);
    }

    inline std::string read_text_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    inline SimulationConfig load_config_file(const std::string &path)
    {
        return load_config(std::string_view(read_text_file(path)));
    }

    // Fully resolved configuration document; reloading it yields an identical config.
    inline json to_json(const SimulationConfig &cfg)
    {
        auto axis = [](const AxisConfig &a)
        { return json{{"min", a.min}, {"max", a.max}, {"count", a.count}}; };

        json doc;
        doc["array"] = {{"n_half", cfg.array.n_half}, {"f0_hz", cfg.array.f0_hz}, {"d_m", cfg.array.d_m},
                        {"phi_deg", cfg.array.phi_deg}, {"c_m_per_s", cfg.array.c_m_per_s}};
        doc["focus"] = {{"theta0_deg", cfg.focus.theta0_deg}, {"g", cfg.focus.g}};
        if (cfg.focus.r1_m)
            doc["focus"]["r1_m"] = *cfg.focus.r1_m;
        if (cfg.focus.t_m_ns)
            doc["focus"]["t_m_ns"] = *cfg.focus.t_m_ns;
        doc["model"] = {{"type", cfg.model.type}};
        if (cfg.model.T_ns)
            doc["model"]["T_ns"] = *cfg.model.T_ns;
        doc["excitation"] = {{"gating", cfg.excitation.gating}};
        if (cfg.excitation.t_start_ns)
            doc["excitation"]["t_start_ns"] = *cfg.excitation.t_start_ns;
        if (cfg.excitation.t_end_ns)
            doc["excitation"]["t_end_ns"] = *cfg.excitation.t_end_ns;
        doc["grid"] = {{"time_ns", axis(cfg.grid.time_ns)}, {"range_m", axis(cfg.grid.range_m)},
                       {"angle_deg", axis(cfg.grid.angle_deg)}};
        doc["render"] = {{"floor_db", cfg.render.floor_db}};
        doc["seed"] = cfg.seed;
        return doc;
    }

    inline GatingMode parse_gating(const std::string &s)
    {
        if (s == "emission")
            return GatingMode::emission_time;
        if (s == "observation")
            return GatingMode::observation_time;
        return GatingMode::none;
    }

    inline const char *gating_name(GatingMode g)
    {
        switch (g)
        {
        case GatingMode::emission_time:
            return "emission";
        case GatingMode::observation_time:
            return "observation";
        default:
            return "none";
        }
    }

    // SI scenario. The only place engineering units are converted.
    inline Scenario to_scenario(const SimulationConfig &cfg)
    {
        Scenario s;
        s.geometry.n_half = cfg.array.n_half;
        s.geometry.f0 = cfg.array.f0_hz;
        s.geometry.d = cfg.array.d_m;
        s.geometry.c = cfg.array.c_m_per_s;
        s.geometry.phi.clear();
        for (double p : cfg.array.phi_deg)
            s.geometry.phi.push_back(p * deg);

        s.focus.theta0 = cfg.focus.theta0_deg * deg;
        s.focus.g = cfg.focus.g;
        s.focus.r1 = cfg.focus.r1_m.value_or(0.0);
        s.focus.t_m = cfg.focus.t_m_ns.value_or(0.0) * 1e-9;

        const double T = cfg.model.T_ns.value_or(NaiveTimeModulated{}.T * 1e9) * 1e-9;
        if (cfg.model.type == "naive")
            s.model = NaiveTimeModulated{T};
        else if (cfg.model.type == "causal")
            s.model = CausalTimeModulated{T};
        else
            s.model = ConstantOffsets{};

        if (cfg.excitation.t_start_ns)
            s.window.t_start = *cfg.excitation.t_start_ns * 1e-9;
        if (cfg.excitation.t_end_ns)
            s.window.t_end = *cfg.excitation.t_end_ns * 1e-9;
        s.gating = parse_gating(cfg.excitation.gating);
        s.floor_db = cfg.render.floor_db;
        s.validate();
        return s;
    }

    inline AxisSpec axis(const SimulationConfig &cfg, AxisKind kind)
    {
        switch (kind)
        {
        case AxisKind::time:
            return {kind, cfg.grid.time_ns.min * 1e-9, cfg.grid.time_ns.max * 1e-9, cfg.grid.time_ns.count};
        case AxisKind::range:
            return {kind, cfg.grid.range_m.min, cfg.grid.range_m.max, cfg.grid.range_m.count};
        default:
            return {kind, cfg.grid.angle_deg.min * deg, cfg.grid.angle_deg.max * deg, cfg.grid.angle_deg.count};
        }
    }

    // Approximate inverse of to_scenario, for grids produced without a configuration document.
    inline SimulationConfig config_from_scenario(const Scenario &s)
    {
        SimulationConfig cfg;
        cfg.array.n_half = s.geometry.n_half;
        cfg.array.f0_hz = s.geometry.f0;
        cfg.array.d_m = s.geometry.d;
        cfg.array.c_m_per_s = s.geometry.c;
        for (double p : s.geometry.phi)
            cfg.array.phi_deg.push_back(p / deg);
        cfg.focus.theta0_deg = s.focus.theta0 / deg;
        cfg.focus.g = s.focus.g;
        cfg.focus.r1_m = s.focus.r1;
        cfg.focus.t_m_ns = s.focus.t_m * 1e9;
        cfg.model.type = model_name(s.model);
        if (const auto *m = std::get_if<NaiveTimeModulated>(&s.model))
            cfg.model.T_ns = m->T * 1e9;
        if (const auto *m = std::get_if<CausalTimeModulated>(&s.model))
            cfg.model.T_ns = m->T * 1e9;
        if (std::isfinite(s.window.t_start))
            cfg.excitation.t_start_ns = s.window.t_start * 1e9;
        if (std::isfinite(s.window.t_end))
            cfg.excitation.t_end_ns = s.window.t_end * 1e9;
        cfg.excitation.gating = gating_name(s.gating);
        cfg.render.floor_db = s.floor_db;
        return cfg;
    }

    // ------------------------------------------------------------------ numbers

    // Shortest representation that parses back to the same double.
    inline std::string exact(double v)
    {
        if (std::isnan(v))
            return "nan";
        std::array<char, 64> buf{};
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    }

    inline std::string sig9(double v)
    {
        if (std::isnan(v))
            return "nan";
        std::array<char, 64> buf{};
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
        return std::string(buf.data(), res.ptr);
    }

    inline double parse_double(std::string_view s, const std::string &context)
    {
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        const char *first = s.data();
        if (!s.empty() && s.front() == '+')
            ++first;
        auto res = std::from_chars(first, s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ParseError(context + ": not a number '" + std::string(s) + "'");
        return v;
    }

    /*!
     * Parses a time or angle with an optional unit suffix and returns SI (s or rad):
     * "30ns", "-90ns", "1.5us", "2e-9s", "-30deg", "0.5rad". A bare number is taken as SI.
     */
    inline double parse_quantity(std::string_view text, AxisKind kind)
    {
        struct Unit
        {
            std::string_view suffix;
            double scale;
        };
        static constexpr std::array<Unit, 4> time_units{{{"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}}};
        static constexpr std::array<Unit, 2> angle_units{{{"deg", deg}, {"rad", 1.0}}};

        auto try_units = [&](auto const &units) -> std::optional<double>
        {
            for (const auto &u : units)
                if (text.size() > u.suffix.size() && text.ends_with(u.suffix))
                {
                    const double v = parse_double(text.substr(0, text.size() - u.suffix.size()), "quantity");
                    return v * u.scale;
                }
            return std::nullopt;
        };

        std::optional<double> v;
        if (kind == AxisKind::time)
            v = try_units(time_units);
        else if (kind == AxisKind::angle)
            v = try_units(angle_units);
        if (!v)
            v = parse_double(text, "quantity");
        if (!std::isfinite(*v))
            throw ParseError("quantity must be finite: " + std::string(text));
        return *v;
    }

    // ------------------------------------------------------------------ grids

    inline const char *column_name(AxisKind kind)
    {
        switch (kind)
        {
        case AxisKind::time:
            return "t_ns";
        case AxisKind::range:
            return "r_m";
        default:
            return "theta_deg";
        }
    }

    inline double to_engineering(AxisKind kind, double si)
    {
        switch (kind)
        {
        case AxisKind::time:
            return si * 1e9;
        case AxisKind::range:
            return si;
        default:
            return si / deg;
        }
    }

    inline AxisKind parse_axis_kind(std::string_view s)
    {
        if (s == "time")
            return AxisKind::time;
        if (s == "range")
            return AxisKind::range;
        if (s == "angle")
            return AxisKind::angle;
        throw ParseError("unknown axis kind '" + std::string(s) + "'");
    }

    inline std::string config_line(const PowerGrid &grid)
    {
        if (!grid.config_echo.empty())
            return grid.config_echo;
        return to_json(config_from_scenario(grid.scenario)).dump();
    }

    /*!
     * Long-format CSV:
     *
     *   # {resolved configuration, one line}
     *   # reference_magnitude=<v> fixed=<kind>:<v> axis1=<kind>:<min>:<max>:<count> axis2=...
     *   <axis1 column>,<axis2 column>,power_db
     *   one row per cell, axis1-major
     *
     * Coordinates are written in engineering units with 9 significant digits. Power and the
     * metadata line use the shortest exact representation so the file reads back bit-for-bit.
     * Singular cells are written as nan; gated cells carry the floor value.
     */
    inline void write_grid(const PowerGrid &grid, std::ostream &out)
    {
        auto axis_token = [](const AxisSpec &a)
        { return std::string(axis_name(a.kind)) + ":" + exact(a.min) + ":" + exact(a.max) + ":" + std::to_string(a.count); };

        std::string text;
        text.reserve(grid.values.size() * 32 + 512);
        text += "# " + config_line(grid) + "\n";
        text += "# reference_magnitude=" + exact(grid.reference_magnitude) + " fixed=" + axis_name(grid.fixed.kind) +
                ":" + exact(grid.fixed.value) + " axis1=" + axis_token(grid.axis1) + " axis2=" + axis_token(grid.axis2) + "\n";
        text += std::string(column_name(grid.axis1.kind)) + "," + column_name(grid.axis2.kind) + ",power_db\n";
        for (std::size_t i = 0; i < grid.rows(); ++i)
        {
            const std::string c1 = sig9(to_engineering(grid.axis1.kind, grid.axis1.value(i)));
            for (std::size_t j = 0; j < grid.cols(); ++j)
            {
                text += c1;
                text += ',';
                text += sig9(to_engineering(grid.axis2.kind, grid.axis2.value(j)));
                text += ',';
                text += grid.state(i, j) == CellState::singular ? std::string("nan") : exact(grid.at(i, j));
                text += '\n';
            }
        }
        out << text;
        if (!out)
            throw std::runtime_error("write_grid: sink write failed");
    }

    inline std::string grid_to_string(const PowerGrid &grid)
    {
        std::ostringstream ss;
        write_grid(grid, ss);
        return ss.str();
    }

    namespace detail
    {
        inline std::vector<std::string_view> split(std::string_view s, char sep)
        {
            std::vector<std::string_view> parts;
            std::size_t start = 0;
            while (true)
            {
                const std::size_t pos = s.find(sep, start);
                parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return parts;
        }

        inline AxisSpec parse_axis_token(std::string_view tok)
        {
            const auto parts = split(tok, ':');
            if (parts.size() != 4)
                throw ParseError("grid metadata: bad axis token '" + std::string(tok) + "'");
            AxisSpec a;
            a.kind = parse_axis_kind(parts[0]);
            a.min = parse_double(parts[1], "axis min");
            a.max = parse_double(parts[2], "axis max");
            a.count = static_cast<std::size_t>(parse_double(parts[3], "axis count"));
            a.validate();
            return a;
        }
    }

    // Inverse of write_grid. Gated flags are recomputed from the echoed configuration.
    inline PowerGrid read_grid(std::istream &in)
    {
        std::string line;
        auto next = [&](const char *what)
        {
            if (!std::getline(in, line))
                throw ParseError(std::string("grid file truncated before ") + what);
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
        };

        PowerGrid grid;
        next("configuration line");
        if (line.rfind("# ", 0) != 0)
            throw ParseError("grid file: first line must be a '# ' configuration comment");
        grid.config_echo = line.substr(2);
        const SimulationConfig cfg = load_config(std::string_view(grid.config_echo));
        grid.scenario = to_scenario(cfg);
        grid.floor_db = grid.scenario.floor_db;

        next("metadata line");
        if (line.rfind("# ", 0) != 0)
            throw ParseError("grid file: second line must be a '# ' metadata comment");
        bool have_ref = false, have_fixed = false, have_a1 = false, have_a2 = false;
        std::istringstream meta(line.substr(2));
        std::string tok;
        while (meta >> tok)
        {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw ParseError("grid metadata: bad token '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            const std::string_view val = std::string_view(tok).substr(eq + 1);
            if (key == "reference_magnitude")
            {
                grid.reference_magnitude = parse_double(val, key);
                have_ref = true;
            }
            else if (key == "fixed")
            {
                const auto colon = val.find(':');
                if (colon == std::string_view::npos)
                    throw ParseError("grid metadata: bad fixed token");
                grid.fixed.kind = parse_axis_kind(val.substr(0, colon));
                grid.fixed.value = parse_double(val.substr(colon + 1), key);
                have_fixed = true;
            }
            else if (key == "axis1")
            {
                grid.axis1 = detail::parse_axis_token(val);
                have_a1 = true;
            }
            else if (key == "axis2")
            {
                grid.axis2 = detail::parse_axis_token(val);
                have_a2 = true;
            }
        }
        if (!(have_ref && have_fixed && have_a1 && have_a2))
            throw ParseError("grid metadata: missing reference_magnitude, fixed, axis1 or axis2");

        next("header");
        const std::string header = std::string(column_name(grid.axis1.kind)) + "," + column_name(grid.axis2.kind) + ",power_db";
        if (line != header)
            throw ParseError("grid header mismatch: expected '" + header + "'");

        const std::size_t total = grid.axis1.count * grid.axis2.count;
        grid.values.assign(total, grid.floor_db);
        grid.cells.assign(total, CellState::ok);
        for (std::size_t k = 0; k < total; ++k)
        {
            next("all data rows");
            const auto cols = detail::split(line, ',');
            if (cols.size() != 3)
                throw ParseError("grid row " + std::to_string(k) + ": expected 3 columns");
            const double v = parse_double(cols[2], "grid row " + std::to_string(k));
            const std::size_t i = k / grid.axis2.count;
            const std::size_t j = k % grid.axis2.count;
            if (std::isnan(v))
            {
                grid.cells[k] = CellState::singular;
                continue;
            }
            grid.values[k] = v;
            if (!passes_gate(grid.scenario.geometry, grid.scenario.window, grid.scenario.gating, grid.point(i, j)))
                grid.cells[k] = CellState::gated;
        }
        return grid;
    }

    inline PowerGrid read_grid_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path);
        return read_grid(in);
    }

    // ------------------------------------------------------------------ reports

    inline json point_json(const SpaceTimePoint &p)
    {
        return {{"t_ns", p.t * 1e9}, {"r_m", p.r}, {"theta_deg", p.theta / deg}};
    }

    inline json to_json(const CausalityReport &r)
    {
        json v = json::array();
        for (const auto &x : r.violations)
            v.push_back({{"t_ns", x.t * 1e9}, {"r_m", x.r}, {"theta_deg", x.theta / deg}, {"power_db", x.power_db}});
        json doc{{"pass", r.pass}, {"violation_count", r.violations.size()}, {"threshold_db", r.threshold_db},
                 {"cells_outside_cone", r.cells_outside_cone}, {"violations", v}};
        doc["worst_violation_db"] = r.violations.empty() ? json(nullptr) : json(r.worst_violation_db);
        doc["t_start_ns"] = std::isfinite(r.t_start) ? json(r.t_start * 1e9) : json(nullptr);
        return doc;
    }

    inline json to_json(const InvarianceReport &r)
    {
        return {{"model", r.model},
                {"max_relative_deviation", r.max_relative_deviation},
                {"sample_count", r.sample_count},
                {"tolerance", r.tolerance},
                {"pass", r.pass},
                {"seed", r.seed},
                {"resamples", r.resamples},
                {"exceedances_1e-3", r.exceedances},
                {"worst_point", point_json(r.worst_point)},
                {"worst_shift_ns", r.worst_shift * 1e9}};
    }

    inline json to_json(const FocusConstancyReport &r)
    {
        json doc = to_json(r.invariance);
        doc.erase("seed");
        doc.erase("resamples");
        doc.erase("exceedances_1e-3");
        doc.erase("worst_point");
        doc.erase("worst_shift_ns");
        doc["magnitude"] = r.magnitude;
        doc["min_magnitude"] = r.min_magnitude;
        doc["max_magnitude"] = r.max_magnitude;
        return doc;
    }

    inline json to_json(const VelocityReport &r)
    {
        return {{"slope_m_per_s", r.slope},
                {"intercept_m", r.intercept},
                {"residual_rms_m", r.residual_rms},
                {"relative_error_vs_c", r.relative_error_vs_c},
                {"points_used", r.points_used}};
    }

    inline json to_json(const FocusTrajectory &t)
    {
        json pts = json::array();
        for (const auto &p : t.points)
        {
            json j{{"slice", to_engineering(t.slice_kind, p.slice)},
                   {"argmax", to_engineering(t.argmax_kind, p.argmax)},
                   {"peak_db", p.peak_db},
                   {"on_boundary", p.on_boundary}};
            if (!std::isnan(p.argmax_secondary))
                j["argmax_secondary"] = to_engineering(t.secondary_kind, p.argmax_secondary);
            pts.push_back(j);
        }
        json omitted = json::array();
        for (double s : t.omitted_slices)
            omitted.push_back(to_engineering(t.slice_kind, s));
        return {{"slice_axis", column_name(t.slice_kind)},
                {"argmax_axis", column_name(t.argmax_kind)},
                {"points", pts},
                {"omitted_slices", omitted}};
    }

    inline json to_json(const VerificationResult &r)
    {
        json checks = json::array();
        for (const auto &c : r.checks)
            checks.push_back({{"name", c.name}, {"expected_pass", c.expected_pass}, {"observed_pass", c.observed_pass},
                              {"ok", c.ok()}, {"detail", c.detail}});
        json causal = to_json(r.causal_causality);
        json naive = to_json(r.naive_causality);
        // violation lists can be large; keep the counts and the worst level
        causal.erase("violations");
        naive.erase("violations");
        return {{"all_ok", r.all_ok()},
                {"checks", checks},
                {"causality_causal_gated", causal},
                {"causality_naive_declared_t0", naive},
                {"invariance_constant", to_json(r.constant_invariance)},
                {"invariance_causal", to_json(r.causal_invariance)},
                {"invariance_naive", to_json(r.naive_invariance)},
                {"constancy_naive", to_json(r.naive_constancy)}};
    }

    inline std::string to_text(const VerificationResult &r)
    {
        std::ostringstream ss;
        for (const auto &c : r.checks)
            ss << (c.ok() ? "OK   " : "FAIL ") << c.name << " (expected " << (c.expected_pass ? "pass" : "fail")
               << ", observed " << (c.observed_pass ? "pass" : "fail") << "): " << c.detail << "\n";
        ss << (r.all_ok() ? "all expected outcomes hold\n" : "expected outcomes violated\n");
        return ss.str();
    }

    inline std::string to_text(const FocusTrajectory &t, const std::optional<VelocityReport> &v)
    {
        std::ostringstream ss;
        ss << column_name(t.slice_kind) << "," << column_name(t.argmax_kind);
        const bool two_d = !t.points.empty() && !std::isnan(t.points.front().argmax_secondary);
        if (two_d)
            ss << "," << column_name(t.secondary_kind);
        ss << ",peak_db,on_boundary\n";
        for (const auto &p : t.points)
        {
            ss << sig9(to_engineering(t.slice_kind, p.slice)) << "," << sig9(to_engineering(t.argmax_kind, p.argmax));
            if (two_d)
                ss << "," << sig9(to_engineering(t.secondary_kind, p.argmax_secondary));
            ss << "," << sig9(p.peak_db) << "," << (p.on_boundary ? 1 : 0) << "\n";
        }
        if (!t.omitted_slices.empty())
            ss << "# omitted slices: " << t.omitted_slices.size() << "\n";
        if (v)
            ss << "# velocity slope_m_per_s=" << sig9(v->slope) << " intercept_m=" << sig9(v->intercept)
               << " residual_rms_m=" << sig9(v->residual_rms) << " relative_error_vs_c=" << sig9(v->relative_error_vs_c)
               << " points_used=" << v->points_used << "\n";
        return ss.str();
    }
}

#endif
