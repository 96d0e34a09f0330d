// SPDX-License-Identifier: Apache-2.0
//
// irsim: cascaded-IRS terahertz uplink simulator and phase optimizer
// Copyright (C) 2026 The irsim authors
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

#include "irsim/errors.hpp"
#include "irsim/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

namespace irsim
{

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value, const char *expected)
{
    fail(ErrorCode::config_parse, key + ": cannot parse '" + value + "' as " + expected);
}

double to_double(const std::string &key, const std::string &text)
{
    const std::string v = trim(text);
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
        bad_value(key, v, "a number");
    return out;
}

std::uint64_t to_u64(const std::string &key, const std::string &text)
{
    const std::string v = trim(text);
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
        bad_value(key, v, "a non-negative integer");
    return out;
}

bool to_bool(const std::string &key, const std::string &text)
{
    const std::string v = trim(text);
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    bad_value(key, v, "true or false");
}

std::vector<std::string> split(const std::string &text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(trim(item));
    return parts;
}

std::vector<double> to_doubles(const std::string &key, const std::string &text)
{
    std::vector<double> out;
    for (const auto &p : split(text))
        out.push_back(to_double(key, p));
    return out;
}

Vec3 to_vec3(const std::string &key, const std::string &text)
{
    const auto v = to_doubles(key, text);
    if (v.size() != 3)
        bad_value(key, text, "three comma-separated numbers");
    return {v[0], v[1], v[2]};
}

std::string fmt(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt(const Vec3 &v)
{
    return fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z);
}

std::string fmt(const std::vector<double> &v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + fmt(v[i]);
    return out;
}

std::string fmt_bool(bool b)
{
    return b ? "true" : "false";
}

using Getter = std::function<std::string(const ExperimentConfig &)>;
using Setter = std::function<void(ExperimentConfig &, const std::string &)>;

struct Field
{
    const char *section; // printed before the first key of each section
    const char *key;
    Getter get;
    Setter set;
};

#define IRSIM_REAL(sec, name, member)                                                                                  \
    Field{sec, #name, [](const ExperimentConfig &c) { return fmt(c.member); },                                         \
          [](ExperimentConfig &c, const std::string &v) { c.member = to_double(#name, v); }}
#define IRSIM_COUNT(sec, name, member)                                                                                 \
    Field{sec, #name, [](const ExperimentConfig &c) { return std::to_string(c.member); },                              \
          [](ExperimentConfig &c, const std::string &v) { c.member = static_cast<decltype(c.member)>(to_u64(#name, v)); }}
#define IRSIM_VEC3(sec, name, member)                                                                                  \
    Field{sec, #name, [](const ExperimentConfig &c) { return fmt(c.member); },                                         \
          [](ExperimentConfig &c, const std::string &v) { c.member = to_vec3(#name, v); }}
#define IRSIM_AUTO_VEC3(sec, name, member)                                                                             \
    Field{sec, #name, [](const ExperimentConfig &c) { return c.member ? fmt(*c.member) : std::string("auto"); },      \
          [](ExperimentConfig &c, const std::string &v) {                                                              \
              if (trim(v) == "auto")                                                                                   \
                  c.member.reset();                                                                                    \
              else                                                                                                     \
                  c.member = to_vec3(#name, v);                                                                        \
          }}

const std::vector<Field> &fields()
{
    static const std::vector<Field> table = {
        Field{"general", "seed", [](const ExperimentConfig &c) { return std::to_string(c.scenario.seed); },
              [](ExperimentConfig &c, const std::string &v) { set_seed(c, to_u64("seed", v)); }},
        Field{nullptr, "objective", [](const ExperimentConfig &c) { return to_string(c.objective); },
              [](ExperimentConfig &c, const std::string &v) {
                  try
                  {
                      c.objective = objective_from_string(trim(v));
                  }
                  catch (const Error &)
                  {
                      bad_value("objective", v, "desired_user or sum_rate");
                  }
                  c.train.objective = c.objective;
              }},

        IRSIM_REAL("scenario", frequency_hz, scenario.frequency_hz),
        IRSIM_REAL(nullptr, bandwidth_hz, scenario.bandwidth_hz),
        IRSIM_REAL(nullptr, tx_power_mw, scenario.tx_power_mw),
        IRSIM_COUNT(nullptr, irs1_elements, scenario.irs1_elements),
        IRSIM_COUNT(nullptr, irs2_elements, scenario.irs2_elements),
        IRSIM_VEC3(nullptr, irs1_position, scenario.irs1_position),
        IRSIM_VEC3(nullptr, irs2_position, scenario.irs2_position),
        IRSIM_VEC3(nullptr, rx_position, scenario.rx_position),
        IRSIM_VEC3(nullptr, user_anchor, scenario.user_anchor),
        IRSIM_REAL(nullptr, user1_distance_m, scenario.user1_distance_m),
        IRSIM_REAL(nullptr, user2_distance_m, scenario.user2_distance_m),
        IRSIM_AUTO_VEC3(nullptr, irs1_normal, scenario.irs1_normal),
        IRSIM_AUTO_VEC3(nullptr, irs2_normal, scenario.irs2_normal),
        IRSIM_REAL(nullptr, tx_antenna_diameter_m, scenario.tx_antenna_diameter_m),
        IRSIM_REAL(nullptr, rx_antenna_diameter_m, scenario.rx_antenna_diameter_m),
        IRSIM_REAL(nullptr, tx_aperture_efficiency, scenario.tx_aperture_efficiency),
        IRSIM_REAL(nullptr, rx_aperture_efficiency, scenario.rx_aperture_efficiency),
        IRSIM_REAL(nullptr, tx_offboresight_rad, scenario.tx_offboresight_rad),
        IRSIM_REAL(nullptr, rx_offboresight_rad, scenario.rx_offboresight_rad),
        IRSIM_REAL(nullptr, reflection_magnitude, scenario.reflection_magnitude),
        IRSIM_REAL(nullptr, rician_k1, scenario.rician_k1),
        IRSIM_REAL(nullptr, rician_k2, scenario.rician_k2),
        IRSIM_REAL(nullptr, rho, scenario.rho),
        Field{nullptr, "corr_theta",
              [](const ExperimentConfig &c) {
                  return c.scenario.corr_theta ? fmt(*c.scenario.corr_theta) : std::string("auto");
              },
              [](ExperimentConfig &c, const std::string &v) {
                  if (trim(v) == "auto")
                      c.scenario.corr_theta.reset();
                  else
                      c.scenario.corr_theta = to_double("corr_theta", v);
              }},
        Field{nullptr, "los_mode",
              [](const ExperimentConfig &c) {
                  return std::string(c.scenario.los_mode == LosMode::ones ? "ones" : "steering");
              },
              [](ExperimentConfig &c, const std::string &v) {
                  const std::string t = trim(v);
                  if (t == "ones")
                      c.scenario.los_mode = LosMode::ones;
                  else if (t == "steering")
                      c.scenario.los_mode = LosMode::steering;
                  else
                      bad_value("los_mode", t, "ones or steering");
              }},
        IRSIM_REAL(nullptr, element_spacing_wavelengths, scenario.element_spacing_wavelengths),
        IRSIM_REAL(nullptr, noise_psd_dbm_hz, scenario.noise_psd_dbm_hz),
        IRSIM_REAL(nullptr, noise_figure_db, scenario.noise_figure_db),
        IRSIM_REAL(nullptr, absorption_coeff_per_m, scenario.absorption_coeff_per_m),

        IRSIM_COUNT("training", episodes, train.episodes),
        IRSIM_COUNT(nullptr, steps_per_episode, train.steps_per_episode),
        IRSIM_COUNT(nullptr, batch_size, train.batch_size),
        IRSIM_COUNT(nullptr, buffer_capacity, train.buffer_capacity),
        IRSIM_REAL(nullptr, discount, train.discount),
        IRSIM_REAL(nullptr, tau, train.tau),
        IRSIM_REAL(nullptr, actor_lr, train.actor_lr),
        IRSIM_REAL(nullptr, critic_lr, train.critic_lr),
        IRSIM_REAL(nullptr, critic_l2, train.critic_l2),
        IRSIM_COUNT(nullptr, hidden_units, train.hidden_units),
        IRSIM_REAL(nullptr, ou_theta, train.ou_theta),
        IRSIM_REAL(nullptr, ou_sigma, train.ou_sigma),
        IRSIM_REAL(nullptr, reward_offset_db, train.reward_offset_db),

        Field{"sweep", "solvers",
              [](const ExperimentConfig &c) {
                  std::string out;
                  for (std::size_t i = 0; i < c.sweep.solvers.size(); ++i)
                      out += (i ? ", " : "") + to_string(c.sweep.solvers[i]);
                  return out;
              },
              [](ExperimentConfig &c, const std::string &v) {
                  c.sweep.solvers.clear();
                  for (const auto &name : split(v))
                  {
                      try
                      {
                          c.sweep.solvers.push_back(solver_from_string(name));
                      }
                      catch (const Error &)
                      {
                          bad_value("solvers", name, "one of pinv, block, grid, coord, random, ddpg");
                      }
                  }
              }},
        Field{nullptr, "ratios", [](const ExperimentConfig &c) { return fmt(c.sweep.ratios); },
              [](ExperimentConfig &c, const std::string &v) { c.sweep.ratios = to_doubles("ratios", v); }},
        Field{nullptr, "rhos", [](const ExperimentConfig &c) { return fmt(c.sweep.rhos); },
              [](ExperimentConfig &c, const std::string &v) { c.sweep.rhos = to_doubles("rhos", v); }},
        IRSIM_COUNT(nullptr, trials, sweep.trials),
        IRSIM_COUNT(nullptr, block_size, sweep.block_size),
        IRSIM_REAL(nullptr, grid_step, sweep.grid_step),
        IRSIM_COUNT(nullptr, grid_budget, sweep.grid_budget),
        IRSIM_COUNT(nullptr, coord_sweeps, sweep.coord_sweeps),
        IRSIM_COUNT(nullptr, threads, sweep.threads),
        Field{nullptr, "record_timing", [](const ExperimentConfig &c) { return fmt_bool(c.sweep.record_timing); },
              [](ExperimentConfig &c, const std::string &v) { c.sweep.record_timing = to_bool("record_timing", v); }},
        Field{nullptr, "emit_trials", [](const ExperimentConfig &c) { return fmt_bool(c.sweep.emit_trials); },
              [](ExperimentConfig &c, const std::string &v) { c.sweep.emit_trials = to_bool("emit_trials", v); }},
    };
    return table;
}

#undef IRSIM_REAL
#undef IRSIM_COUNT
#undef IRSIM_VEC3
#undef IRSIM_AUTO_VEC3

const Field *find_field(const std::string &key)
{
    for (const auto &f : fields())
        if (key == f.key)
            return &f;
    return nullptr;
}

} // namespace

void set_seed(ExperimentConfig &cfg, std::uint64_t seed)
{
    cfg.scenario.seed = seed;
    cfg.train.seed = seed;
    cfg.sweep.seed = seed;
}

void set_config_value(ExperimentConfig &cfg, const std::string &key, const std::string &value)
{
    const Field *f = find_field(trim(key));
    if (!f)
        fail(ErrorCode::config_parse, "unknown key '" + trim(key) + "'");
    f->set(cfg, value);
}

void validate(const SweepSpec &s)
{
    auto require = [](bool ok, const char *key, const char *constraint) {
        if (!ok)
            fail(ErrorCode::config_constraint, std::string(key) + ": must be " + constraint);
    };
    require(!s.solvers.empty(), "solvers", "non-empty");
    require(!s.ratios.empty(), "ratios", "non-empty");
    for (double r : s.ratios)
        require(r > 0.0 && r <= 1.0, "ratios", "in (0, 1]");
    require(!s.rhos.empty(), "rhos", "non-empty");
    for (double r : s.rhos)
        require(r >= 0.0 && r <= 1.0, "rhos", "in [0, 1]");
    require(s.trials >= 1, "trials", ">= 1");
    require(s.block_size >= 1, "block_size", ">= 1");
    require(s.grid_step > 0.0 && s.grid_step <= 2.0 * std::numbers::pi, "grid_step", "in (0, 2 pi]");
    require(s.grid_budget >= 1, "grid_budget", ">= 1");
    require(s.coord_sweeps >= 1, "coord_sweeps", ">= 1");
}

void validate(const ExperimentConfig &cfg)
{
    validate(cfg.scenario);
    validate(cfg.train);
    validate(cfg.sweep);
}

ExperimentConfig parse_config(std::string_view text, const std::string &origin)
{
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;

        const std::string where = origin + ":" + std::to_string(line_no) + ": ";
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::config_parse, where + "expected 'key = value', got '" + body + "'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!seen.insert(key).second)
            fail(ErrorCode::config_parse, where + "duplicate key '" + key + "'");
        try
        {
            set_config_value(cfg, key, value);
        }
        catch (const Error &e)
        {
            fail(e.code(), where + e.what());
        }
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::config_missing, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string serialize_config(const ExperimentConfig &cfg)
{
    std::string out = "# irsim experiment configuration\n";
    for (const auto &f : fields())
    {
        if (f.section)
            out += std::string("\n# ") + f.section + "\n";
        out += std::string(f.key) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b)
{
    return serialize_config(a) == serialize_config(b) && a.train.objective == b.train.objective &&
           a.train.seed == b.train.seed && a.sweep.seed == b.sweep.seed;
}

} // namespace irsim
