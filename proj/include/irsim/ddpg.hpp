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

#ifndef IRSIM_DDPG_HPP
#define IRSIM_DDPG_HPP

#include "irsim/metrics.hpp"
#include "irsim/neuralnet.hpp"
#include "irsim/rng.hpp"
#include "irsim/scenario.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace irsim
{

enum class Objective
{
    desired_user, // reward: user-1 received power in dB (plus offset)
    sum_rate      // reward: sum rate in bits/s/Hz
};

std::string to_string(Objective obj);
Objective objective_from_string(const std::string &name);

// Observation at step T: both SINRs and the reward obtained at step T-1.
struct EnvState
{
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double reward = 0.0;

    bool operator==(const EnvState &) const = default;
};

inline constexpr std::size_t kStateSize = 3;

// Network input derived from a state: [log2(1+gamma1), log2(1+gamma2), reward].
Eigen::Vector3d state_features(const EnvState &s);

struct Transition
{
    EnvState state;
    std::vector<double> action; // phases in [0, 2 pi), length M+N
    double reward = 0.0;
    EnvState next_state;
};

// Fixed-capacity ring buffer; once full, each insertion evicts the oldest entry.
class ReplayBuffer
{
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return count_; }
    std::size_t capacity() const { return capacity_; }
    const Transition &at(std::size_t i) const; // 0 = oldest
    std::vector<std::size_t> sample_indices(RngStream &rng, std::size_t batch) const;

private:
    std::size_t capacity_;
    std::vector<Transition> slots_;
    std::size_t head_ = 0; // next write position
    std::size_t count_ = 0;
};

struct OuNoise
{
    Eigen::VectorXd value;
    double theta = 0.15;
    double sigma = 0.2;
    double mu = 0.0;

    OuNoise() = default;
    OuNoise(std::size_t dim, double theta_, double sigma_) : value(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))), theta(theta_), sigma(sigma_) {}
    void reset() { value.setConstant(mu); }
};

// x <- x + theta (mu - x) + sigma g, g ~ N(0, I). Returns the new value.
const Eigen::VectorXd &ou_step(OuNoise &noise, RngStream &rng);

struct TrainConfig
{
    Objective objective = Objective::sum_rate;
    std::size_t episodes = 10000;
    std::size_t steps_per_episode = 50;
    std::size_t batch_size = 128;
    std::size_t buffer_capacity = 100000;
    double discount = 0.99;
    double tau = 1e-3;
    double actor_lr = 1e-4;
    double critic_lr = 3e-4;
    double critic_l2 = 1e-2; // weight decay on critic weights (not biases)
    std::size_t hidden_units = 128;
    double ou_theta = 0.15;
    double ou_sigma = 0.2;
    double reward_offset_db = 100.0;
    std::uint64_t seed = 1;
};

void validate(const TrainConfig &cfg);

struct StepResult
{
    EnvState next;
    double reward = 0.0;
    RatePoint point;
};

// Uplink environment: every step draws a fresh channel, applies the action's
// phases and reports the objective.
class Environment
{
public:
    Environment(const Scenario &scenario, Objective objective, double reward_offset_db);

    EnvState reset(RngStream &rng);
    StepResult step(std::span<const double> action, RngStream &rng);

    // Reward and state for a given realization and phase choice, without drawing.
    StepResult observe(const ChannelRealization &ch, const PhaseConfig &phases) const;

    std::size_t action_size() const { return scenario_->m() + scenario_->n(); }
    const Scenario &scenario() const { return *scenario_; }
    const ChannelRealization &channel() const { return channel_; }
    const EnvState &state() const { return state_; }

private:
    const Scenario *scenario_;
    Objective objective_;
    double offset_db_;
    ChannelRealization channel_;
    EnvState state_;
};

struct Agent
{
    MlpParams actor;         // [3, H, H, M+N]: relu, relu, tanh
    MlpParams critic;        // [3 + M+N, H, H, 1]: relu, relu, linear
    MlpParams target_actor;
    MlpParams target_critic;
    AdamState actor_opt;
    AdamState critic_opt;

    bool operator==(const Agent &) const = default;
};

Agent make_agent(std::size_t action_size, const TrainConfig &cfg, RngStream &rng);

// Phases pi (tanh_output + 1) + noise, wrapped to [0, 2 pi). `noise` may be null.
std::vector<double> agent_act(const MlpParams &actor, const EnvState &state, const Eigen::VectorXd *noise);

// Critic input for a stored action: [cos(phase)...; sin(phase)...]. Continuous
// across the 0 / 2 pi wrap, so the critic never sees a jump at the boundary.
Eigen::VectorXd action_features(std::span<const double> phases);

// Mean Q(s, mu(s)) over the columns of `features` and its gradient w.r.t. the actor parameters.
MlpParams actor_objective_gradient(const MlpParams &actor, const MlpParams &critic, const Eigen::MatrixXd &features,
                                   double *objective);

struct TrainLosses
{
    double critic_loss = 0.0;
    double actor_objective = 0.0;
};

// One DDPG update: critic regression onto r + discount * Q'(s', mu'(s')), actor
// ascent on mean Q(s, mu(s)), then soft target updates.
TrainLosses train_step(Agent &agent, std::span<const Transition> batch, const TrainConfig &cfg);

struct TrainResult
{
    Agent agent;
    std::vector<double> reward_history; // mean reward per episode
    std::string rng_state;
};

TrainResult train(const TrainConfig &cfg, const Scenario &scenario);

// Noiseless policy on one realization. The actor is trained on states produced by
// its own previous actions, so it runs closed-loop on `ch` for `warmup` steps from
// random reset phases before the returned action.
inline constexpr std::size_t kPolicyWarmup = 10;
PhaseConfig policy_phases(const MlpParams &actor, const Environment &env, const ChannelRealization &ch,
                          RngStream &rng, std::size_t warmup = kPolicyWarmup);

// Checkpoint: four networks, both Adam states and the training RNG state.
void save_checkpoint(std::ostream &os, const TrainResult &result);
TrainResult load_checkpoint(std::istream &is);

void write_reward_csv(std::ostream &os, const std::vector<double> &history);

} // namespace irsim

#endif
