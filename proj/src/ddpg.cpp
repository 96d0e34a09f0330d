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

#include "irsim/ddpg.hpp"
#include "irsim/errors.hpp"
#include "irsim/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace irsim
{

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kTrainTag = 0x7124A1ULL;
constexpr std::uint64_t kInitTag = 0x1A17ULL;
constexpr double kOutputInitBound = 3e-3;
} // namespace

std::string to_string(Objective obj)
{
    return obj == Objective::sum_rate ? "sum_rate" : "desired_user";
}

Objective objective_from_string(const std::string &name)
{
    if (name == "sum_rate")
        return Objective::sum_rate;
    if (name == "desired_user")
        return Objective::desired_user;
    fail(ErrorCode::domain, "unknown objective '" + name + "' (expected desired_user or sum_rate)");
}

Eigen::Vector3d state_features(const EnvState &s)
{
    return {std::log2(1.0 + s.gamma1), std::log2(1.0 + s.gamma2), s.reward};
}

// ---- replay buffer -------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        fail(ErrorCode::domain, "ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Transition t)
{
    if (slots_.size() < capacity_)
        slots_.push_back(std::move(t));
    else
        slots_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
    count_ = std::min(count_ + 1, capacity_);
}

const Transition &ReplayBuffer::at(std::size_t i) const
{
    if (i >= count_)
        fail(ErrorCode::domain, "ReplayBuffer::at: index out of range");
    const std::size_t oldest = count_ < capacity_ ? 0 : head_;
    return slots_[(oldest + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(RngStream &rng, std::size_t batch) const
{
    if (count_ == 0)
        fail(ErrorCode::domain, "ReplayBuffer::sample_indices: buffer is empty");
    std::vector<std::size_t> idx(batch);
    for (auto &i : idx)
        i = rng.index(count_);
    return idx;
}

// ---- exploration ---------------------------------------------------------

const Eigen::VectorXd &ou_step(OuNoise &noise, RngStream &rng)
{
    for (Eigen::Index i = 0; i < noise.value.size(); ++i)
        noise.value(i) += noise.theta * (noise.mu - noise.value(i)) + noise.sigma * rng.normal();
    return noise.value;
}

void validate(const TrainConfig &c)
{
    auto require = [](bool ok, const char *key, const char *constraint) {
        if (!ok)
            fail(ErrorCode::config_constraint, std::string(key) + ": must be " + constraint);
    };
    require(c.episodes >= 1, "episodes", ">= 1");
    require(c.steps_per_episode >= 1, "steps_per_episode", ">= 1");
    require(c.batch_size >= 1, "batch_size", ">= 1");
    require(c.buffer_capacity >= c.batch_size, "buffer_capacity", ">= batch_size");
    require(c.discount >= 0.0 && c.discount < 1.0, "discount", "in [0, 1)");
    require(c.tau > 0.0 && c.tau <= 1.0, "tau", "in (0, 1]");
    require(c.actor_lr > 0.0 && std::isfinite(c.actor_lr), "actor_lr", "> 0");
    require(c.critic_lr > 0.0 && std::isfinite(c.critic_lr), "critic_lr", "> 0");
    require(c.hidden_units >= 1, "hidden_units", ">= 1");
    require(c.critic_l2 >= 0.0 && std::isfinite(c.critic_l2), "critic_l2", ">= 0");
    require(c.ou_theta >= 0.0 && std::isfinite(c.ou_theta), "ou_theta", ">= 0");
    require(c.ou_sigma >= 0.0 && std::isfinite(c.ou_sigma), "ou_sigma", ">= 0");
    require(std::isfinite(c.reward_offset_db), "reward_offset_db", "finite");
}

// ---- environment ---------------------------------------------------------

Environment::Environment(const Scenario &scenario, Objective objective, double reward_offset_db)
    : scenario_(&scenario), objective_(objective), offset_db_(reward_offset_db)
{
}

StepResult Environment::observe(const ChannelRealization &ch, const PhaseConfig &phases) const
{
    StepResult out;
    out.point = evaluate(ch, phases, scenario_->link);
    if (objective_ == Objective::sum_rate)
        out.reward = out.point.sum_rate;
    else
        out.reward = 10.0 * std::log10(std::max(out.point.p_rx[0], 1e-300)) + offset_db_;
    out.next = {out.point.sinr[0], out.point.sinr[1], out.reward};
    return out;
}

EnvState Environment::reset(RngStream &rng)
{
    channel_ = draw_channel(scenario_->channel, rng);
    const PhaseConfig phases = solve_random(rng, scenario_->m(), scenario_->n());
    state_ = observe(channel_, phases).next;
    return state_;
}

StepResult Environment::step(std::span<const double> action, RngStream &rng)
{
    if (action.size() != action_size())
        fail(ErrorCode::shape, "Environment::step: action has " + std::to_string(action.size()) +
                                   " entries, expected " + std::to_string(action_size()));
    for (double a : action)
        if (!std::isfinite(a))
            fail(ErrorCode::domain, "Environment::step: non-finite action");
    channel_ = draw_channel(scenario_->channel, rng);
    StepResult res = observe(channel_, PhaseConfig::from_flat(action, scenario_->m()));
    state_ = res.next;
    return res;
}

// ---- agent ---------------------------------------------------------------

Agent make_agent(std::size_t action_size, const TrainConfig &cfg, RngStream &rng)
{
    const std::size_t h = cfg.hidden_units;
    Agent a;
    a.actor = mlp_init({kStateSize, h, h, action_size}, {Activation::relu, Activation::relu, Activation::tanh}, rng);
    a.critic = mlp_init({kStateSize + 2 * action_size, h, h, 1}, {Activation::relu, Activation::relu, Activation::linear},
                        rng);
    // Small output layers keep the initial policy away from tanh saturation and
    // the initial Q estimates near zero.
    for (MlpParams *net : {&a.actor, &a.critic})
        for (double &w : net->layers.back().weight.reshaped())
            w = rng.uniform(-kOutputInitBound, kOutputInitBound);
    a.target_actor = a.actor;
    a.target_critic = a.critic;
    a.actor_opt = AdamState::zeros_like(a.actor);
    a.critic_opt = AdamState::zeros_like(a.critic);
    return a;
}

std::vector<double> agent_act(const MlpParams &actor, const EnvState &state, const Eigen::VectorXd *noise)
{
    if (actor.input_size() != kStateSize)
        fail(ErrorCode::shape, "agent_act: actor must take a 3-component state");
    const Eigen::VectorXd u = forward(actor, Eigen::VectorXd(state_features(state)));
    if (noise && noise->size() != u.size())
        fail(ErrorCode::shape, "agent_act: noise dimension differs from the action dimension");
    std::vector<double> a(static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i)
        a[static_cast<std::size_t>(i)] = wrap_2pi(kPi * (u(i) + 1.0) + (noise ? (*noise)(i) : 0.0));
    return a;
}

Eigen::VectorXd action_features(std::span<const double> phases)
{
    const auto a = static_cast<Eigen::Index>(phases.size());
    Eigen::VectorXd v(2 * a);
    for (Eigen::Index i = 0; i < a; ++i)
    {
        v(i) = std::cos(phases[static_cast<std::size_t>(i)]);
        v(a + i) = std::sin(phases[static_cast<std::size_t>(i)]);
    }
    return v;
}

namespace
{

// Columnwise action_features of the phases pi (u + 1).
Eigen::MatrixXd embed_outputs(const Eigen::MatrixXd &u)
{
    const Eigen::ArrayXXd phi = kPi * (u.array() + 1.0);
    Eigen::MatrixXd out(2 * u.rows(), u.cols());
    out.topRows(u.rows()) = phi.cos().matrix();
    out.bottomRows(u.rows()) = phi.sin().matrix();
    return out;
}

Eigen::MatrixXd stack(const Eigen::MatrixXd &top, const Eigen::MatrixXd &bottom)
{
    Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
    out << top, bottom;
    return out;
}

MlpParams scaled(const MlpParams &g, double s)
{
    MlpParams out = g;
    for (auto &l : out.layers)
    {
        l.weight *= s;
        l.bias *= s;
    }
    return out;
}
} // namespace

MlpParams actor_objective_gradient(const MlpParams &actor, const MlpParams &critic, const Eigen::MatrixXd &features,
                                   double *objective)
{
    const auto batch = static_cast<double>(features.cols());
    ForwardCache actor_cache, critic_cache;
    const Eigen::MatrixXd u = forward(actor, features, &actor_cache);
    const Eigen::MatrixXd q = forward(critic, stack(features, embed_outputs(u)), &critic_cache);
    if (objective)
        *objective = q.mean();

    const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, features.cols(), 1.0 / batch);
    const Gradients gc = backward(critic, critic_cache, dq);
    const Eigen::Index a = u.rows();
    const Eigen::ArrayXXd phi = kPi * (u.array() + 1.0);
    const Eigen::ArrayXXd g_cos = gc.input.middleRows(features.rows(), a).array();
    const Eigen::ArrayXXd g_sin = gc.input.bottomRows(a).array();
    const Eigen::MatrixXd du = (kPi * (g_sin * phi.cos() - g_cos * phi.sin())).matrix();
    return backward(actor, actor_cache, du).params;
}

TrainLosses train_step(Agent &agent, std::span<const Transition> batch, const TrainConfig &cfg)
{
    if (batch.size() != cfg.batch_size)
        fail(ErrorCode::shape, "train_step: batch has " + std::to_string(batch.size()) + " transitions, expected " +
                                   std::to_string(cfg.batch_size));
    const auto b = static_cast<Eigen::Index>(batch.size());
    const auto a_dim = static_cast<Eigen::Index>(agent.actor.output_size());

    Eigen::MatrixXd s(kStateSize, b), s_next(kStateSize, b), act(2 * a_dim, b);
    Eigen::RowVectorXd r(b);
    for (Eigen::Index i = 0; i < b; ++i)
    {
        const Transition &t = batch[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(t.action.size()) != a_dim)
            fail(ErrorCode::shape, "train_step: stored action has the wrong length");
        s.col(i) = state_features(t.state);
        s_next.col(i) = state_features(t.next_state);
        act.col(i) = action_features(t.action);
        r(i) = t.reward;
    }

    // Bellman targets from the target networks.
    const Eigen::MatrixXd u_next = forward(agent.target_actor, s_next);
    const Eigen::RowVectorXd q_next = forward(agent.target_critic, stack(s_next, embed_outputs(u_next)));
    const Eigen::RowVectorXd y = r + cfg.discount * q_next;

    TrainLosses losses;
    ForwardCache cache;
    const Eigen::RowVectorXd q = forward(agent.critic, stack(s, act), &cache);
    const Eigen::RowVectorXd diff = q - y;
    losses.critic_loss = diff.squaredNorm() / static_cast<double>(b);
    Gradients gc = backward(agent.critic, cache, Eigen::MatrixXd(2.0 * diff / static_cast<double>(b)));
    if (cfg.critic_l2 > 0.0)
        for (std::size_t l = 0; l < gc.params.layers.size(); ++l)
            gc.params.layers[l].weight += cfg.critic_l2 * agent.critic.layers[l].weight;
    adam_step(agent.critic, gc.params, agent.critic_opt, cfg.critic_lr);

    const MlpParams ascent = actor_objective_gradient(agent.actor, agent.critic, s, &losses.actor_objective);
    adam_step(agent.actor, scaled(ascent, -1.0), agent.actor_opt, cfg.actor_lr);

    agent.target_critic = soft_update(agent.target_critic, agent.critic, cfg.tau);
    agent.target_actor = soft_update(agent.target_actor, agent.actor, cfg.tau);
    return losses;
}

TrainResult train(const TrainConfig &cfg, const Scenario &scenario)
{
    validate(cfg);
    RngStream rng(cfg.seed, stream_key({kTrainTag}));
    RngStream init_rng(cfg.seed, stream_key({kInitTag}));

    Environment env(scenario, cfg.objective, cfg.reward_offset_db);
    const std::size_t a_dim = env.action_size();
    TrainResult out;
    out.agent = make_agent(a_dim, cfg, init_rng);

    ReplayBuffer buffer(cfg.buffer_capacity);
    OuNoise noise(a_dim, cfg.ou_theta, cfg.ou_sigma);
    std::vector<Transition> batch(cfg.batch_size);
    out.reward_history.reserve(cfg.episodes);

    for (std::size_t ep = 0; ep < cfg.episodes; ++ep)
    {
        EnvState state = env.reset(rng);
        noise.reset();
        double total = 0.0;
        for (std::size_t t = 0; t < cfg.steps_per_episode; ++t)
        {
            const Eigen::VectorXd &n = ou_step(noise, rng);
            std::vector<double> action = agent_act(out.agent.actor, state, &n);
            const StepResult res = env.step(action, rng);
            total += res.reward;
            buffer.push({state, std::move(action), res.reward, res.next});
            state = res.next;

            if (buffer.size() >= cfg.batch_size)
            {
                const auto idx = buffer.sample_indices(rng, cfg.batch_size);
                for (std::size_t i = 0; i < idx.size(); ++i)
                    batch[i] = buffer.at(idx[i]);
                train_step(out.agent, batch, cfg);
            }
        }
        out.reward_history.push_back(total / static_cast<double>(cfg.steps_per_episode));
    }
    out.rng_state = rng.save_state();
    return out;
}

PhaseConfig policy_phases(const MlpParams &actor, const Environment &env, const ChannelRealization &ch,
                          RngStream &rng, std::size_t warmup)
{
    const Scenario &sc = env.scenario();
    EnvState s = env.observe(ch, solve_random(rng, sc.m(), sc.n())).next;
    for (std::size_t i = 0; i < warmup; ++i)
        s = env.observe(ch, PhaseConfig::from_flat(agent_act(actor, s, nullptr), sc.m())).next;
    return PhaseConfig::from_flat(agent_act(actor, s, nullptr), sc.m());
}

// ---- persistence ---------------------------------------------------------

namespace
{

std::string hex(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hex(const std::string &tok)
{
    char *end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        fail(ErrorCode::io, "load_checkpoint: bad number '" + tok + "'");
    return v;
}

void expect(std::istream &is, const std::string &word)
{
    std::string tok;
    if (!(is >> tok) || tok != word)
        fail(ErrorCode::io, "load_checkpoint: expected '" + word + "'");
}

void save_adam(std::ostream &os, const char *name, const AdamState &s)
{
    os << "adam " << name << ' ' << s.step << ' ' << hex(s.beta1) << ' ' << hex(s.beta2) << ' ' << hex(s.eps) << '\n';
    save_mlp(os, s.first);
    save_mlp(os, s.second);
}

AdamState load_adam(std::istream &is, const char *name)
{
    expect(is, "adam");
    expect(is, name);
    AdamState s;
    std::string b1, b2, eps;
    if (!(is >> s.step >> b1 >> b2 >> eps))
        fail(ErrorCode::io, "load_checkpoint: bad adam header");
    s.beta1 = parse_hex(b1);
    s.beta2 = parse_hex(b2);
    s.eps = parse_hex(eps);
    s.first = load_mlp(is);
    s.second = load_mlp(is);
    return s;
}

} // namespace

void save_checkpoint(std::ostream &os, const TrainResult &result)
{
    const Agent &a = result.agent;
    os << "irsim-checkpoint 1\n";
    os << "net actor\n";
    save_mlp(os, a.actor);
    os << "net critic\n";
    save_mlp(os, a.critic);
    os << "net target_actor\n";
    save_mlp(os, a.target_actor);
    os << "net target_critic\n";
    save_mlp(os, a.target_critic);
    save_adam(os, "actor", a.actor_opt);
    save_adam(os, "critic", a.critic_opt);
    os << "history " << result.reward_history.size() << '\n';
    for (double v : result.reward_history)
        os << hex(v) << '\n';
    os << "rng " << result.rng_state << '\n';
    if (!os)
        fail(ErrorCode::io, "save_checkpoint: write failed");
}

TrainResult load_checkpoint(std::istream &is)
{
    expect(is, "irsim-checkpoint");
    expect(is, "1");
    TrainResult r;
    auto net = [&](const char *name) {
        expect(is, "net");
        expect(is, name);
        return load_mlp(is);
    };
    r.agent.actor = net("actor");
    r.agent.critic = net("critic");
    r.agent.target_actor = net("target_actor");
    r.agent.target_critic = net("target_critic");
    r.agent.actor_opt = load_adam(is, "actor");
    r.agent.critic_opt = load_adam(is, "critic");
    expect(is, "history");
    std::size_t count = 0;
    if (!(is >> count))
        fail(ErrorCode::io, "load_checkpoint: bad history length");
    for (std::size_t i = 0; i < count; ++i)
    {
        std::string tok;
        if (!(is >> tok))
            fail(ErrorCode::io, "load_checkpoint: truncated history");
        r.reward_history.push_back(parse_hex(tok));
    }
    expect(is, "rng");
    is >> std::ws;
    std::getline(is, r.rng_state);
    if (r.rng_state.empty())
        fail(ErrorCode::io, "load_checkpoint: missing rng state");
    RngStream probe(0, 0);
    probe.load_state(r.rng_state); // validates
    return r;
}

void write_reward_csv(std::ostream &os, const std::vector<double> &history)
{
    os << "episode,mean_reward\n";
    char buf[64];
    for (std::size_t i = 0; i < history.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%.17g", history[i]);
        os << i << ',' << buf << '\n';
    }
}

} // namespace irsim
