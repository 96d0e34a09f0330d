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

#include "irsim/neuralnet.hpp"
#include "irsim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace irsim
{

std::string to_string(Activation act)
{
    switch (act)
    {
    case Activation::relu:
        return "relu";
    case Activation::tanh:
        return "tanh";
    case Activation::linear:
        return "linear";
    }
    return "linear";
}

Activation activation_from_string(const std::string &name)
{
    if (name == "relu")
        return Activation::relu;
    if (name == "tanh")
        return Activation::tanh;
    if (name == "linear")
        return Activation::linear;
    fail(ErrorCode::domain, "unknown activation '" + name + "'");
}

std::size_t MlpParams::input_size() const
{
    return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weight.cols());
}

std::size_t MlpParams::output_size() const
{
    return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weight.rows());
}

std::size_t MlpParams::parameter_count() const
{
    std::size_t total = 0;
    for (const auto &l : layers)
        total += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return total;
}

bool MlpParams::same_shape(const MlpParams &other) const
{
    if (layers.size() != other.layers.size())
        return false;
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (layers[i].weight.rows() != other.layers[i].weight.rows() ||
            layers[i].weight.cols() != other.layers[i].weight.cols())
            return false;
    return true;
}

std::vector<double> MlpParams::flatten() const
{
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto &l : layers)
    {
        out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.size());
        out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
    }
    return out;
}

void MlpParams::unflatten(const std::vector<double> &values)
{
    if (values.size() != parameter_count())
        fail(ErrorCode::shape, "MlpParams::unflatten: wrong number of values");
    std::size_t pos = 0;
    for (auto &l : layers)
    {
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(pos), l.weight.size(), l.weight.data());
        pos += static_cast<std::size_t>(l.weight.size());
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(), l.bias.data());
        pos += static_cast<std::size_t>(l.bias.size());
    }
}

MlpParams mlp_init(const std::vector<std::size_t> &sizes, const std::vector<Activation> &acts, RngStream &rng)
{
    if (sizes.size() < 2)
        fail(ErrorCode::domain, "mlp_init: need at least an input and an output size");
    if (acts.size() != sizes.size() - 1)
        fail(ErrorCode::domain, "mlp_init: one activation per layer required");
    MlpParams net;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    {
        if (sizes[l] == 0 || sizes[l + 1] == 0)
            fail(ErrorCode::domain, "mlp_init: layer sizes must be positive");
        DenseLayer layer;
        const auto in = static_cast<Eigen::Index>(sizes[l]);
        const auto out = static_cast<Eigen::Index>(sizes[l + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        layer.weight.resize(out, in);
        for (Eigen::Index r = 0; r < out; ++r)
            for (Eigen::Index c = 0; c < in; ++c)
                layer.weight(r, c) = rng.uniform(-bound, bound);
        layer.bias = Eigen::VectorXd::Zero(out);
        layer.act = acts[l];
        net.layers.push_back(std::move(layer));
    }
    return net;
}

namespace
{

void activate(Eigen::MatrixXd &z, Activation act)
{
    switch (act)
    {
    case Activation::relu:
        z = z.cwiseMax(0.0);
        break;
    case Activation::tanh:
        z = z.array().tanh().matrix();
        break;
    case Activation::linear:
        break;
    }
}

// d act / d pre, elementwise, applied to `grad` in place.
void activate_backward(Eigen::MatrixXd &grad, const Eigen::MatrixXd &pre, Activation act)
{
    switch (act)
    {
    case Activation::relu:
        grad = (pre.array() > 0.0).select(grad, 0.0);
        break;
    case Activation::tanh:
        grad.array() *= 1.0 - pre.array().tanh().square();
        break;
    case Activation::linear:
        break;
    }
}

} // namespace

Eigen::MatrixXd forward(const MlpParams &net, const Eigen::MatrixXd &x, ForwardCache *cache)
{
    if (net.layers.empty())
        fail(ErrorCode::shape, "forward: empty network");
    if (static_cast<std::size_t>(x.rows()) != net.input_size())
        fail(ErrorCode::shape, "forward: input has " + std::to_string(x.rows()) + " rows, network expects " +
                                   std::to_string(net.input_size()));
    if (cache)
    {
        cache->inputs.clear();
        cache->pre.clear();
    }
    Eigen::MatrixXd h = x;
    for (const auto &layer : net.layers)
    {
        Eigen::MatrixXd z = layer.weight * h;
        z.colwise() += layer.bias;
        if (cache)
        {
            cache->inputs.push_back(std::move(h));
            cache->pre.push_back(z);
        }
        activate(z, layer.act);
        h = std::move(z);
    }
    return h;
}

Eigen::VectorXd forward(const MlpParams &net, const Eigen::VectorXd &x)
{
    const Eigen::MatrixXd out = forward(net, Eigen::MatrixXd(x), nullptr);
    return out.col(0);
}

Gradients backward(const MlpParams &net, const ForwardCache &cache, const Eigen::MatrixXd &grad_out)
{
    const std::size_t depth = net.layers.size();
    if (cache.pre.size() != depth || cache.inputs.size() != depth)
        fail(ErrorCode::shape, "backward: cache does not belong to this network");
    if (grad_out.rows() != cache.pre.back().rows() || grad_out.cols() != cache.pre.back().cols())
        fail(ErrorCode::shape, "backward: output gradient shape does not match the cached forward pass");

    Gradients g;
    g.params = net;
    Eigen::MatrixXd grad = grad_out;
    for (std::size_t l = depth; l-- > 0;)
    {
        const DenseLayer &layer = net.layers[l];
        if (cache.pre[l].rows() != layer.weight.rows() || cache.inputs[l].rows() != layer.weight.cols())
            fail(ErrorCode::shape, "backward: stale cache for layer " + std::to_string(l));
        activate_backward(grad, cache.pre[l], layer.act);
        g.params.layers[l].weight.noalias() = grad * cache.inputs[l].transpose();
        g.params.layers[l].bias = grad.rowwise().sum();
        grad = layer.weight.transpose() * grad;
    }
    g.input = std::move(grad);
    return g;
}

AdamState AdamState::zeros_like(const MlpParams &net)
{
    AdamState s;
    s.first = net;
    for (auto &l : s.first.layers)
    {
        l.weight.setZero();
        l.bias.setZero();
    }
    s.second = s.first;
    return s;
}

void adam_step(MlpParams &net, const MlpParams &grads, AdamState &state, double lr)
{
    if (!(lr > 0.0))
        fail(ErrorCode::domain, "adam_step: learning rate must be positive");
    if (!net.same_shape(grads) || !net.same_shape(state.first) || !net.same_shape(state.second))
        fail(ErrorCode::shape, "adam_step: parameter, gradient and moment shapes differ");

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);

    auto update = [&](auto &param, const auto &grad, auto &m, auto &v) {
        m.array() = state.beta1 * m.array() + (1.0 - state.beta1) * grad.array();
        v.array() = state.beta2 * v.array() + (1.0 - state.beta2) * grad.array().square();
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + state.eps);
    };
    for (std::size_t l = 0; l < net.layers.size(); ++l)
    {
        update(net.layers[l].weight, grads.layers[l].weight, state.first.layers[l].weight,
               state.second.layers[l].weight);
        update(net.layers[l].bias, grads.layers[l].bias, state.first.layers[l].bias, state.second.layers[l].bias);
    }
}

MlpParams soft_update(const MlpParams &target, const MlpParams &online, double tau)
{
    if (!(tau > 0.0 && tau <= 1.0))
        fail(ErrorCode::domain, "soft_update: tau must lie in (0, 1]");
    if (!target.same_shape(online))
        fail(ErrorCode::shape, "soft_update: network shapes differ");
    if (tau == 1.0)
        return online;
    MlpParams out = target;
    for (std::size_t l = 0; l < out.layers.size(); ++l)
    {
        out.layers[l].weight = tau * online.layers[l].weight + (1.0 - tau) * target.layers[l].weight;
        out.layers[l].bias = tau * online.layers[l].bias + (1.0 - tau) * target.layers[l].bias;
    }
    return out;
}

namespace
{

void write_values(std::ostream &os, const double *data, Eigen::Index count)
{
    char buf[64];
    for (Eigen::Index i = 0; i < count; ++i)
    {
        std::snprintf(buf, sizeof buf, "%a", data[i]);
        os << buf << (i + 1 == count ? '\n' : ' ');
    }
    if (count == 0)
        os << '\n';
}

double read_value(std::istream &is)
{
    std::string tok;
    if (!(is >> tok))
        fail(ErrorCode::io, "load_mlp: truncated parameter data");
    char *end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        fail(ErrorCode::io, "load_mlp: bad number '" + tok + "'");
    return v;
}

} // namespace

void save_mlp(std::ostream &os, const MlpParams &net)
{
    os << "irsim-mlp 1\nlayers " << net.layers.size() << '\n';
    for (const auto &l : net.layers)
    {
        os << "dense " << l.weight.cols() << ' ' << l.weight.rows() << ' ' << to_string(l.act) << '\n';
        const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = l.weight;
        write_values(os, w.data(), w.size());
        write_values(os, l.bias.data(), l.bias.size());
    }
    if (!os)
        fail(ErrorCode::io, "save_mlp: write failed");
}

MlpParams load_mlp(std::istream &is)
{
    std::string magic, word;
    int version = 0;
    std::size_t count = 0;
    if (!(is >> magic >> version) || magic != "irsim-mlp" || version != 1)
        fail(ErrorCode::io, "load_mlp: not an irsim-mlp v1 stream");
    if (!(is >> word >> count) || word != "layers")
        fail(ErrorCode::io, "load_mlp: missing layer count");
    MlpParams net;
    for (std::size_t i = 0; i < count; ++i)
    {
        Eigen::Index in = 0, out = 0;
        std::string act;
        if (!(is >> word >> in >> out >> act) || word != "dense" || in <= 0 || out <= 0)
            fail(ErrorCode::io, "load_mlp: bad layer header");
        DenseLayer l;
        l.act = activation_from_string(act);
        l.weight.resize(out, in);
        for (Eigen::Index r = 0; r < out; ++r)
            for (Eigen::Index c = 0; c < in; ++c)
                l.weight(r, c) = read_value(is);
        l.bias.resize(out);
        for (Eigen::Index r = 0; r < out; ++r)
            l.bias(r) = read_value(is);
        net.layers.push_back(std::move(l));
    }
    return net;
}

} // namespace irsim
