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

#ifndef IRSIM_NEURALNET_HPP
#define IRSIM_NEURALNET_HPP

#include "irsim/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace irsim
{

enum class Activation
{
    relu,
    tanh,
    linear
};

std::string to_string(Activation act);
Activation activation_from_string(const std::string &name);

struct DenseLayer
{
    Eigen::MatrixXd weight; // out x in
    Eigen::VectorXd bias;   // out
    Activation act = Activation::linear;

    bool operator==(const DenseLayer &o) const { return act == o.act && weight == o.weight && bias == o.bias; }
};

struct MlpParams
{
    std::vector<DenseLayer> layers;

    std::size_t input_size() const;
    std::size_t output_size() const;
    std::size_t parameter_count() const;
    bool same_shape(const MlpParams &other) const;
    bool operator==(const MlpParams &) const = default;

    // Flat views in layer order (weights column-major, then bias) for tests and tooling.
    std::vector<double> flatten() const;
    void unflatten(const std::vector<double> &values);
};

// Inputs and pre-activations per layer, columns are batch samples.
struct ForwardCache
{
    std::vector<Eigen::MatrixXd> inputs;
    std::vector<Eigen::MatrixXd> pre;
};

struct Gradients
{
    MlpParams params;      // same shapes as the network; activation tags copied
    Eigen::MatrixXd input; // d loss / d input, in x batch
};

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero. `sizes` has one more
// entry than `acts`.
MlpParams mlp_init(const std::vector<std::size_t> &sizes, const std::vector<Activation> &acts, RngStream &rng);

Eigen::MatrixXd forward(const MlpParams &net, const Eigen::MatrixXd &x, ForwardCache *cache = nullptr);
Eigen::VectorXd forward(const MlpParams &net, const Eigen::VectorXd &x);

// Reverse-mode gradients of a loss whose gradient w.r.t. the network output is
// `grad_out` (out x batch); parameter gradients are summed over the batch.
// ReLU uses the subgradient 0 at a pre-activation of exactly 0.
Gradients backward(const MlpParams &net, const ForwardCache &cache, const Eigen::MatrixXd &grad_out);

struct AdamState
{
    MlpParams first;
    MlpParams second;
    std::uint64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState zeros_like(const MlpParams &net);
    bool operator==(const AdamState &) const = default;
};

// Bias-corrected Adam descent step.
void adam_step(MlpParams &net, const MlpParams &grads, AdamState &state, double lr);

// tau * online + (1 - tau) * target, elementwise.
MlpParams soft_update(const MlpParams &target, const MlpParams &online, double tau);

// Text format, exact round trip (hex-float values):
//   irsim-mlp 1
//   layers <L>
//   dense <in> <out> <relu|tanh|linear>
//   <out*in weights, row-major>
//   <out biases>
void save_mlp(std::ostream &os, const MlpParams &net);
MlpParams load_mlp(std::istream &is);

} // namespace irsim

#endif
