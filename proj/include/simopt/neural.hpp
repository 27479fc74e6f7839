// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The simopt Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simopt/rng.hpp"

namespace simopt {

enum class Activation { Tanh, Linear };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

/// Fully connected feed-forward network with its own Adam state.
///
/// Batched calls take one sample per column. Scalar is float for training
/// and double where gradients are checked against finite differences.
template <class Scalar>
class BasicMlp
{
  public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    struct Gradients
    {
        std::vector<Matrix> weight;
        std::vector<Vector> bias;
    };

    /// Post-activation outputs (outputs[0] is the network input) plus
    /// scratch reused by backward. Keep one alive across calls to avoid
    /// reallocating per batch.
    struct Cache
    {
        std::vector<Matrix> outputs;
        std::vector<Matrix> deltas;
    };

    static constexpr Scalar kAdamBeta1 = Scalar(0.9);
    static constexpr Scalar kAdamBeta2 = Scalar(0.999);
    static constexpr Scalar kAdamEpsilon = Scalar(1e-8);

    BasicMlp() = default;

    /// Zero-initialised network.
    BasicMlp(std::vector<int> dims, Activation hidden, Activation output)
        : dims_(std::move(dims)), hidden_(hidden), output_(output)
    {
        if (dims_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
        for (int d : dims_)
            if (d < 1) throw std::invalid_argument("Mlp: layer dims must be positive");
        for (std::size_t i = 0; i + 1 < dims_.size(); ++i) {
            weight_.push_back(Matrix::Zero(dims_[i + 1], dims_[i]));
            bias_.push_back(Vector::Zero(dims_[i + 1]));
        }
        reset_optimizer();
    }

    /// Uniform(+-1/sqrt(fan_in)) weights and biases; the last layer is
    /// additionally multiplied by output_scale.
    static BasicMlp create(std::vector<int> dims, Activation hidden, Activation output, Rng& rng,
                           double output_scale = 1.0)
    {
        BasicMlp net(std::move(dims), hidden, output);
        for (std::size_t i = 0; i < net.weight_.size(); ++i) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[i]));
            const double scale = (i + 1 == net.weight_.size()) ? output_scale : 1.0;
            std::uniform_real_distribution<double> u(-bound, bound);
            for (Eigen::Index j = 0; j < net.weight_[i].size(); ++j)
                net.weight_[i].data()[j] = static_cast<Scalar>(scale * u(rng));
            for (Eigen::Index j = 0; j < net.bias_[i].size(); ++j)
                net.bias_[i].data()[j] = static_cast<Scalar>(scale * u(rng));
        }
        return net;
    }

    const std::vector<int>& dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }
    int num_layers() const { return static_cast<int>(weight_.size()); }
    Activation hidden_activation() const { return hidden_; }
    Activation output_activation() const { return output_; }
    std::int64_t adam_steps() const { return adam_t_; }

    Matrix& weight(int i) { return weight_[i]; }
    const Matrix& weight(int i) const { return weight_[i]; }
    Vector& bias(int i) { return bias_[i]; }
    const Vector& bias(int i) const { return bias_[i]; }

    std::size_t parameter_count() const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < weight_.size(); ++i) n += weight_[i].size() + bias_[i].size();
        return n;
    }

    /// Weights then bias of each layer, column-major.
    std::vector<double> flat_parameters() const
    {
        std::vector<double> out;
        out.reserve(parameter_count());
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            for (Eigen::Index j = 0; j < weight_[i].size(); ++j) out.push_back(weight_[i].data()[j]);
            for (Eigen::Index j = 0; j < bias_[i].size(); ++j) out.push_back(bias_[i].data()[j]);
        }
        return out;
    }

    void set_flat_parameters(const std::vector<double>& flat)
    {
        if (flat.size() != parameter_count()) throw std::invalid_argument("Mlp: parameter count mismatch");
        std::size_t pos = 0;
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            for (Eigen::Index j = 0; j < weight_[i].size(); ++j) weight_[i].data()[j] = static_cast<Scalar>(flat[pos++]);
            for (Eigen::Index j = 0; j < bias_[i].size(); ++j) bias_[i].data()[j] = static_cast<Scalar>(flat[pos++]);
        }
    }

    Vector forward(const Vector& input) const
    {
        Matrix out = forward_batch(input);
        return out.col(0);
    }

    Matrix forward_batch(const Matrix& inputs) const
    {
        check_input(inputs);
        Matrix x = inputs;
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            Matrix z = weight_[i] * x;
            z.colwise() += bias_[i];
            activate(z, activation_of(i));
            x.swap(z);
        }
        return x;
    }

    const Matrix& forward_batch(const Matrix& inputs, Cache& cache) const
    {
        check_input(inputs);
        cache.outputs.resize(weight_.size() + 1);
        cache.outputs[0] = inputs;
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            Matrix& z = cache.outputs[i + 1];
            z.noalias() = weight_[i] * cache.outputs[i];
            z.colwise() += bias_[i];
            activate(z, activation_of(i));
        }
        return cache.outputs.back();
    }

    /// Reverse-mode pass for a loss whose gradient w.r.t. the outputs is
    /// output_grad. Overwrites grads and returns dLoss/dInput (a view into
    /// the cache, valid until the next call).
    const Matrix& backward(Cache& cache, const Matrix& output_grad, Gradients& grads) const
    {
        return backward_impl(cache, output_grad, &grads);
    }

    /// Input gradient only; parameter gradients are skipped.
    const Matrix& input_gradient(Cache& cache, const Matrix& output_grad) const
    {
        return backward_impl(cache, output_grad, nullptr);
    }

    /// Bias-corrected Adam descent step. Throws (net unchanged) when any
    /// gradient entry is not finite.
    void adam_step(const Gradients& grads, Scalar learning_rate)
    {
        if (grads.weight.size() != weight_.size() || grads.bias.size() != bias_.size())
            throw std::invalid_argument("Mlp: gradient layer count mismatch");
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            if (grads.weight[i].rows() != weight_[i].rows() || grads.weight[i].cols() != weight_[i].cols() ||
                grads.bias[i].size() != bias_[i].size())
                throw std::invalid_argument("Mlp: gradient shape mismatch");
            if (!grads.weight[i].allFinite() || !grads.bias[i].allFinite())
                throw std::domain_error("Mlp: non-finite gradient");
        }
        ++adam_t_;
        const Scalar c1 = Scalar(1) - std::pow(kAdamBeta1, static_cast<Scalar>(adam_t_));
        const Scalar c2 = Scalar(1) - std::pow(kAdamBeta2, static_cast<Scalar>(adam_t_));
        const Scalar step = learning_rate * std::sqrt(c2) / c1;
        const Scalar eps = kAdamEpsilon * std::sqrt(c2);
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            adam_update(weight_[i], m_weight_[i], v_weight_[i], grads.weight[i], step, eps);
            adam_update(bias_[i], m_bias_[i], v_bias_[i], grads.bias[i], step, eps);
            if (!weight_[i].allFinite() || !bias_[i].allFinite())
                throw std::domain_error("Mlp: parameters diverged");
        }
    }

    void reset_optimizer()
    {
        m_weight_.clear();
        v_weight_.clear();
        m_bias_.clear();
        v_bias_.clear();
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            m_weight_.push_back(Matrix::Zero(weight_[i].rows(), weight_[i].cols()));
            v_weight_.push_back(Matrix::Zero(weight_[i].rows(), weight_[i].cols()));
            m_bias_.push_back(Vector::Zero(bias_[i].size()));
            v_bias_.push_back(Vector::Zero(bias_[i].size()));
        }
        adam_t_ = 0;
    }

    bool same_architecture(const BasicMlp& other) const
    {
        return dims_ == other.dims_ && hidden_ == other.hidden_ && output_ == other.output_;
    }

    /// this <- tau * source + (1 - tau) * this, parameters only.
    void soft_update_from(const BasicMlp& source, Scalar tau)
    {
        if (!same_architecture(source)) throw std::invalid_argument("soft_update: architecture mismatch");
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            weight_[i] = tau * source.weight_[i] + (Scalar(1) - tau) * weight_[i];
            bias_[i] = tau * source.bias_[i] + (Scalar(1) - tau) * bias_[i];
        }
    }

    bool all_finite() const
    {
        for (std::size_t i = 0; i < weight_.size(); ++i)
            if (!weight_[i].allFinite() || !bias_[i].allFinite()) return false;
        return true;
    }

    template <class Other>
    BasicMlp<Other> cast() const
    {
        BasicMlp<Other> out(dims_, hidden_, output_);
        out.set_flat_parameters(flat_parameters());
        return out;
    }

  private:
    const Matrix& backward_impl(Cache& cache, const Matrix& output_grad, Gradients* grads) const
    {
        if (cache.outputs.size() != weight_.size() + 1) throw std::invalid_argument("Mlp: stale forward cache");
        if (output_grad.rows() != output_dim() || output_grad.cols() != cache.outputs.back().cols())
            throw std::invalid_argument("Mlp: output gradient shape mismatch");
        if (grads) {
            grads->weight.resize(weight_.size());
            grads->bias.resize(weight_.size());
        }
        auto& d = cache.deltas;
        d.resize(weight_.size() + 1);
        d.back() = output_grad;
        for (std::size_t ii = weight_.size(); ii-- > 0;) {
            if (activation_of(ii) == Activation::Tanh)
                d[ii + 1].array() *= (Scalar(1) - cache.outputs[ii + 1].array().square());
            if (grads) {
                grads->weight[ii].noalias() = d[ii + 1] * cache.outputs[ii].transpose();
                grads->bias[ii] = d[ii + 1].rowwise().sum();
            }
            d[ii].noalias() = weight_[ii].transpose() * d[ii + 1];
        }
        return d.front();
    }

    Activation activation_of(std::size_t layer) const { return layer + 1 == weight_.size() ? output_ : hidden_; }

    static void activate(Matrix& z, Activation a)
    {
        if (a == Activation::Tanh) z = z.array().tanh().matrix();
    }

    void check_input(const Matrix& inputs) const
    {
        if (weight_.empty()) throw std::logic_error("Mlp: network has no layers");
        if (inputs.rows() != input_dim()) throw std::invalid_argument("Mlp: input length mismatch");
    }

    template <class P, class G>
    static void adam_update(P& param, P& m, P& v, const G& g, Scalar step, Scalar eps)
    {
        m = kAdamBeta1 * m + (Scalar(1) - kAdamBeta1) * g;
        v = kAdamBeta2 * v + (Scalar(1) - kAdamBeta2) * g.cwiseProduct(g);
        param.array() -= step * m.array() / (v.array().sqrt() + eps);
    }

    std::vector<int> dims_;
    Activation hidden_ = Activation::Tanh;
    Activation output_ = Activation::Linear;
    std::vector<Matrix> weight_;
    std::vector<Vector> bias_;
    std::vector<Matrix> m_weight_, v_weight_;
    std::vector<Vector> m_bias_, v_bias_;
    std::int64_t adam_t_ = 0;
};

using Mlp = BasicMlp<float>;
using MlpD = BasicMlp<double>;

/// Multiply-accumulate count of N_T training steps for an actor with dims
/// [D1, L1, L2, D2] and two critics with dims [D3, L1, L2, 1]:
/// N_T [D1 L1 + L1 L2 + L2 D2 + 2 (D3 L1 + L1 L2 + L2)].
std::uint64_t complexity_estimate(const std::vector<std::uint64_t>& actor_dims,
                                  const std::vector<std::uint64_t>& critic_dims, std::uint64_t total_steps);

/// Checkpoint: text header ("simopt-mlp 1", dims, activations, parameter
/// count) followed by the flat parameters as little-endian doubles.
void save_checkpoint(const std::filesystem::path& path, const MlpD& net);
MlpD load_checkpoint(const std::filesystem::path& path);

template <class Scalar>
void save_checkpoint(const std::filesystem::path& path, const BasicMlp<Scalar>& net)
{
    save_checkpoint(path, net.template cast<double>());
}

}  // namespace simopt
