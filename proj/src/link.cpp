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

#include "simopt/link.hpp"

#include <numbers>
#include <stdexcept>

namespace simopt {

PowerAllocation PowerAllocation::uniform(int users, double budget)
{
    return {VectorXd::Constant(users, budget / users), budget};
}

bool PowerAllocation::feasible() const
{
    if (!(total_budget >= 0.0)) return false;
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (!(p(k) >= 0.0) || !std::isfinite(p(k))) return false;
    return p.sum() <= total_budget + 1e-12 * total_budget;
}

void PowerAllocation::validate() const
{
    if (!feasible()) throw std::invalid_argument("PowerAllocation: violates p_k >= 0 or sum p_k <= P_t");
}

MatrixXd effective_gains(const ChannelRealization& channel, const MatrixXcd& propagated)
{
    const int k_count = channel.users();
    if (propagated.cols() != k_count || propagated.rows() != channel.atoms())
        throw std::invalid_argument("effective_gains: dimension mismatch");
    MatrixXd a(k_count, k_count);
    for (int k = 0; k < k_count; ++k)
        for (int j = 0; j < k_count; ++j) a(k, j) = std::norm(channel.h[k].dot(propagated.col(j)));
    return a;
}

MatrixXd effective_gains(const ChannelRealization& channel, const MatrixXcd& G, const MatrixXcd& feed)
{
    if (G.rows() != G.cols() || G.cols() != feed.rows())
        throw std::invalid_argument("effective_gains: dimension mismatch");
    return effective_gains(channel, MatrixXcd(G * feed));
}

VectorXd sinr(const MatrixXd& gains, const PowerAllocation& power, double noise_power)
{
    if (!(noise_power > 0.0)) throw std::invalid_argument("sinr: noise power must be positive");
    power.validate();
    const int k_count = static_cast<int>(gains.rows());
    if (gains.cols() != k_count || power.users() != k_count) throw std::invalid_argument("sinr: dimension mismatch");
    VectorXd gamma(k_count);
    for (int k = 0; k < k_count; ++k) {
        double interference = 0.0;
        for (int j = 0; j < k_count; ++j)
            if (j != k) interference += gains(k, j) * power.p(j);
        gamma(k) = gains(k, k) * power.p(k) / (interference + noise_power);
    }
    return gamma;
}

double sum_rate(const VectorXd& gamma)
{
    double r = 0.0;
    for (Eigen::Index k = 0; k < gamma.size(); ++k) {
        if (!(gamma(k) >= 0.0)) throw std::invalid_argument("sum_rate: SINR must be nonnegative");
        r += std::log1p(gamma(k)) / std::numbers::ln2;
    }
    return r;
}

double evaluate_sum_rate(const PhaseConfig& phases, const PropagationSet& prop, const ChannelRealization& channel,
                         const PowerAllocation& power, double noise_power)
{
    return sum_rate(sinr(effective_gains(channel, propagate_feed(phases, prop)), power, noise_power));
}

MatrixXd sum_rate_phase_gradient(const PhaseConfig& phases, const PropagationSet& prop,
                                 const ChannelRealization& channel, const PowerAllocation& power,
                                 double noise_power)
{
    if (!(noise_power > 0.0)) throw std::invalid_argument("sum_rate_phase_gradient: noise power must be positive");
    power.validate();
    const int layers = phases.layers();
    const int k_count = channel.users();
    if (prop.feed.cols() != k_count || channel.atoms() != prop.atoms() || power.users() != k_count)
        throw std::invalid_argument("sum_rate_phase_gradient: dimension mismatch");

    // Forward: pre_phase[l] holds the fields arriving at layer l before its
    // phase shift, one column per antenna.
    std::vector<MatrixXcd> pre_phase(layers);
    pre_phase[0] = prop.feed;
    MatrixXcd x = phases.unit_response(0).asDiagonal() * prop.feed;
    for (int l = 1; l < layers; ++l) {
        pre_phase[l] = prop.interlayer[l - 1] * x;
        x = phases.unit_response(l).asDiagonal() * pre_phase[l];
    }

    // z(k, j) = h_k^H G w_j.
    MatrixXcd z(k_count, k_count);
    for (int k = 0; k < k_count; ++k)
        for (int j = 0; j < k_count; ++j) z(k, j) = channel.h[k].dot(x.col(j));

    // dR/dA(k, j) = (1/ln 2) [p_j / S_k - [j != k] p_j / (S_k - A_kk p_k)].
    const VectorXd& p = power.p;
    MatrixXd coeff(k_count, k_count);
    for (int k = 0; k < k_count; ++k) {
        double total = noise_power;
        for (int j = 0; j < k_count; ++j) total += std::norm(z(k, j)) * p(j);
        const double interference_plus_noise = total - std::norm(z(k, k)) * p(k);
        for (int j = 0; j < k_count; ++j) {
            double c = p(j) / total;
            if (j != k) c -= p(j) / interference_plus_noise;
            coeff(k, j) = c / std::numbers::ln2;
        }
    }

    // Backward: back[k] = B_l^H h_k where B_l is the product after layer l's
    // phase shift, so h_k^H B_l = back[k]^H.
    MatrixXcd back(prop.atoms(), k_count);
    for (int k = 0; k < k_count; ++k) back.col(k) = channel.h[k];

    MatrixXd grad(layers, prop.atoms());
    for (int l = layers - 1; l >= 0; --l) {
        const VectorXcd phi = phases.unit_response(l);
        for (int m = 0; m < prop.atoms(); ++m) {
            double g = 0.0;
            for (int k = 0; k < k_count; ++k) {
                const cd left = std::conj(back(m, k)) * cd(0.0, 1.0) * phi(m);
                for (int j = 0; j < k_count; ++j) {
                    const cd dz = left * pre_phase[l](m, j);
                    g += coeff(k, j) * 2.0 * (std::conj(z(k, j)) * dz).real();
                }
            }
            grad(l, m) = g;
        }
        if (l > 0) {
            MatrixXcd tmp = phi.conjugate().asDiagonal() * back;
            back = prop.interlayer[l - 1].adjoint() * tmp;
        }
    }
    return grad;
}

}  // namespace simopt
