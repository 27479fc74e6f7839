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

#include "simopt/environment.hpp"

#include <stdexcept>

namespace simopt {

DecodedAction decode_action(const VectorXd& raw, int layers, int atoms, int users, double power_budget)
{
    const int phase_len = 2 * layers * atoms;
    if (raw.size() != phase_len + users) throw std::invalid_argument("decode_action: action length mismatch");

    MatrixXd theta(layers, atoms);
    for (int l = 0; l < layers; ++l)
        for (int m = 0; m < atoms; ++m) {
            const double u = raw(2 * (l * atoms + m));
            const double v = raw(2 * (l * atoms + m) + 1);
            theta(l, m) = std::hypot(u, v) < 1e-9 ? 0.0 : std::atan2(v, u);
        }

    const VectorXd logits = raw.tail(users);
    const double top = logits.maxCoeff();
    VectorXd share = (logits.array() - top).exp().matrix();
    share /= share.sum();
    return {PhaseConfig(std::move(theta)), PowerAllocation{power_budget * share, power_budget}};
}

SimEnvironment::SimEnvironment(const SimGeometry& geom, const EnvironmentParams& params)
    : geom_(geom),
      params_(params),
      prop_(build_propagation(geom)),
      corr_(spatial_correlation(geom, params.correlation_floor)),
      betas_(path_losses(geom, params.path_loss)),
      phases_(geom.num_layers(), geom.atoms_per_layer()),
      power_(PowerAllocation::uniform(geom.num_users(), params.power_budget))
{
    if (!(params.power_budget > 0.0)) throw std::invalid_argument("SimEnvironment: power budget must be positive");
    if (!(params.noise_power > 0.0)) throw std::invalid_argument("SimEnvironment: noise power must be positive");
    channel_.beta = betas_;
    channel_.h.assign(users(), VectorXcd::Zero(atoms()));
}

int SimEnvironment::state_dim() const
{
    return 2 * atoms() * layers() + users() + 2 * atoms() * users();
}

int SimEnvironment::action_dim() const
{
    return 2 * atoms() * layers() + users();
}

ChannelRealization SimEnvironment::draw_channel(Rng& rng) const
{
    return sample_channel(corr_, betas_, rng);
}

void SimEnvironment::set_channel(ChannelRealization channel)
{
    if (channel.users() != users() || channel.atoms() != atoms())
        throw std::invalid_argument("SimEnvironment: channel dimension mismatch");
    channel_ = std::move(channel);
}

void SimEnvironment::reset_configuration(Rng& rng)
{
    phases_ = PhaseConfig::random(layers(), atoms(), rng);
    power_ = PowerAllocation::uniform(users(), params_.power_budget);
}

void SimEnvironment::set_configuration(PhaseConfig phases, PowerAllocation power)
{
    if (phases.layers() != layers() || phases.atoms() != atoms() || power.users() != users())
        throw std::invalid_argument("SimEnvironment: configuration dimension mismatch");
    power.validate();
    phases_ = std::move(phases);
    power_ = std::move(power);
}

VectorXd SimEnvironment::encode_state() const
{
    VectorXd s(state_dim());
    int pos = 0;
    for (int l = 0; l < layers(); ++l) {
        const VectorXcd phi = phases_.unit_response(l);
        for (int m = 0; m < atoms(); ++m) {
            s(pos++) = phi(m).real();
            s(pos++) = phi(m).imag();
        }
    }
    for (int k = 0; k < users(); ++k) s(pos++) = power_.p(k) / params_.power_budget;
    for (int k = 0; k < users(); ++k) {
        const double beta = k < static_cast<int>(channel_.beta.size()) ? channel_.beta[k] : 0.0;
        const double norm = beta > 0.0 ? 1.0 / std::sqrt(beta) : 0.0;
        for (int m = 0; m < atoms(); ++m) {
            s(pos++) = norm * channel_.h[k](m).real();
            s(pos++) = norm * channel_.h[k](m).imag();
        }
    }
    return s;
}

double SimEnvironment::current_sum_rate() const
{
    return evaluate_sum_rate(phases_, prop_, channel_, power_, params_.noise_power);
}

StepResult SimEnvironment::step(const VectorXd& raw_action)
{
    auto decoded = decode_action(raw_action, layers(), atoms(), users(), params_.power_budget);
    phases_ = std::move(decoded.phases);
    power_ = std::move(decoded.power);
    StepResult r;
    r.reward = current_sum_rate();
    r.next_state = encode_state();
    return r;
}

}  // namespace simopt
