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

#include "simopt/baselines.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace simopt {

IwfResult water_fill(const VectorXd& gains, double budget)
{
    const int k_count = static_cast<int>(gains.size());
    if (k_count == 0) throw std::invalid_argument("water_fill: no users");
    if (!(budget > 0.0)) throw std::invalid_argument("water_fill: power budget must be positive");

    IwfResult res;
    VectorXd inv(k_count);
    double floor_level = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_count; ++k) {
        if (!(gains(k) >= 0.0)) throw std::invalid_argument("water_fill: gains must be nonnegative");
        inv(k) = gains(k) > 0.0 ? 1.0 / gains(k) : std::numeric_limits<double>::infinity();
        floor_level = std::min(floor_level, inv(k));
    }
    if (!std::isfinite(floor_level)) {
        res.power = PowerAllocation::uniform(k_count, budget);
        res.degenerate = true;
        return res;
    }

    auto allocated = [&](double mu) {
        double s = 0.0;
        for (int k = 0; k < k_count; ++k) s += std::max(0.0, mu - inv(k));
        return s;
    };
    double lo = floor_level;
    double hi = floor_level + budget;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (allocated(mid) < budget ? lo : hi) = mid;
    }

    // The bracket pins down the active set; solve the level exactly on it.
    double mu = hi;
    for (int pass = 0; pass < k_count; ++pass) {
        double inv_sum = 0.0;
        int active = 0;
        for (int k = 0; k < k_count; ++k)
            if (inv(k) < mu) {
                inv_sum += inv(k);
                ++active;
            }
        const double exact = (budget + inv_sum) / active;
        if (exact == mu) break;
        mu = exact;
    }

    res.water_level = mu;
    res.power.total_budget = budget;
    res.power.p.resize(k_count);
    for (int k = 0; k < k_count; ++k) res.power.p(k) = std::max(0.0, mu - inv(k));
    const double total = res.power.p.sum();
    if (total > budget) res.power.p *= budget / total;
    res.converged = true;
    res.iterations = 1;
    return res;
}

namespace {

VectorXd interference_gains(const MatrixXd& a, const VectorXd& p, double noise)
{
    const int k_count = static_cast<int>(a.rows());
    VectorXd g(k_count);
    for (int k = 0; k < k_count; ++k) {
        double denom = noise;
        for (int j = 0; j < k_count; ++j)
            if (j != k) denom += a(k, j) * p(j);
        g(k) = a(k, k) / denom;
    }
    return g;
}

}  // namespace

IwfResult iterative_water_filling(const MatrixXd& gains, double noise_power, double budget, double tol,
                                  int max_iter)
{
    const int k_count = static_cast<int>(gains.rows());
    if (gains.cols() != k_count || k_count == 0) throw std::invalid_argument("iterative_water_filling: A must be K x K");
    if (!(noise_power > 0.0)) throw std::invalid_argument("iterative_water_filling: noise power must be positive");
    if ((gains.array() < 0.0).any() || !gains.allFinite())
        throw std::invalid_argument("iterative_water_filling: gains must be finite and nonnegative");
    if (max_iter < 1) throw std::invalid_argument("iterative_water_filling: max_iter must be >= 1");

    PowerAllocation current = PowerAllocation::uniform(k_count, budget);
    IwfResult best;
    double best_rate = -1.0;
    for (int it = 1; it <= max_iter; ++it) {
        IwfResult step = water_fill(interference_gains(gains, current.p, noise_power), budget);
        if (step.degenerate) {
            step.iterations = it;
            return step;
        }
        const double change = (step.power.p - current.p).cwiseAbs().maxCoeff();
        const double rate = sum_rate(sinr(gains, step.power, noise_power));
        current = step.power;
        if (rate > best_rate) {
            best_rate = rate;
            best = step;
        }
        if (change < tol) {
            step.iterations = it;
            step.converged = true;
            return step;
        }
        best.iterations = it;
    }
    best.converged = false;
    return best;
}

void AoConfig::validate() const
{
    if (!(step_size > 0.0) || max_outer < 1 || max_inner < 1 || !(tolerance > 0.0) || !(min_step > 0.0))
        throw std::invalid_argument("AoConfig: all settings must be positive");
}

namespace {

void check_problem(const ProblemInstance& pb)
{
    if (pb.prop == nullptr || pb.channel == nullptr) throw std::invalid_argument("ProblemInstance: missing inputs");
    if (!(pb.noise_power > 0.0) || !(pb.power_budget > 0.0))
        throw std::invalid_argument("ProblemInstance: noise power and budget must be positive");
}

MatrixXd gains_for(const ProblemInstance& pb, const PhaseConfig& phases)
{
    return effective_gains(*pb.channel, propagate_feed(phases, *pb.prop));
}

double rate_for(const ProblemInstance& pb, const PhaseConfig& phases, const PowerAllocation& power)
{
    return sum_rate(sinr(gains_for(pb, phases), power, pb.noise_power));
}

}  // namespace

BaselineResult ao_optimize_from(const ProblemInstance& pb, const AoConfig& cfg, PhaseConfig start)
{
    check_problem(pb);
    cfg.validate();
    BaselineResult res;
    res.phases = std::move(start);
    res.converged = false;

    // Uniform powers are replaced by the first water-filling pass outright.
    IwfResult first = iterative_water_filling(gains_for(pb, res.phases), pb.noise_power, pb.power_budget,
                                              cfg.iwf_tolerance, cfg.iwf_max_iter);
    res.power = first.power;
    res.sum_rate = rate_for(pb, res.phases, res.power);
    res.trace.push_back(res.sum_rate);

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        const double previous = res.sum_rate;

        // Phases with powers fixed: max-normalised gradient ascent with
        // backtracking.
        double step = cfg.step_size;
        for (int inner = 0; inner < cfg.max_inner; ++inner) {
            const MatrixXd grad = sum_rate_phase_gradient(res.phases, *pb.prop, *pb.channel, res.power, pb.noise_power);
            const double scale = grad.cwiseAbs().maxCoeff();
            if (!(scale > 0.0)) break;
            bool accepted = false;
            while (step >= cfg.min_step) {
                PhaseConfig candidate(MatrixXd(res.phases.theta() + (step / scale) * grad));
                const double r = rate_for(pb, candidate, res.power);
                if (r > res.sum_rate) {
                    res.phases = std::move(candidate);
                    res.sum_rate = r;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            step = std::min(2.0 * step, cfg.step_size);
        }

        // Powers with phases fixed; IWF is not monotone under interference,
        // so a pass that loses rate is discarded.
        IwfResult iwf = iterative_water_filling(gains_for(pb, res.phases), pb.noise_power, pb.power_budget,
                                                cfg.iwf_tolerance, cfg.iwf_max_iter);
        const double iwf_rate = rate_for(pb, res.phases, iwf.power);
        if (iwf_rate >= res.sum_rate) {
            res.power = iwf.power;
            res.sum_rate = iwf_rate;
        }

        res.trace.push_back(res.sum_rate);
        const double gain = res.sum_rate - previous;
        if (gain <= cfg.tolerance * std::max(std::abs(previous), std::numeric_limits<double>::min())) {
            res.converged = true;
            break;
        }
    }
    return res;
}

BaselineResult ao_optimize(const ProblemInstance& pb, const AoConfig& cfg, Rng& rng)
{
    check_problem(pb);
    return ao_optimize_from(pb, cfg, PhaseConfig::random(pb.prop->layers(), pb.prop->atoms(), rng));
}

BaselineResult random_phase_iwf(const ProblemInstance& pb, Rng& rng, double iwf_tol, int iwf_max_iter)
{
    check_problem(pb);
    BaselineResult res;
    res.phases = PhaseConfig::random(pb.prop->layers(), pb.prop->atoms(), rng);
    IwfResult iwf = iterative_water_filling(gains_for(pb, res.phases), pb.noise_power, pb.power_budget, iwf_tol,
                                            iwf_max_iter);
    res.power = iwf.power;
    res.converged = iwf.converged;
    res.sum_rate = rate_for(pb, res.phases, res.power);
    res.trace.push_back(res.sum_rate);
    return res;
}

}  // namespace simopt
