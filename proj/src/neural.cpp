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

#include "simopt/neural.hpp"

#include <fstream>
#include <sstream>

namespace simopt {

std::string to_string(Activation a)
{
    return a == Activation::Tanh ? "tanh" : "linear";
}

Activation activation_from_string(const std::string& name)
{
    if (name == "tanh") return Activation::Tanh;
    if (name == "linear") return Activation::Linear;
    throw std::invalid_argument("unknown activation '" + name + "'");
}

std::uint64_t complexity_estimate(const std::vector<std::uint64_t>& actor, const std::vector<std::uint64_t>& critic,
                                  std::uint64_t total_steps)
{
    if (actor.size() != 4 || critic.size() != 4)
        throw std::invalid_argument("complexity_estimate: expected [D, L1, L2, D_out] dims");
    const std::uint64_t actor_cost = actor[0] * actor[1] + actor[1] * actor[2] + actor[2] * actor[3];
    const std::uint64_t critic_cost = critic[0] * critic[1] + critic[1] * critic[2] + critic[2] * critic[3];
    return total_steps * (actor_cost + 2 * critic_cost);
}

void save_checkpoint(const std::filesystem::path& path, const MlpD& net)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
    out << "simopt-mlp 1\ndims";
    for (int d : net.dims()) out << ' ' << d;
    out << "\nactivations " << to_string(net.hidden_activation()) << ' ' << to_string(net.output_activation())
        << "\nparams " << net.parameter_count() << '\n';
    for (double v : net.flat_parameters()) out.write(reinterpret_cast<const char*>(&v), sizeof v);
    if (!out) throw std::runtime_error("checkpoint: write failed");
}

MlpD load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "simopt-mlp 1") throw std::runtime_error("checkpoint: bad magic in " + path.string());

    std::getline(in, line);
    std::istringstream dims_line(line);
    std::string tag;
    dims_line >> tag;
    if (tag != "dims") throw std::runtime_error("checkpoint: missing dims");
    std::vector<int> dims;
    for (int d; dims_line >> d;) dims.push_back(d);

    std::getline(in, line);
    std::istringstream act_line(line);
    std::string hidden, output;
    act_line >> tag >> hidden >> output;
    if (tag != "activations") throw std::runtime_error("checkpoint: missing activations");

    std::getline(in, line);
    std::istringstream count_line(line);
    std::size_t count = 0;
    count_line >> tag >> count;
    if (tag != "params") throw std::runtime_error("checkpoint: missing parameter count");

    MlpD net(dims, activation_from_string(hidden), activation_from_string(output));
    if (count != net.parameter_count()) throw std::runtime_error("checkpoint: parameter count does not match dims");
    std::vector<double> flat(count);
    in.read(reinterpret_cast<char*>(flat.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated parameters");
    net.set_flat_parameters(flat);
    return net;
}

}  // namespace simopt
