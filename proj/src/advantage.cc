// Copyright 2026 The Mist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mist/advantage.h"

#include <cmath>

#include "mist/errors.h"

namespace mist {

AdvantageGroup ComputeAdvantageGroup(const std::vector<double>& rewards,
                                     double sigma_eps) {
  if (rewards.empty()) throw EmptyGroup();
  AdvantageGroup g;
  g.rewards = rewards;
  const double n = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  g.mean = sum / n;
  double squares = 0.0;
  for (double r : rewards) squares += (r - g.mean) * (r - g.mean);
  g.std = std::sqrt(squares / n);
  g.advantages.assign(rewards.size(), 0.0);
  if (g.std > sigma_eps) {
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      g.advantages[i] = (rewards[i] - g.mean) / g.std;
    }
  }
  return g;
}

std::vector<double> GroupAdvantages(const std::vector<double>& rewards,
                                    double sigma_eps) {
  return ComputeAdvantageGroup(rewards, sigma_eps).advantages;
}

}  // namespace mist
