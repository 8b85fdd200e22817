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

#ifndef MIST_ADVANTAGE_H_
#define MIST_ADVANTAGE_H_

#include <vector>

namespace mist {

struct AdvantageGroup {
  std::vector<double> rewards;
  double mean = 0.0;
  // Population standard deviation.
  double std = 0.0;
  std::vector<double> advantages;
};

// (R_i - mean) / std over the group; all zeros when std <= sigma_eps.
// Throws EmptyGroup.
AdvantageGroup ComputeAdvantageGroup(const std::vector<double>& rewards,
                                     double sigma_eps = 1e-8);

std::vector<double> GroupAdvantages(const std::vector<double>& rewards,
                                    double sigma_eps = 1e-8);

}  // namespace mist

#endif  // MIST_ADVANTAGE_H_
