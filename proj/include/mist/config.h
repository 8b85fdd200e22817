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

#ifndef MIST_CONFIG_H_
#define MIST_CONFIG_H_

#include <string>
#include <string_view>

#include "mist/reward.h"

namespace mist {

// Reads a flat JSON object whose keys are RewardConfig field names. Missing
// keys keep the values of `base`; unknown keys and ill-typed values raise
// DomainError. The result is validated.
RewardConfig ParseConfig(std::string_view json, RewardConfig base = {});

// Applies MIST_WORKERS and MIST_TIMEOUT_S when set.
void ApplyEnvironment(RewardConfig& cfg);

// Every field, in declaration order, as a flat JSON object.
std::string ConfigToJson(const RewardConfig& cfg);

}  // namespace mist

#endif  // MIST_CONFIG_H_
