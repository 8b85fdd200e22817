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

#include "mist/config.h"

#include <cstdlib>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mist/errors.h"

namespace mist {
namespace {

using Json = nlohmann::json;

double Number(const Json& v, std::string_view key) {
  if (!v.is_number()) throw DomainError(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

int Integer(const Json& v, std::string_view key) {
  if (!v.is_number_integer()) {
    throw DomainError(fmt::format("'{}' must be an integer", key));
  }
  return v.get<int>();
}

bool Boolean(const Json& v, std::string_view key) {
  if (!v.is_boolean()) throw DomainError(fmt::format("'{}' must be a boolean", key));
  return v.get<bool>();
}

double EnvNumber(const char* name, const char* text) {
  char* end = nullptr;
  double value = std::strtod(text, &end);
  if (end == text || *end != '\0') {
    throw DomainError(fmt::format("{}='{}' is not a number", name, text));
  }
  return value;
}

}  // namespace

RewardConfig ParseConfig(std::string_view json, RewardConfig cfg) {
  Json doc;
  try {
    doc = Json::parse(json);
  } catch (const Json::exception& e) {
    throw DomainError(fmt::format("malformed config: {}", e.what()));
  }
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "alpha") cfg.alpha = Number(v, key);
    else if (key == "beta") cfg.beta = Number(v, key);
    else if (key == "rho_base") cfg.rho_base = Number(v, key);
    else if (key == "gamma") cfg.gamma = Number(v, key);
    else if (key == "k_max") cfg.k_max = Integer(v, key);
    else if (key == "r_fail_suite") cfg.r_fail_suite = Number(v, key);
    else if (key == "r_fail_method") cfg.r_fail_method = Number(v, key);
    else if (key == "pool_scaling") cfg.pool_scaling = Boolean(v, key);
    else if (key == "truncate_on_failure") cfg.truncate_on_failure = Boolean(v, key);
    else if (key == "quality_cap") cfg.quality_cap = Number(v, key);
    else if (key == "sigma_eps") cfg.sigma_eps = Number(v, key);
    else if (key == "timeout_s") cfg.timeout_s = Number(v, key);
    else if (key == "workers") cfg.workers = Integer(v, key);
    else throw DomainError(fmt::format("unknown config key '{}'", key));
  }
  cfg.Validate();
  return cfg;
}

void ApplyEnvironment(RewardConfig& cfg) {
  if (const char* w = std::getenv("MIST_WORKERS"); w && *w) {
    double value = EnvNumber("MIST_WORKERS", w);
    if (value < 0 || value != static_cast<int>(value)) {
      throw DomainError(fmt::format("MIST_WORKERS='{}' is not a count", w));
    }
    cfg.workers = static_cast<int>(value);
  }
  if (const char* t = std::getenv("MIST_TIMEOUT_S"); t && *t) {
    cfg.timeout_s = EnvNumber("MIST_TIMEOUT_S", t);
  }
  cfg.Validate();
}

std::string ConfigToJson(const RewardConfig& cfg) {
  nlohmann::ordered_json out = {
      {"alpha", cfg.alpha},
      {"beta", cfg.beta},
      {"rho_base", cfg.rho_base},
      {"gamma", cfg.gamma},
      {"k_max", cfg.k_max},
      {"r_fail_suite", cfg.r_fail_suite},
      {"r_fail_method", cfg.r_fail_method},
      {"pool_scaling", cfg.pool_scaling},
      {"truncate_on_failure", cfg.truncate_on_failure},
      {"quality_cap", cfg.quality_cap},
      {"sigma_eps", cfg.sigma_eps},
      {"timeout_s", cfg.timeout_s},
      {"workers", cfg.workers},
  };
  return out.dump(2) + "\n";
}

}  // namespace mist
