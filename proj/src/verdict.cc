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

#include "mist/verdict.h"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mist/errors.h"

namespace mist {

std::string_view StatusName(Status status) {
  switch (status) {
    case Status::kPass: return "PASS";
    case Status::kFail: return "FAIL";
    case Status::kError: return "ERROR";
    case Status::kTimeout: return "TIMEOUT";
  }
  return "ERROR";
}

Status ParseStatus(std::string_view name) {
  for (Status s : {Status::kPass, Status::kFail, Status::kError,
                   Status::kTimeout}) {
    if (StatusName(s) == name) return s;
  }
  throw DomainError(fmt::format("unknown verdict status '{}'", name));
}

std::string EncodeRequest(const JobRequest& request) {
  nlohmann::ordered_json j = {{"job_id", request.job_id},
                              {"code", request.code},
                              {"tests", request.tests},
                              {"method", request.method},
                              {"timeout_s", request.timeout_s}};
  return j.dump();
}

JobRequest DecodeRequest(std::string_view line) {
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    return JobRequest{j.at("job_id").get<std::string>(),
                      j.at("code").get<std::string>(),
                      j.at("tests").get<std::string>(),
                      j.at("method").get<std::string>(),
                      j.at("timeout_s").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw InfrastructureError(fmt::format("malformed request: {}", e.what()));
  }
}

std::string EncodeResponse(const JobResponse& response) {
  nlohmann::ordered_json j = {
      {"job_id", response.job_id},
      {"status", StatusName(response.verdict.status)},
      {"duration_s", response.verdict.duration},
      {"detail", response.verdict.detail}};
  return j.dump();
}

JobResponse DecodeResponse(std::string_view line) {
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    JobResponse r;
    r.job_id = j.at("job_id").get<std::string>();
    r.verdict.status = ParseStatus(j.at("status").get<std::string>());
    r.verdict.duration = j.at("duration_s").get<double>();
    r.verdict.detail = j.value("detail", "");
    if (r.verdict.duration < 0) {
      throw InfrastructureError("negative duration in response");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InfrastructureError(fmt::format("malformed response: {}", e.what()));
  } catch (const DomainError& e) {
    throw InfrastructureError(fmt::format("malformed response: {}", e.what()));
  }
}

Verdict Normalize(Verdict verdict, double limit) {
  if (verdict.status == Status::kPass) verdict.detail.clear();
  if (verdict.status == Status::kTimeout) {
    verdict.duration = std::max(verdict.duration, limit);
  }
  return verdict;
}

}  // namespace mist
