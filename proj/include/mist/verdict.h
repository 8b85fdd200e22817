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

#ifndef MIST_VERDICT_H_
#define MIST_VERDICT_H_

#include <string>
#include <string_view>

namespace mist {

enum class Status { kPass, kFail, kError, kTimeout };

std::string_view StatusName(Status status);
// Throws DomainError for unknown names.
Status ParseStatus(std::string_view name);

// Any non-PASS outcome against a mutant is a kill.
inline bool IsKill(Status status) { return status != Status::kPass; }

struct Verdict {
  Status status = Status::kPass;
  double duration = 0.0;
  std::string detail;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Wall-clock slack granted to a runner beyond the job's own limit before the
// orchestrator kills it.
inline constexpr double kTimeoutGraceSeconds = 1.0;

// One unit of work on the runner wire protocol.
struct JobRequest {
  std::string job_id;
  std::string code;
  std::string tests;
  std::string method;
  double timeout_s = 5.0;

  friend bool operator==(const JobRequest&, const JobRequest&) = default;
};

struct JobResponse {
  std::string job_id;
  Verdict verdict;

  friend bool operator==(const JobResponse&, const JobResponse&) = default;
};

// Newline-delimited JSON codec. Encoders return one line without the
// trailing newline. Decoders throw InfrastructureError on malformed input.
std::string EncodeRequest(const JobRequest& request);
JobRequest DecodeRequest(std::string_view line);
std::string EncodeResponse(const JobResponse& response);
JobResponse DecodeResponse(std::string_view line);

// Enforces the verdict invariants: PASS carries no detail and TIMEOUT lasts
// at least `limit` seconds.
Verdict Normalize(Verdict verdict, double limit);

}  // namespace mist

#endif  // MIST_VERDICT_H_
