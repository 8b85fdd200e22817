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

#ifndef MIST_TESTS_TEST_SUPPORT_H_
#define MIST_TESTS_TEST_SUPPORT_H_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace mist {

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string ReadFixture(std::string_view name) {
  return ReadFile(std::filesystem::path(MIST_FIXTURE_DIR) / name);
}

// 1-based line of `text`, without the terminator.
inline std::string LineOf(std::string_view text, int line) {
  std::istringstream in{std::string(text)};
  std::string current;
  for (int i = 0; i < line && std::getline(in, current); ++i) {
  }
  return current;
}

// A JSON string literal is also a valid Python string literal.
inline std::string PyRepr(std::string_view text) {
  return nlohmann::json(std::string(text)).dump();
}

inline bool PythonAvailable() {
  return std::system("python3 -c pass >/dev/null 2>&1") == 0;
}

// Runs `script` with python3; returns its exit status.
inline int RunPython(const std::string& script) {
  std::filesystem::path path =
      std::filesystem::temp_directory_path() /
      ("mist_test_" + std::to_string(std::hash<std::string>{}(script)) +
       ".py");
  std::ofstream(path) << script;
  int status = std::system(("python3 " + path.string() + " >/dev/null 2>&1").c_str());
  std::filesystem::remove(path);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace mist

#endif  // MIST_TESTS_TEST_SUPPORT_H_
