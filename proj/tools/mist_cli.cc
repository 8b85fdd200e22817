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

// Command-line front end. Every subcommand reads files and writes its
// report to stdout; diagnostics go to stderr.
//
// Exit codes: 0 success, 1 domain error, 2 usage error, 3 infrastructure
// error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mist/advantage.h"
#include "mist/config.h"
#include "mist/errors.h"
#include "mist/executor.h"
#include "mist/kill_matrix.h"
#include "mist/mutation.h"
#include "mist/reranker.h"
#include "mist/repair.h"
#include "mist/reward.h"
#include "mist/suite_tools.h"

namespace fs = std::filesystem;

namespace mist {
namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfrastructure = 3;

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError(fmt::format("cannot read '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string ReadStdin() {
  return {std::istreambuf_iterator<char>(std::cin),
          std::istreambuf_iterator<char>()};
}

// Options shared by the subcommands that execute tests.
struct RunOptions {
  std::string runner;
  std::string config;
  std::optional<std::size_t> memory_mb;

  void Add(CLI::App* cmd) {
    cmd->add_option("--runner", runner,
                    "Runner command line (default: $MIST_RUNNER)");
    cmd->add_option("--config", config, "Reward/execution config (JSON)");
    cmd->add_option("--memory-mb", memory_mb, "Address-space cap per runner");
  }

  RewardConfig Config() const {
    RewardConfig cfg;
    if (!config.empty()) cfg = ParseConfig(ReadText(config));
    ApplyEnvironment(cfg);
    return cfg;
  }

  std::unique_ptr<ProcessExecutor> Executor(const RewardConfig& cfg) const {
    std::string command = runner;
    if (command.empty()) {
      if (const char* env = std::getenv("MIST_RUNNER")) command = env;
    }
    std::istringstream words(command);
    std::vector<std::string> argv{std::istream_iterator<std::string>(words),
                                  std::istream_iterator<std::string>()};
    if (argv.empty()) {
      throw InfrastructureError(
          "no test runner configured; pass --runner or set MIST_RUNNER");
    }
    return std::make_unique<ProcessExecutor>(
        std::move(argv), Limits{cfg.timeout_s, memory_mb, cfg.workers});
  }
};

KillMatrix LoadMatrix(const std::string& path, const std::string& manifest) {
  KillMatrix matrix = KillMatrixFromCsv(ReadText(path));
  if (!manifest.empty()) {
    ApplyWeights(matrix, MutantsFromJson(ReadText(manifest)));
  }
  return matrix;
}

// Verdicts from a kill-matrix CSV, keyed by the code variant they ran on.
void RecordVerdicts(const std::string& csv_path, const std::string& source,
                    const std::vector<Mutant>& mutants,
                    ReplayExecutor& replay) {
  KillMatrix recorded = KillMatrixFromCsv(ReadText(csv_path));
  std::map<std::string, const Mutant*> by_id;
  for (const Mutant& m : mutants) by_id[m.id] = &m;
  for (std::size_t t = 0; t < recorded.tests.size(); ++t) {
    replay.Record(source, recorded.tests[t], recorded.source_verdicts[t]);
    for (std::size_t m = 0; m < recorded.mutants.size(); ++m) {
      const auto& cell = recorded.grid[t][m];
      auto it = by_id.find(recorded.mutants[m]);
      if (!cell || it == by_id.end()) continue;
      replay.Record(it->second->mutated_source, recorded.tests[t], *cell);
    }
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"Mutation-guided test suite scoring toolkit", "mist"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // mutate
  std::string mutate_src, categories;
  std::optional<std::size_t> limit;
  bool weighted = false;
  double lambda = 0.25;
  auto* mutate = app.add_subcommand("mutate", "Emit a mutant manifest");
  mutate->add_option("source", mutate_src)->required();
  mutate->add_option("--categories", categories,
                     "Comma-separated operator categories (default: all)");
  mutate->add_option("--limit", limit, "Keep the first N mutants");
  mutate->add_flag("--weights", weighted, "Weight mutants by nesting depth");
  mutate->add_option("--lambda", lambda, "Depth weight coefficient");

  // matrix
  std::string matrix_src, matrix_tests, matrix_mutants;
  RunOptions matrix_run;
  auto* matrix = app.add_subcommand("matrix", "Emit a kill-matrix CSV");
  matrix->add_option("source", matrix_src)->required();
  matrix->add_option("tests", matrix_tests)->required();
  matrix->add_option("--mutants", matrix_mutants)->required();
  matrix_run.Add(matrix);

  // score
  std::string score_matrix;
  std::vector<std::string> score_suite;
  auto* score = app.add_subcommand("score", "Print the mutation score");
  score->add_option("matrix", score_matrix)->required();
  score->add_option("--suite", score_suite, "Test ids (default: all)")
      ->delimiter(',');

  // reward
  std::string reward_src, reward_suite, reward_mutants, reward_verdicts,
      reward_smoke;
  bool show_config = false;
  RunOptions reward_run;
  auto* reward = app.add_subcommand("reward", "Emit a reward trace");
  reward->add_option("source", reward_src);
  reward->add_option("suite", reward_suite);
  reward->add_option("--mutants", reward_mutants);
  reward->add_option("--verdicts", reward_verdicts,
                     "Replay verdicts from a kill-matrix CSV");
  reward->add_option("--smoke", reward_smoke,
                     "Test module that selects vulnerable mutants");
  reward->add_flag("--show-config", show_config,
                   "Print the effective config and exit");
  reward_run.Add(reward);

  // advantages
  std::vector<double> rewards;
  double sigma_eps = RewardConfig{}.sigma_eps;
  auto* advantages =
      app.add_subcommand("advantages", "Group-normalized advantages");
  advantages->add_option("rewards", rewards)->required();
  advantages->add_option("--sigma-eps", sigma_eps);

  // select
  std::string select_matrix, select_mutants;
  std::size_t budget = 0;
  auto* select = app.add_subcommand("select", "Greedy suite selection");
  select->add_option("matrix", select_matrix)->required();
  select->add_option("-k", budget, "Maximum number of tests")->required();
  select->add_option("--mutants", select_mutants, "Manifest with weights");

  // minimize
  std::string minimize_matrix, minimize_mutants;
  std::vector<std::string> minimize_suite;
  auto* minimize = app.add_subcommand("minimize", "Drop redundant tests");
  minimize->add_option("matrix", minimize_matrix)->required();
  minimize->add_option("--suite", minimize_suite)->required()->delimiter(',');
  minimize->add_option("--mutants", minimize_mutants, "Manifest with weights");

  // curve
  std::string curve_matrix, curve_mutants;
  std::vector<std::string> curve_order;
  auto* curve = app.add_subcommand("curve", "Emit a utility curve CSV");
  curve->add_option("matrix", curve_matrix)->required();
  curve->add_option("--order", curve_order)->required()->delimiter(',');
  curve->add_option("--mutants", curve_mutants, "Manifest with weights");

  // rerank
  std::string rerank_manifest;
  RunOptions rerank_run;
  auto* rerank = app.add_subcommand("rerank", "Consensus reranking report");
  rerank->add_option("manifest", rerank_manifest)->required();
  rerank_run.Add(rerank);

  // repair
  std::string repair_file;
  int max_backtrack = kDefaultMaxBacktrack;
  bool no_extract = false;
  auto* repair = app.add_subcommand("repair", "Extract and repair model output");
  repair->add_option("file", repair_file, "Input (default: stdin)");
  repair->add_option("--max-backtrack", max_backtrack)
      ->check(CLI::PositiveNumber);
  repair->add_flag("--no-extract", no_extract, "Skip code-block extraction");

  // prompt
  std::string question, solution, question_file, solution_file;
  auto* prompt = app.add_subcommand("prompt", "Render the generation prompt");
  auto* q = prompt->add_option("--question", question);
  auto* qf = prompt->add_option("--question-file", question_file);
  auto* s = prompt->add_option("--solution", solution);
  auto* sf = prompt->add_option("--solution-file", solution_file);
  q->excludes(qf);
  s->excludes(sf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*mutate) {
    MutationOptions options;
    if (!categories.empty()) {
      options.categories.clear();
      std::stringstream list(categories);
      for (std::string name; std::getline(list, name, ',');) {
        options.categories.insert(ParseCategory(name));
      }
    }
    options.limit = limit;
    options.weighted = weighted;
    options.lambda = lambda;
    std::cout << MutantsToJson(
        GenerateMutants(ParseSource(ReadText(mutate_src)), options));
  } else if (*matrix) {
    RewardConfig cfg = matrix_run.Config();
    auto executor = matrix_run.Executor(cfg);
    KillMatrix km = BuildKillMatrix(
        ReadText(matrix_src), MutantsFromJson(ReadText(matrix_mutants)),
        ReadText(matrix_tests), *executor, executor->limits().EffectiveWorkers());
    std::cout << KillMatrixToCsv(km);
  } else if (*score) {
    KillMatrix km = LoadMatrix(score_matrix, "");
    if (score_suite.empty()) score_suite = km.tests;
    std::cout << fmt::format("{}\n", MutationScore(km, score_suite));
  } else if (*reward) {
    RewardConfig cfg = reward_run.Config();
    if (show_config) {
      std::cout << ConfigToJson(cfg);
      return 0;
    }
    if (reward_src.empty() || reward_suite.empty() || reward_mutants.empty()) {
      std::cerr << "reward: source, suite and --mutants are required\n";
      return kExitUsage;
    }
    const std::string source = ParseSource(ReadText(reward_src)).text;
    const std::vector<Mutant> mutants =
        MutantsFromJson(ReadText(reward_mutants));
    std::optional<std::string> smoke;
    if (!reward_smoke.empty()) smoke = ReadText(reward_smoke);
    std::unique_ptr<TestExecutor> executor;
    if (!reward_verdicts.empty()) {
      auto replay = std::make_unique<ReplayExecutor>();
      RecordVerdicts(reward_verdicts, source, mutants, *replay);
      executor = std::move(replay);
    } else {
      executor = reward_run.Executor(cfg);
    }
    std::cout << RewardTraceToJson(ScoreTrajectory(
        source, mutants, ReadText(reward_suite), cfg, *executor, smoke));
  } else if (*advantages) {
    AdvantageGroup g = ComputeAdvantageGroup(rewards, sigma_eps);
    nlohmann::ordered_json out = {{"mean", g.mean},
                                  {"std", g.std},
                                  {"advantages", g.advantages}};
    std::cout << out.dump(2) << "\n";
  } else if (*select) {
    KillMatrix km = LoadMatrix(select_matrix, select_mutants);
    std::cout << SelectionToJson(km, GreedySelect(km, budget));
  } else if (*minimize) {
    KillMatrix km = LoadMatrix(minimize_matrix, minimize_mutants);
    SelectionResult result;
    result.order = MinimizeSuite(km, minimize_suite);
    if (!km.mutants.empty()) {
      for (const CurvePoint& p : UtilityCurve(km, result.order)) {
        result.gains.push_back(p.marginal_gain);
      }
    }
    std::cout << SelectionToJson(km, result);
  } else if (*curve) {
    KillMatrix km = LoadMatrix(curve_matrix, curve_mutants);
    std::cout << CurveToCsv(UtilityCurve(km, curve_order));
  } else if (*rerank) {
    RewardConfig cfg = rerank_run.Config();
    const fs::path base = fs::path(rerank_manifest).parent_path();
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(ReadText(rerank_manifest));
      auto load = [&base](const nlohmann::json& list) {
        std::vector<Named> out;
        for (const auto& entry : list) {
          out.push_back({entry.at("id").get<std::string>(),
                         ReadText(base / entry.at("path").get<std::string>())});
        }
        return out;
      };
      auto candidates = load(manifest.at("candidates"));
      auto suites = load(manifest.at("suites"));
      auto executor = rerank_run.Executor(cfg);
      std::cout << ConsensusToJson(
          BuildConsensus(candidates, suites, *executor,
                         executor->limits().EffectiveWorkers()));
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(fmt::format("malformed rerank manifest: {}", e.what()));
    }
  } else if (*repair) {
    std::string raw = repair_file.empty() ? ReadStdin() : ReadText(repair_file);
    std::string code = no_extract ? raw : ExtractCodeBlock(raw);
    std::string fixed = BacktrackRepair(code, max_backtrack);
    std::cout << fixed;
    if (fixed.empty() || fixed.back() != '\n') std::cout << '\n';
  } else if (*prompt) {
    if (!question_file.empty()) question = ReadText(question_file);
    if (!solution_file.empty()) solution = ReadText(solution_file);
    std::cout << RenderPrompt(question, solution);
  }
  return 0;
}

}  // namespace
}  // namespace mist

int main(int argc, char** argv) {
  try {
    return mist::Run(argc, argv);
  } catch (const mist::InfrastructureError& e) {
    std::cerr << "mist: " << e.what() << "\n";
    return mist::kExitInfrastructure;
  } catch (const mist::DomainError& e) {
    std::cerr << "mist: " << e.what() << "\n";
    return mist::kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "mist: " << e.what() << "\n";
    return mist::kExitInfrastructure;
  }
}
