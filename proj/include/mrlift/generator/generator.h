// Copyright 2026 The mrlift Authors
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

#ifndef MRLIFT_GENERATOR_GENERATOR_H_
#define MRLIFT_GENERATOR_GENERATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mrlift/mtc/mtc.h"
#include "mrlift/runtime/registry.h"
#include "mrlift/runtime/value.h"

namespace mrlift::generator {

enum class Task { kSourceInputs, kInputPairs, kTransformation };

// Directory name of a task inside a fixture root.
const char* TaskName(Task task);

enum class BackendKind { kReplay, kSynth, kHttp };

const char* BackendKindName(BackendKind kind);
absl::StatusOr<BackendKind> ParseBackendKind(std::string_view text);

// Share of responses per category. Counts per request are exact: they are
// derived from these weights by largest remainder, then shuffled with the
// request seed.
struct SynthProfile {
  double correct = 0.6;
  // Memorizes the example pairs and nothing else.
  double overfit = 0.2;
  // Correct, plus a dead statement calling a name that does not exist.
  double dead_erroneous = 0.1;
  // Calls a name that does not exist on the returned value's path.
  double uncompilable = 0.1;
  // Input pairs whose follow-up breaks the relation.
  double invalid_pair = 0.2;
  // Input pair snippets carrying a stray, failing assert.
  double stray_assert = 0.1;
};

absl::StatusOr<SynthProfile> ParseSynthProfile(std::string_view text);

struct HttpConfig {
  std::string endpoint_url;
  std::string model;
  std::string auth_token_env = "MRLIFT_API_TOKEN";
  int timeout_seconds = 60;
  int max_retries = 3;
};

struct GenConfig {
  // Examples requested per response.
  int k = 5;
  int repetitions = 5;
  double temperature = 0.2;
  uint64_t seed = 0;
  BackendKind backend = BackendKind::kReplay;
  std::string fixture_root;
  SynthProfile profile;
  HttpConfig http;
  int parallelism = 1;
};

absl::Status ValidateGenConfig(const GenConfig& cfg);

struct GenContext {
  Task task = Task::kSourceInputs;
  std::string mut_code;
  std::string mtc_code;
  // Printed pair snippets shown as examples (INPUT_PAIRS, TRANSFORMATION).
  std::vector<std::string> example_pairs;
  // Printed source snippets to complete with follow-ups (INPUT_PAIRS).
  std::vector<std::string> source_inputs;
  std::optional<mtc::TransformationSkeleton> skeleton;
  // Fixture sub-directory; ablated runs use their own when it exists.
  std::string label = "default";

  // Structured view of the same material. Only SYNTH reads it; it never
  // reaches the prompt.
  const mtc::MtcModel* model = nullptr;
  const runtime::SutRegistry* registry = nullptr;
  std::vector<mtc::InputPair> pairs;
  std::vector<runtime::Bindings> sources;
};

struct RawCandidate {
  std::string text;
  std::string backend_id;
  int repetition = 0;
  std::string request_digest;
};

// Deterministic prompt: system message, methods under test, the test case,
// examples when present, and the output format (embedding the skeleton for
// transformation tasks).
std::string AssemblePrompt(const GenContext& ctx, const GenConfig& cfg);

// Hex SHA-256 over the sampling settings and the prompt.
std::string RequestDigest(const std::string& prompt, const GenConfig& cfg);

struct Request {
  Task task = Task::kSourceInputs;
  std::string label;
  std::string prompt;
  std::string digest;
  const GenContext* ctx = nullptr;
  const GenConfig* cfg = nullptr;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  // Number of responses available for the request, at most
  // cfg.repetitions. Errors are transport or fixture failures.
  virtual absl::StatusOr<int> Available(const Request& request) const;
  // Response text of one repetition.
  virtual absl::StatusOr<std::string> Respond(const Request& request,
                                              int repetition) const = 0;
};

// REPLAY reads `<root>/<task>/<label>/response_<i>.txt`, falling back to the
// "default" label. With `verify_digest` a prompt that no longer matches the
// recorded digest is an error.
std::unique_ptr<Backend> MakeReplayBackend(std::string root,
                                           bool verify_digest = true);
std::unique_ptr<Backend> MakeSynthBackend();
std::unique_ptr<Backend> MakeHttpBackend(HttpConfig http);
absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(const GenConfig& cfg);

// Runs up to cfg.repetitions requests (at most cfg.parallelism at a time)
// and returns the responses ordered by repetition index.
absl::StatusOr<std::vector<RawCandidate>> Generate(const GenContext& ctx,
                                                   const GenConfig& cfg,
                                                   const Backend& backend);

// Fenced ``` blocks in order. With `expect`, only blocks defining a
// function that matches the skeleton survive.
std::vector<std::string> ExtractCodeBlocks(
    const std::string& raw,
    const std::optional<mtc::TransformationSkeleton>& expect = std::nullopt);

// Fixture files of one request.
struct Fixture {
  std::string prompt;
  std::string digest;
  std::vector<std::string> responses;
};

std::string FixtureDir(const std::string& root, Task task,
                       const std::string& label);
absl::StatusOr<Fixture> ReadFixture(const std::string& dir);
// Replaces the directory's contents. Refuses to touch an existing
// directory unless `overwrite`.
absl::Status WriteFixture(const std::string& dir, const Fixture& fixture,
                          bool overwrite);

// Passes requests through to another backend and keeps every prompt and
// response so they can be written out as REPLAY fixtures.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(const Backend& inner) : inner_(inner) {}

  std::string id() const override { return inner_.id(); }
  absl::StatusOr<int> Available(const Request& request) const override;
  absl::StatusOr<std::string> Respond(const Request& request,
                                      int repetition) const override;

  // One fixture directory per (task, label). A non-default label is written
  // only when its prompt differs from the default label's prompt for the
  // same task; otherwise replay falls back to the default directory.
  absl::Status Write(const std::string& root, bool overwrite) const;

 private:
  const Backend& inner_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Task, std::string>, Fixture> captured_;
  mutable std::vector<std::string> conflicts_;
};

// A syntactically varied, checker-agnostic program for round-trip testing.
testlang::Program RandomProgram(uint64_t seed);

}  // namespace mrlift::generator

#endif  // MRLIFT_GENERATOR_GENERATOR_H_
