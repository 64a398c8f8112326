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

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "httplib.h"
#include "json.hpp"
#include "mrlift/generator/generator.h"

namespace mrlift::generator {

namespace fs = std::filesystem;

namespace {

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  out << content;
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("short write ", path.string()));
}

}  // namespace

std::string FixtureDir(const std::string& root, Task task,
                       const std::string& label) {
  return (fs::path(root) / TaskName(task) / label).string();
}

absl::StatusOr<Fixture> ReadFixture(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    return absl::NotFoundError(absl::StrCat("no fixture directory ", dir));
  }
  Fixture f;
  absl::StatusOr<std::string> prompt = ReadFile(fs::path(dir) / "prompt.txt");
  if (!prompt.ok()) return prompt.status();
  absl::StatusOr<std::string> digest = ReadFile(fs::path(dir) / "digest.txt");
  if (!digest.ok()) return digest.status();
  f.prompt = *std::move(prompt);
  f.digest = std::string(absl::StripAsciiWhitespace(*digest));
  for (int i = 0;; ++i) {
    const fs::path p = fs::path(dir) / absl::StrCat("response_", i, ".txt");
    if (!fs::exists(p)) break;
    absl::StatusOr<std::string> r = ReadFile(p);
    if (!r.ok()) return r.status();
    f.responses.push_back(*std::move(r));
  }
  return f;
}

absl::Status WriteFixture(const std::string& dir, const Fixture& fixture,
                          bool overwrite) {
  std::error_code ec;
  if (fs::exists(dir)) {
    if (!overwrite) {
      return absl::AlreadyExistsError(
          absl::StrCat("fixture ", dir, " exists (use --force)"));
    }
    fs::remove_all(dir, ec);
  }
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  if (absl::Status s = WriteFile(fs::path(dir) / "prompt.txt", fixture.prompt);
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          WriteFile(fs::path(dir) / "digest.txt", fixture.digest + "\n");
      !s.ok()) {
    return s;
  }
  for (size_t i = 0; i < fixture.responses.size(); ++i) {
    if (absl::Status s = WriteFile(
            fs::path(dir) / absl::StrCat("response_", i, ".txt"),
            fixture.responses[i]);
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<int> Backend::Available(const Request& request) const {
  return request.cfg->repetitions;
}

namespace {

class ReplayBackend : public Backend {
 public:
  ReplayBackend(std::string root, bool verify)
      : root_(std::move(root)), verify_(verify) {}

  std::string id() const override { return "replay"; }

  absl::StatusOr<int> Available(const Request& request) const override {
    absl::StatusOr<Fixture> f = Load(request);
    if (!f.ok()) return f.status();
    return std::min<int>(static_cast<int>(f->responses.size()),
                         request.cfg->repetitions);
  }

  absl::StatusOr<std::string> Respond(const Request& request,
                                      int repetition) const override {
    absl::StatusOr<Fixture> f = Load(request);
    if (!f.ok()) return f.status();
    if (repetition < 0 ||
        repetition >= static_cast<int>(f->responses.size())) {
      return absl::UnavailableError(absl::StrCat(
          "backend: no recorded response ", repetition, " for ",
          TaskName(request.task)));
    }
    return f->responses[repetition];
  }

 private:
  absl::StatusOr<Fixture> Load(const Request& request) const {
    std::string dir = FixtureDir(root_, request.task, request.label);
    if (!fs::is_directory(dir)) dir = FixtureDir(root_, request.task, "default");
    absl::StatusOr<Fixture> f = ReadFixture(dir);
    if (!f.ok()) {
      return absl::UnavailableError(
          absl::StrCat("backend: ", std::string(f.status().message())));
    }
    if (verify_ && f->digest != request.digest) {
      return absl::FailedPreconditionError(absl::StrCat(
          "backend: prompt drift in ", dir, ": recorded digest ", f->digest,
          ", current ", request.digest));
    }
    return f;
  }

  std::string root_;
  bool verify_;
};

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

absl::StatusOr<ParsedUrl> ParseUrl(const std::string& url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint url '", url, "' has no scheme"));
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint url '", url, "' must use http or https"));
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (out.scheme_host_port.size() <= scheme_end + 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint url '", url, "' has no host"));
  }
  return out;
}

// The system section of an assembled prompt, and everything after it.
std::pair<std::string, std::string> SplitSystem(const std::string& prompt) {
  constexpr std::string_view kHeader = "### System\n";
  if (!prompt.starts_with(kHeader)) return {"", prompt};
  const size_t next = prompt.find("\n### ", kHeader.size());
  if (next == std::string::npos) return {prompt.substr(kHeader.size()), ""};
  return {std::string(absl::StripAsciiWhitespace(
              prompt.substr(kHeader.size(), next - kHeader.size()))),
          prompt.substr(next + 1)};
}

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpConfig http) : http_(std::move(http)) {}

  std::string id() const override { return "http"; }

  absl::StatusOr<std::string> Respond(const Request& request,
                                      int repetition) const override {
    absl::StatusOr<ParsedUrl> url = ParseUrl(http_.endpoint_url);
    if (!url.ok()) return url.status();
    const auto [system, user] = SplitSystem(request.prompt);
    nlohmann::json body = {
        {"model", http_.model},
        {"temperature", request.cfg->temperature},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", system}},
                                {{"role", "user"}, {"content", user}}})}};
    httplib::Headers headers;
    if (const char* token = std::getenv(http_.auth_token_env.c_str())) {
      headers.emplace("Authorization", absl::StrCat("Bearer ", token));
    }
    std::mt19937_64 jitter(request.cfg->seed ^
                           (0x9e3779b97f4a7c15ULL *
                            static_cast<uint64_t>(repetition + 1)));
    std::string last_error;
    for (int attempt = 0; attempt <= http_.max_retries; ++attempt) {
      if (attempt > 0) {
        const double base = 0.5 * static_cast<double>(1 << (attempt - 1));
        std::uniform_real_distribution<double> u(0.0, base);
        std::this_thread::sleep_for(
            std::chrono::duration<double>(base + u(jitter)));
      }
      httplib::Client client(url->scheme_host_port);
      client.set_connection_timeout(http_.timeout_seconds, 0);
      client.set_read_timeout(http_.timeout_seconds, 0);
      httplib::Result res =
          client.Post(url->path, headers, body.dump(), "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = absl::StrCat("HTTP ", res->status);
        continue;
      }
      if (res->status != 200) {
        return absl::UnavailableError(absl::StrCat(
            "backend: HTTP ", res->status, " from ", http_.endpoint_url));
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("choices") ||
          reply["choices"].empty()) {
        return absl::UnavailableError("backend: malformed completion reply");
      }
      const nlohmann::json& msg = reply["choices"][0]["message"]["content"];
      return msg.is_string() ? msg.get<std::string>() : std::string();
    }
    return absl::UnavailableError(absl::StrCat(
        "backend: ", http_.endpoint_url, " unreachable after ",
        http_.max_retries + 1, " attempt(s): ", last_error));
  }

 private:
  HttpConfig http_;
};

}  // namespace

std::unique_ptr<Backend> MakeReplayBackend(std::string root,
                                           bool verify_digest) {
  return std::make_unique<ReplayBackend>(std::move(root), verify_digest);
}

std::unique_ptr<Backend> MakeHttpBackend(HttpConfig http) {
  return std::make_unique<HttpBackend>(std::move(http));
}

absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(const GenConfig& cfg) {
  switch (cfg.backend) {
    case BackendKind::kReplay:
      return MakeReplayBackend(cfg.fixture_root);
    case BackendKind::kSynth:
      return MakeSynthBackend();
    case BackendKind::kHttp: {
      absl::StatusOr<ParsedUrl> url = ParseUrl(cfg.http.endpoint_url);
      if (!url.ok()) return url.status();
      return MakeHttpBackend(cfg.http);
    }
  }
  return absl::InvalidArgumentError("unknown backend");
}

absl::StatusOr<std::vector<RawCandidate>> Generate(const GenContext& ctx,
                                                   const GenConfig& cfg,
                                                   const Backend& backend) {
  if (absl::Status s = ValidateGenConfig(cfg); !s.ok()) return s;
  Request request;
  request.task = ctx.task;
  request.label = ctx.label;
  request.prompt = AssemblePrompt(ctx, cfg);
  request.digest = RequestDigest(request.prompt, cfg);
  request.ctx = &ctx;
  request.cfg = &cfg;
  absl::StatusOr<int> n = backend.Available(request);
  if (!n.ok()) return n.status();

  std::vector<absl::StatusOr<std::string>> results(
      *n, absl::UnknownError("not run"));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < *n; i = next++) {
      results[i] = backend.Respond(request, i);
    }
  };
  const int threads = std::min(cfg.parallelism, *n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<RawCandidate> out;
  for (int i = 0; i < *n; ++i) {
    if (!results[i].ok()) return results[i].status();
    out.push_back(RawCandidate{*std::move(results[i]), backend.id(), i,
                               request.digest});
  }
  return out;
}

absl::StatusOr<int> RecordingBackend::Available(const Request& request) const {
  absl::StatusOr<int> n = inner_.Available(request);
  if (!n.ok()) return n;
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, fresh] =
      captured_.try_emplace({request.task, request.label}, Fixture{});
  if (!fresh && it->second.digest != request.digest) {
    conflicts_.push_back(absl::StrCat(TaskName(request.task), "/",
                                      request.label));
  }
  it->second.prompt = request.prompt;
  it->second.digest = request.digest;
  it->second.responses.assign(*n, "");
  return n;
}

absl::StatusOr<std::string> RecordingBackend::Respond(const Request& request,
                                                      int repetition) const {
  absl::StatusOr<std::string> text = inner_.Respond(request, repetition);
  if (!text.ok()) return text;
  std::lock_guard<std::mutex> lock(mu_);
  Fixture& f = captured_[{request.task, request.label}];
  if (repetition >= 0 && repetition < static_cast<int>(f.responses.size())) {
    f.responses[repetition] = *text;
  }
  return text;
}

absl::Status RecordingBackend::Write(const std::string& root,
                                     bool overwrite) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!conflicts_.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "record: two different prompts for ", conflicts_.front()));
  }
  for (const auto& [key, fixture] : captured_) {
    const std::string dir = FixtureDir(root, key.first, key.second);
    if (key.second != "default") {
      auto def = captured_.find({key.first, "default"});
      if (def != captured_.end() && def->second.digest == fixture.digest) {
        std::error_code ec;
        if (overwrite) fs::remove_all(dir, ec);
        continue;
      }
    }
    if (absl::Status s = WriteFixture(dir, fixture, overwrite); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

}  // namespace mrlift::generator
