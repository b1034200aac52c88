// Copyright 2026 The Sphinx Authors.
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


#include "sphinx/cli/app.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "sphinx/bench/benchmark.hpp"
#include "sphinx/cli/config.hpp"
#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"
#include "sphinx/eval/evaluate.hpp"
#include "sphinx/ingest/code_host.hpp"
#include "sphinx/ingest/filter.hpp"
#include "sphinx/llm/prompt_runner.hpp"
#include "sphinx/reward/service.hpp"
#include "sphinx/synthesis/synthesis.hpp"
#include "sphinx/util/parallel.hpp"

namespace sphinx::cli {
namespace {

namespace fs = std::filesystem;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::string config_path;
  std::string replay_dir;
  std::string record_dir;
  bool strict_replay = false;
  int jobs = -1;
  std::string out_dir = "out";

  std::vector<std::string> inputs;
  std::vector<std::string> repos;
  std::vector<std::int64_t> prs;
  std::int64_t token_limit = -1;
  std::int64_t seed = -1;
  bool no_classify = false;
  std::string candidate_model;
  std::string model_name;
  double lambda = -1.0;
  std::string bind;
};

// Flags win over the file, the file over defaults.
RunConfig resolve(const Options& o) {
  RunConfig c = o.config_path.empty() ? resolve_config(nlohmann::json::object()) : load_config(o.config_path);
  if (o.jobs >= 0) c.jobs = o.jobs;
  if (!o.replay_dir.empty() && !o.record_dir.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "--replay and --record are mutually exclusive");
  }
  if (!o.replay_dir.empty()) {
    c.gateway.mode = llm::GatewayMode::kReplay;
    c.gateway.cache_dir = o.replay_dir;
  }
  if (!o.record_dir.empty()) {
    c.gateway.mode = llm::GatewayMode::kRecord;
    c.gateway.cache_dir = o.record_dir;
  }
  if (o.strict_replay) {
    if (c.gateway.mode == llm::GatewayMode::kRecord) {
      throw Error(ErrorCode::kInvalidConfig, "--strict-replay cannot be combined with --record");
    }
    c.gateway.mode = llm::GatewayMode::kStrictReplay;
  }
  if (c.gateway.mode != llm::GatewayMode::kLive && c.gateway.cache_dir.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "replay modes need a cache directory (--replay DIR)");
  }
  if (!o.repos.empty()) c.ingest.repos = o.repos;
  if (o.token_limit >= 0) c.ingest.token_limit = o.token_limit;
  if (o.seed >= 0) c.benchmark.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.candidate_model.empty()) c.eval.candidate_model_id = o.candidate_model;
  if (!o.model_name.empty()) c.model_name = o.model_name;
  if (o.lambda >= 0.0) c.eval.lambda = o.lambda;
  if (!o.bind.empty()) c.reward_bind = o.bind;
  c.ingest.validate();
  c.eval.validate();
  return c;
}

// Gateway, templates and runner for one invocation.
struct LlmStack {
  std::unique_ptr<llm::Gateway> gateway;
  std::unique_ptr<llm::TemplateLibrary> templates;
  std::unique_ptr<llm::PromptRunner> runner;
};

LlmStack make_stack(const RunConfig& c, const RunHooks& hooks) {
  std::shared_ptr<llm::Provider> provider = hooks.provider;
  if (!provider && c.gateway.mode != llm::GatewayMode::kStrictReplay) {
    auto http = llm::HttpProviderConfig::from_env();
    if (!c.llm_base_url.empty()) http.base_url = c.llm_base_url;
    http.endpoint_path = c.llm_endpoint;
    http.timeout = std::chrono::seconds(c.llm_timeout_seconds);
    if (!http.base_url.empty()) provider = std::make_shared<llm::HttpProvider>(http);
  }
  LlmStack s;
  s.gateway = std::make_unique<llm::Gateway>(c.gateway, provider);
  s.templates = std::make_unique<llm::TemplateLibrary>(c.prompts_dir.empty() ? llm::default_prompts_dir()
                                                                               : fs::path(c.prompts_dir));
  s.runner = std::make_unique<llm::PromptRunner>(*s.gateway, *s.templates, c.model_roles());
  return s;
}

void note_gateway(RunManifest& m, const LlmStack& s) {
  m.gateway = {{"mode", std::string(llm::to_string(s.gateway->config().mode))},
               {"provider_calls", s.gateway->provider_calls()},
               {"cache_hits", s.gateway->cache_hits()}};
}

std::string output(RunManifest& m, const fs::path& dir, const std::string& name) {
  const fs::path p = dir / name;
  m.outputs.push_back(p.string());
  return p.string();
}

nlohmann::json error_row(const std::string& case_id, const std::string& message) {
  return {{"case_id", case_id}, {"message", message}};
}

bool is_transport_failure(std::string_view failure) {
  return failure.starts_with(to_string(ErrorCode::kProviderError)) ||
         failure.starts_with(to_string(ErrorCode::kCacheMiss));
}

std::vector<SphinxCase> load_all_cases(const std::vector<std::string>& inputs) {
  std::vector<SphinxCase> all;
  for (const auto& in : inputs) {
    auto part = load_cases(in);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

// ---- subcommands ----

int cmd_ingest(const RunConfig& c, const Options& o, RunManifest& m) {
  if (c.ingest.repos.empty()) throw Error(ErrorCode::kInvalidConfig, "no repositories given");
  if (!o.prs.empty() && c.ingest.repos.size() != 1) {
    throw Error(ErrorCode::kInvalidConfig, "--pr needs exactly one repository");
  }
  auto host_cfg = ingest::CodeHostConfig::from_env();
  host_cfg.base_url = c.code_host_url;
  if (const char* url = std::getenv("SPHINX_CODEHOST_BASE_URL"); url && *url) host_cfg.base_url = url;
  ingest::CodeHostClient client(host_cfg);

  std::vector<std::pair<std::string, std::int64_t>> targets;
  std::vector<nlohmann::json> errors;
  for (const auto& repo : c.ingest.repos) {
    std::vector<std::int64_t> numbers = o.prs;
    if (numbers.empty()) {
      try {
        numbers = client.list_closed_prs(repo, c.ingest.max_prs);
      } catch (const Error& e) {
        errors.push_back(error_row(repo, e.what()));
        continue;
      }
    }
    for (const auto n : numbers) targets.emplace_back(repo, n);
  }
  std::vector<std::optional<PullRequestRecord>> fetched(targets.size());
  std::vector<std::string> failures(targets.size());
  parallel_for(targets.size(), c.jobs, [&](std::size_t i) {
    try {
      fetched[i] = client.fetch_pr(targets[i].first, targets[i].second);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  std::vector<PullRequestRecord> records;
  std::size_t skipped_language = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string id = targets[i].first + "#" + std::to_string(targets[i].second);
    if (!failures[i].empty()) {
      errors.push_back(error_row(id, failures[i]));
    } else if (!c.ingest.languages.count(fetched[i]->language)) {
      ++skipped_language;
    } else {
      records.push_back(std::move(*fetched[i]));
    }
  }
  if (skipped_language > 0) spdlog::info("skipped {} PRs outside the selected languages", skipped_language);
  save_records(output(m, o.out_dir, "records.jsonl"), records);
  write_jsonl(output(m, o.out_dir, "errors.jsonl"), errors);
  m.records_in = targets.size();
  m.records_out = records.size();
  m.errors = errors.size();
  return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_filter(const RunConfig& c, const Options& o, const RunHooks& hooks, RunManifest& m) {
  const auto records = load_records(o.inputs.at(0));
  auto stack = make_stack(c, hooks);
  const auto result = ingest::run_filter_pipeline(records, c.ingest, *stack.runner, c.jobs);
  note_gateway(m, stack);

  std::vector<nlohmann::json> decisions;
  for (const auto& d : result.decisions) decisions.push_back(ingest::to_json(d));
  std::vector<nlohmann::json> errors;
  for (const auto& e : result.errors) errors.push_back(error_row(e.case_id, e.message));
  save_records(output(m, o.out_dir, "kept.jsonl"), result.kept);
  write_jsonl(output(m, o.out_dir, "decisions.jsonl"), decisions);
  write_jsonl(output(m, o.out_dir, "errors.jsonl"), errors);
  m.records_in = records.size();
  m.records_out = result.kept.size();
  m.errors = result.errors.size();
  return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_synthesize(const RunConfig& c, const Options& o, const RunHooks& hooks, RunManifest& m) {
  const auto records = load_records(o.inputs.at(0));
  auto stack = make_stack(c, hooks);
  const auto outcomes = synthesis::synthesize_batch(records, *stack.runner, c.jobs);
  note_gateway(m, stack);

  std::map<Language, std::vector<SphinxCase>> by_language;
  std::vector<nlohmann::json> traces;
  std::size_t errors = 0;
  for (const auto& out : outcomes) {
    traces.push_back(synthesis::to_json(out.trace));
    if (out.sphinx_case) {
      by_language[out.sphinx_case->record.language].push_back(*out.sphinx_case);
      ++m.records_out;
    } else if (is_transport_failure(out.trace.failure)) {
      ++errors;
    }
  }
  for (const auto& [lang, cases] : by_language) {
    save_cases(output(m, o.out_dir, "cases." + std::string(file_slug(lang)) + ".jsonl"), cases);
  }
  write_jsonl(output(m, o.out_dir, "traces.jsonl"), traces);
  m.records_in = records.size();
  m.errors = errors;
  return errors == 0 ? kExitOk : kExitPartial;
}

void write_stats(const std::vector<SphinxCase>& cases, const fs::path& dir, RunManifest& m) {
  const auto stats = bench::benchmark_stats(cases);
  write_file(output(m, dir, "stats.json"), bench::to_json(stats).dump(2) + "\n");
  write_file(output(m, dir, "stats.txt"), bench::format_stats_table(stats));
}

int cmd_build_bench(const RunConfig& c, const Options& o, const RunHooks& hooks, RunManifest& m) {
  auto corpus = load_all_cases(o.inputs);
  std::vector<nlohmann::json> errors;
  if (!o.no_classify) {
    auto stack = make_stack(c, hooks);
    const auto report = bench::classify_corpus(corpus, *stack.runner, c.jobs);
    note_gateway(m, stack);
    for (const auto& [id, msg] : report.errors) errors.push_back(error_row(id, msg));
    if (report.fallbacks > 0) spdlog::warn("{} category verdicts fell back to Other", report.fallbacks);
  }
  const auto benchmark = bench::sample_benchmark(corpus, c.benchmark);
  save_cases(output(m, o.out_dir, "benchmark.jsonl"), benchmark);
  write_stats(benchmark, o.out_dir, m);
  write_jsonl(output(m, o.out_dir, "errors.jsonl"), errors);
  m.records_in = corpus.size();
  m.records_out = benchmark.size();
  m.errors = errors.size();
  return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_evaluate(const RunConfig& c, const Options& o, const RunHooks& hooks, RunManifest& m) {
  const auto benchmark = load_all_cases(o.inputs);
  auto stack = make_stack(c, hooks);
  eval::EvalConfig cfg = c.eval;
  cfg.jobs = c.jobs;
  const auto report = eval::evaluate_model(benchmark, cfg, *stack.runner);
  note_gateway(m, stack);
  write_file(output(m, o.out_dir, "report.json"), eval::to_json(report).dump(2) + "\n");
  write_file(output(m, o.out_dir, "table.txt"), eval::format_table(report, c.model_name));
  m.records_in = benchmark.size();
  m.records_out = report.cases.size() - report.incomplete_cases;
  m.errors = report.incomplete_cases;
  return report.incomplete_cases == 0 ? kExitOk : kExitPartial;
}

int cmd_stats(const Options& o, RunManifest& m) {
  const auto cases = load_all_cases(o.inputs);
  write_stats(cases, o.out_dir, m);
  m.records_in = cases.size();
  m.records_out = cases.size();
  return kExitOk;
}

std::atomic<bool> g_stop_requested{false};

extern "C" void on_signal(int) { g_stop_requested.store(true); }

int cmd_reward_serve(const RunConfig& c, const Options& o, const RunHooks& hooks, RunManifest& m) {
  std::string bind_text = c.reward_bind;
  if (o.bind.empty()) {
    if (const char* env = std::getenv("SPHINX_REWARD_BIND"); env && *env) bind_text = env;
  }
  const auto addr = reward::parse_bind_address(bind_text);
  auto stack = make_stack(c, hooks);
  reward::ServiceConfig cfg = c.reward;
  cfg.batch_jobs = c.jobs;
  reward::RewardService service(cfg, *stack.runner);
  const int port = service.bind(addr.host, addr.port);
  spdlog::info("reward service listening on {}:{}", addr.host, port);

  g_stop_requested.store(false);
  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop_requested.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  });
  service.listen();
  g_stop_requested.store(true);
  watcher.join();
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);

  note_gateway(m, stack);
  m.records_in = static_cast<std::size_t>(service.requests_served());
  m.message = "served on " + addr.host + ":" + std::to_string(port);
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "Config file")->check(CLI::ExistingFile);
  sub->add_option("--replay", o.replay_dir, "Serve LLM calls from this cache, calling the provider on a miss");
  sub->add_option("--record", o.record_dir, "Call the provider and store replies in this cache");
  sub->add_flag("--strict-replay", o.strict_replay, "Treat replay cache misses as failures");
  sub->add_option("--jobs", o.jobs, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  sub->add_option("--out", o.out_dir, "Output directory");
}

void write_manifest(const RunManifest& m, const fs::path& dir) {
  try {
    write_file(dir / "manifest.json", to_json(m).dump(2) + "\n");
  } catch (const std::exception& e) {
    spdlog::error("cannot write manifest: {}", e.what());
  }
}

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j = {{"command", m.command},
                      {"config_hash", m.config_hash},
                      {"config", m.config},
                      {"inputs", m.inputs},
                      {"outputs", m.outputs},
                      {"started_at", m.started_at},
                      {"finished_at", m.finished_at},
                      {"counts", {{"records_in", m.records_in}, {"records_out", m.records_out}, {"errors", m.errors}}},
                      {"gateway", m.gateway},
                      {"exit_code", m.exit_code}};
  if (!m.message.empty()) j["message"] = m.message;
  return j;
}

int run(const std::vector<std::string>& args, const RunHooks& hooks) {
  CLI::App app{"Pull-request review dataset, benchmark and reward toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Fetch pull requests and assemble records");
  add_common(ingest, o);
  ingest->add_option("--repo", o.repos, "owner/name; overrides [ingest] repos");
  ingest->add_option("--pr", o.prs, "Only these PR numbers (single repository)");

  auto* filter = app.add_subcommand("filter", "Completeness, merged, length and safety filters");
  add_common(filter, o);
  filter->add_option("--in", o.inputs, "records.jsonl")->required()->expected(1);
  filter->add_option("--token-limit", o.token_limit, "Token budget per record");

  auto* synth = app.add_subcommand("synthesize", "Instruction, pseudo solution, review and checklist");
  add_common(synth, o);
  synth->add_option("--in", o.inputs, "Filtered records.jsonl")->required()->expected(1);

  auto* build = app.add_subcommand("build-bench", "Classify, sample and summarize the benchmark");
  add_common(build, o);
  build->add_option("--in", o.inputs, "Case files")->required();
  build->add_option("--seed", o.seed, "Sampling seed")->check(CLI::NonNegativeNumber);
  build->add_flag("--no-classify", o.no_classify, "Keep existing categories");

  auto* evaluate = app.add_subcommand("evaluate", "Score a candidate model on a benchmark");
  add_common(evaluate, o);
  evaluate->add_option("--bench", o.inputs, "benchmark.jsonl")->required();
  evaluate->add_option("--model", o.candidate_model, "Candidate model id");
  evaluate->add_option("--model-name", o.model_name, "Row label in the score table");
  evaluate->add_option("--lambda", o.lambda, "Buggy-partition weight")->check(CLI::Range(0.0, 1.0));

  auto* serve = app.add_subcommand("reward-serve", "Serve the checklist reward over HTTP");
  add_common(serve, o);
  serve->add_option("--bind", o.bind, "host:port (default from config or SPHINX_REWARD_BIND)");

  auto* stats = app.add_subcommand("stats", "Per-language statistics of case files");
  add_common(stats, o);
  stats->add_option("--in", o.inputs, "Case files")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunManifest m;
  m.command = sub->get_name();
  m.started_at = utc_now();
  m.inputs = o.inputs;
  int code = kExitOk;
  bool have_out_dir = false;
  try {
    fs::create_directories(o.out_dir);
    have_out_dir = true;
    const RunConfig config = resolve(o);
    m.config = to_json(config);
    m.config_hash = config_hash(config);
    for (const auto& in : o.inputs) {
      if (!fs::exists(in)) throw Error(ErrorCode::kInvalidConfig, "input not found: " + in);
    }
    if (sub == ingest) code = cmd_ingest(config, o, m);
    else if (sub == filter) code = cmd_filter(config, o, hooks, m);
    else if (sub == synth) code = cmd_synthesize(config, o, hooks, m);
    else if (sub == build) code = cmd_build_bench(config, o, hooks, m);
    else if (sub == evaluate) code = cmd_evaluate(config, o, hooks, m);
    else if (sub == serve) code = cmd_reward_serve(config, o, hooks, m);
    else code = cmd_stats(o, m);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    m.message = e.what();
    const bool usage = e.code() == ErrorCode::kInvalidConfig || e.code() == ErrorCode::kParseError ||
                       e.code() == ErrorCode::kTemplateError;
    code = usage ? kExitUsage : kExitPartial;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    m.message = e.what();
    code = kExitPartial;
  }
  m.finished_at = utc_now();
  m.exit_code = code;
  if (have_out_dir) write_manifest(m, o.out_dir);
  return code;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

}  // namespace sphinx::cli
