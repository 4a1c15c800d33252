// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

// edit-judge: ingest | judge | metrics | agree | report | serve
//
// Each command prints a JSON stage report on stdout. Failures exit 1 and emit
// a JSON error object on stderr, also appended to {out}/error_log.jsonl when
// the output directory is known.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "editjudge/annotation_service.hpp"
#include "editjudge/config.hpp"
#include "editjudge/errors.hpp"
#include "editjudge/pipeline.hpp"
#include "editjudge/timestamp.hpp"

namespace ej = editjudge;
using nlohmann::ordered_json;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> variant;
  std::optional<std::string> mode;
  std::optional<int> concurrency;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> port;
};

ej::RunConfig effective_config(const Flags& f) {
  auto c = ej::load_config(f.config);
  if (f.mode) {
    try {
      c.mode = ej::mode_from_key(*f.mode);
    } catch (const ej::Error& e) {
      throw ej::ConfigError(fmt::format("--mode: {}", e.what()));
    }
  }
  if (f.concurrency) c.concurrency = *f.concurrency;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out_dir = *f.out;
  if (f.port) c.serve.port = *f.port;
  return c;
}

void log_error(const std::string& command, const std::optional<ej::RunConfig>& cfg,
               ordered_json error) {
  ordered_json entry;
  entry["time"] = ej::Timestamp::now().to_iso8601();
  entry["command"] = command;
  for (auto& [k, v] : error.items()) entry[k] = v;
  std::cerr << entry.dump() << "\n";
  if (!cfg) return;
  try {
    ej::append_durable(cfg->out_dir / "error_log.jsonl", entry.dump() + "\n");
  } catch (const ej::Error&) {
    // stderr already has it
  }
}

int serve(const ej::RunConfig& c) {
  const auto assignment_path = ej::layout::assignment(c);
  if (!std::filesystem::exists(assignment_path)) {
    throw ej::PreconditionError(fmt::format(
        "{} not found; run ingest with a study section first", assignment_path.string()));
  }
  ej::AnnotationServiceOptions o;
  o.tasks = ej::load_run_tasks(c);
  o.assignment = ej::assignment_from_json(nlohmann::json::parse(ej::read_file(assignment_path)));
  o.store_path = c.records ? *c.records : c.out_dir / "ratings.jsonl";
  if (o.store_path.extension() != ".jsonl") {
    throw ej::ConfigError("the rating store must be a .jsonl file");
  }
  o.image_root = c.image_root;
  o.static_dir = c.serve.static_dir;
  if (c.serve.token_env) {
    const char* token = std::getenv(c.serve.token_env->c_str());
    if (!token || !*token) {
      throw ej::ConfigError(
          fmt::format("environment variable {} is not set", *c.serve.token_env));
    }
    o.study_token = token;
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ej::AnnotationService service(std::move(o));
  const int port = service.start(c.serve.host, c.serve.port);
  std::cout << ordered_json{{"stage", "serve"}, {"host", c.serve.host}, {"port", port}}.dump()
            << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  service.stop();
  return 0;
}

int run(const std::string& command, const Flags& flags) {
  std::optional<ej::RunConfig> cfg;
  try {
    cfg = effective_config(flags);
    ej::StageReport report;
    if (command == "ingest") {
      report = ej::run_ingest(*cfg);
    } else if (command == "judge") {
      std::optional<ej::PromptVariant> variant = cfg->variant;
      if (flags.variant) variant = ej::variant_from_key(*flags.variant);
      if (!variant) throw ej::ConfigError("no prompt variant: pass --variant or set judge.variant");
      auto client = ej::make_judge_client(*cfg);
      report = ej::run_judge(*cfg, *client, *variant);
    } else if (command == "metrics") {
      report = ej::run_metrics(*cfg, ej::make_providers(*cfg));
    } else if (command == "agree") {
      report = ej::run_agree(*cfg);
    } else if (command == "report") {
      report = ej::run_report(*cfg);
    } else if (command == "serve") {
      return serve(*cfg);
    }
    std::cout << report.to_json().dump(2) << "\n";
    if (report.failed > 0) {
      log_error(command, cfg,
                {{"kind", "stage_failed"},
                 {"message", fmt::format("{} of {} tasks failed", report.failed,
                                         report.failed + report.processed)},
                 {"errors", report.errors}});
      return 1;
    }
    return 0;
  } catch (const ej::Error& e) {
    log_error(command, cfg, {{"kind", e.kind()}, {"message", e.what()}});
  } catch (const std::exception& e) {
    log_error(command, cfg, {{"kind", "internal"}, {"message", e.what()}});
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fine-grained MLLM-judge evaluation for instruction-guided image edits",
               "edit-judge"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--concurrency", flags.concurrency, "Parallel tasks")
        ->check(CLI::Range(1, 256));
    sub->add_option("--seed", flags.seed, "Seed for task assignment");
    sub->add_option("--out", flags.out, "Output directory");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate tasks, record image shapes, assign raters");
  common(ingest);
  auto* judge = app.add_subcommand("judge", "Collect judge verdicts for unjudged tasks");
  common(judge);
  judge->add_option("--variant", flags.variant, "Prompt variant (default: judge.variant)")
      ->check(CLI::IsMember({"main", "rubrics", "category"}));
  judge->add_option("--mode", flags.mode, "Evaluation mode")
      ->check(CLI::IsMember({"online", "offline"}));
  auto* metrics = app.add_subcommand("metrics", "Compute per-task traditional metrics");
  common(metrics);
  auto* agree = app.add_subcommand("agree", "Human-judge agreement statistics");
  common(agree);
  auto* report = app.add_subcommand("report", "Render tables into reports/");
  common(report);
  auto* srv = app.add_subcommand("serve", "Run the annotation service");
  common(srv);
  srv->add_option("--port", flags.port, "Listen port (0 picks one)")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) {
      std::cerr << ordered_json{{"kind", "usage"}, {"message", e.what()}}.dump() << "\n";
    }
    return code;
  }
  return run(app.get_subcommands().front()->get_name(), flags);
}
