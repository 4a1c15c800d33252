// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/annotation_service.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>
#include <httplib.h>

#include "editjudge/errors.hpp"
#include "editjudge/taxonomy.hpp"

namespace editjudge {
using nlohmann::json;
using nlohmann::ordered_json;

struct AnnotationService::Impl {
  AnnotationServiceOptions opts;
  std::map<std::string, const EditTask*> tasks;
  RecordStore store;
  httplib::Server server;
  std::thread thread;

  mutable std::mutex mu;  // guards `rated` and serializes check-then-append
  std::set<std::pair<std::string, std::string>> rated;  // (participant, image)

  explicit Impl(AnnotationServiceOptions o)
      : opts(std::move(o)), store(opts.store_path) {
    for (const auto& t : opts.tasks) tasks.emplace(t.task_id, &t);
    for (const auto& p : opts.assignment.participants) {
      for (const auto& id : p.task_ids) {
        if (!tasks.count(id)) {
          throw ValidationError("assignment", fmt::format("participant {} is assigned unknown task '{}'",
                                                          p.participant_id, id));
        }
      }
    }
    std::unordered_set<std::string> ids;
    for (const auto& t : opts.tasks) ids.insert(t.task_id);
    store.set_known_tasks(std::move(ids));
    for (const auto& r : store.read_all()) rated.emplace(r.participant_id, r.image_id);
  }

  std::size_t done_count(const ParticipantTasks& p) const {
    std::size_t n = 0;
    for (const auto& id : p.task_ids) n += rated.count({p.participant_id, id});
    return n;
  }

  ordered_json progress(const ParticipantTasks& p) const {
    return {{"done", done_count(p)}, {"total", p.task_ids.size()}};
  }

  std::string image_url(const ImageRef& ref) const {
    std::string out = "/images/";
    for (unsigned char c : ref.uri) {
      if (std::isalnum(c) || c == '/' || c == '-' || c == '_' || c == '.' || c == '~') {
        out += static_cast<char>(c);
      } else {
        out += fmt::format("%{:02X}", c);
      }
    }
    return out;
  }

  std::optional<ordered_json> next(const std::string& participant) const {
    const auto* p = opts.assignment.find(participant);
    if (!p) return std::nullopt;
    std::lock_guard lock(mu);
    ordered_json out;
    out["participant_id"] = participant;
    out["progress"] = progress(*p);
    for (const auto& id : p->task_ids) {
      if (rated.count({participant, id})) continue;
      const auto& t = *tasks.at(id);
      out["done"] = false;
      out["task"] = {{"image_id", t.task_id},
                     {"edit_type", edit_type_name(t.edit_type)},
                     {"instruction", t.instruction},
                     {"original_url", image_url(t.original)},
                     {"edited_url", image_url(t.edited)}};
      out["questions"] = questions();
      return out;
    }
    out["done"] = true;
    return out;
  }

  void routes();
};

namespace {

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view error,
                const std::string& message, ordered_json extra = ordered_json::object()) {
  ordered_json body;
  body["error"] = error;
  body["message"] = message;
  for (auto& [k, v] : extra.items()) body[k] = v;
  send_json(res, status, body);
}

// Question ids absent from a rating body, in presentation order.
std::vector<std::string> missing_questions(const json& body) {
  std::vector<std::string> missing;
  const json* scores = nullptr;
  if (auto it = body.find("factor_scores"); it != body.end() && it->is_object()) scores = &*it;
  for (const auto& f : all_factors()) {
    const auto key = std::string(f.key);
    if (!scores || !scores->contains(key) || (*scores)[key].is_null()) missing.push_back(key);
  }
  if (!body.contains("overall_score") || body["overall_score"].is_null()) {
    missing.emplace_back(OverallQuestion::key);
  }
  return missing;
}

}  // namespace

void AnnotationService::Impl::routes() {
  if (opts.study_token) {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (req.path.rfind("/api/", 0) == 0 &&
          req.get_header_value("X-Study-Token") != *opts.study_token) {
        send_error(res, 401, "unauthorized", "missing or wrong X-Study-Token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
  }

  server.Get("/api/taxonomy", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(taxonomy_json().dump(), "application/json");
  });

  server.Get(R"(/api/session/([^/]+)/next)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string participant = req.matches[1];
               auto payload = next(participant);
               if (!payload) {
                 send_error(res, 404, "unknown_participant",
                            fmt::format("no participant '{}'", participant));
                 return;
               }
               send_json(res, 200, *payload);
             });

  server.Get(R"(/api/session/([^/]+)/progress)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string participant = req.matches[1];
               const auto* p = opts.assignment.find(participant);
               if (!p) {
                 send_error(res, 404, "unknown_participant",
                            fmt::format("no participant '{}'", participant));
                 return;
               }
               std::lock_guard lock(mu);
               send_json(res, 200, progress(*p));
             });

  server.Post("/api/ratings", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      send_error(res, 400, "bad_json", e.what());
      return;
    }
    if (!body.is_object()) {
      send_error(res, 400, "bad_json", "body must be a JSON object");
      return;
    }
    if (const auto missing = missing_questions(body); !missing.empty()) {
      send_error(res, 422, "incomplete", "every question needs a score",
                 {{"missing", missing}});
      return;
    }
    EvaluationRecord record;
    try {
      record = record_from_json(body);
    } catch (const ValidationError& e) {
      send_error(res, 422, "invalid", e.what(), {{"field", e.field()}});
      return;
    }
    const auto* p = opts.assignment.find(record.participant_id);
    if (!p) {
      send_error(res, 404, "unknown_participant",
                 fmt::format("no participant '{}'", record.participant_id));
      return;
    }
    if (std::find(p->task_ids.begin(), p->task_ids.end(), record.image_id) == p->task_ids.end()) {
      send_error(res, 422, "invalid",
                 fmt::format("task '{}' is not assigned to {}", record.image_id,
                             record.participant_id),
                 {{"field", "image_id"}});
      return;
    }
    if (tasks.at(record.image_id)->edit_type != record.edit_type) {
      send_error(res, 422, "invalid",
                 fmt::format("task '{}' is a {} edit", record.image_id,
                             edit_type_name(tasks.at(record.image_id)->edit_type)),
                 {{"field", "edit_type"}});
      return;
    }

    std::lock_guard lock(mu);
    if (rated.count({record.participant_id, record.image_id})) {
      send_error(res, 409, "duplicate",
                 fmt::format("{} already rated '{}'", record.participant_id, record.image_id));
      return;
    }
    try {
      store.append(record);
    } catch (const ValidationError& e) {
      send_error(res, 422, "invalid", e.what(), {{"field", e.field()}});
      return;
    } catch (const IoError& e) {
      send_error(res, 500, "io", e.what());
      return;
    }
    rated.emplace(record.participant_id, record.image_id);
    send_json(res, 201, {{"accepted", true}, {"progress", progress(*p)}});
  });

  if (!opts.image_root.empty()) server.set_mount_point("/images", opts.image_root.string());
  if (opts.static_dir) server.set_mount_point("/", opts.static_dir->string());
}

AnnotationService::AnnotationService(AnnotationServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->routes();
}

AnnotationService::~AnnotationService() { stop(); }

int AnnotationService::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw IoError(fmt::format("cannot bind {}:{}", host, port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void AnnotationService::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void AnnotationService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::optional<ordered_json> AnnotationService::next_payload(const std::string& participant) const {
  return impl_->next(participant);
}

ordered_json AnnotationService::questions() {
  ordered_json qs = ordered_json::array();
  for (const auto& f : all_factors()) {
    qs.push_back({{"id", f.key},
                  {"name", f.name},
                  {"category", category_key(f.category)},
                  {"question", f.question}});
  }
  qs.push_back({{"id", OverallQuestion::key},
                {"name", OverallQuestion::name},
                {"category", nullptr},
                {"question", OverallQuestion::question}});
  return qs;
}

}  // namespace editjudge
