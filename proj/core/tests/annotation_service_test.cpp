// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/annotation_service.hpp"

#include <random>

#include <gtest/gtest.h>
#include <httplib.h>

#include "editjudge/errors.hpp"
#include "test_support.hpp"

namespace editjudge {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { start(std::nullopt); }

  void start(std::optional<std::string> token) {
    service_.reset();
    tasks_ = load_tasks(testing::bench_dir() / "tasks.jsonl", FileFormat::kJsonl);
    AnnotationServiceOptions o;
    o.tasks = tasks_;
    o.assignment = assign_tasks(tasks_, AssignmentParams{25, 20, 5, 1});
    assignment_ = o.assignment;
    o.store_path = dir_ / "ratings.jsonl";
    o.image_root = testing::bench_dir();
    o.study_token = std::move(token);
    service_ = std::make_unique<AnnotationService>(std::move(o));
    port_ = service_->start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    client_.reset();
    if (service_) service_->stop();
  }

  json rating(const std::string& participant, const std::string& image_id) {
    std::mt19937_64 rng(std::hash<std::string>{}(participant + image_id));
    auto r = testing::random_record(rng, 1);
    r.participant_id = participant;
    r.image_id = image_id;
    for (const auto& t : tasks_) {
      if (t.task_id == image_id) r.edit_type = t.edit_type;
    }
    return json::parse(record_to_json(r).dump());
  }

  httplib::Result post(const json& body, const httplib::Headers& h = {}) {
    return client_->Post("/api/ratings", h, body.dump(), "application/json");
  }

  testing::TempDir dir_;
  std::vector<EditTask> tasks_;
  Assignment assignment_;
  std::unique_ptr<AnnotationService> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(ServiceTest, TaxonomyAndQuestions) {
  auto res = client_->Get("/api/taxonomy");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), taxonomy_json());
  const auto q = AnnotationService::questions();
  ASSERT_EQ(q.size(), 13u);
  EXPECT_EQ(q.back()["id"], "overall");
}

TEST_F(ServiceTest, NextServesUnratedTaskWithImages) {
  const auto& p = assignment_.participants[0];
  auto res = client_->Get("/api/session/" + p.participant_id + "/next");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto j = json::parse(res->body);
  EXPECT_EQ(j["done"], false);
  EXPECT_EQ(j["task"]["image_id"], p.task_ids[0]);
  EXPECT_EQ(j["progress"]["total"], 20);
  const auto img = client_->Get(j["task"]["original_url"].get<std::string>());
  ASSERT_TRUE(img);
  EXPECT_EQ(img->status, 200);
  EXPECT_EQ(img->body.substr(1, 3), "PNG");
  EXPECT_EQ(client_->Get("/api/session/nobody/next")->status, 404);
  EXPECT_EQ(client_->Get("/api/session/nobody/progress")->status, 404);
}

TEST_F(ServiceTest, IncompleteRatingListsMissingQuestions) {
  const auto& p = assignment_.participants[0];
  auto body = rating(p.participant_id, p.task_ids[0]);
  body["factor_scores"].erase("alignment");
  body["factor_scores"]["seamlessness"] = nullptr;
  body.erase("overall_score");
  auto res = post(body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  const auto j = json::parse(res->body);
  EXPECT_EQ(j["missing"], (json{"seamlessness", "alignment", "overall"}));
  EXPECT_EQ(post(json::array())->status, 400);
  EXPECT_EQ(client_->Post("/api/ratings", "{", "application/json")->status, 400);
}

TEST_F(ServiceTest, RejectsUnknownParticipantUnassignedTaskAndWrongType) {
  const auto& p = assignment_.participants[0];
  EXPECT_EQ(post(rating("P99", p.task_ids[0]))->status, 404);
  std::string other;
  for (const auto& t : tasks_) {
    if (std::find(p.task_ids.begin(), p.task_ids.end(), t.task_id) == p.task_ids.end()) {
      other = t.task_id;
      break;
    }
  }
  auto res = post(rating(p.participant_id, other));
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(json::parse(res->body)["field"], "image_id");
  auto body = rating(p.participant_id, p.task_ids[0]);
  body["edit_type"] = body["edit_type"] == "Add" ? "Remove" : "Add";
  res = post(body);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(json::parse(res->body)["field"], "edit_type");
}

TEST_F(ServiceTest, FullSessionThenDuplicate) {
  const auto& p = assignment_.participants[3];
  for (std::size_t i = 0; i < p.task_ids.size(); ++i) {
    auto res = post(rating(p.participant_id, p.task_ids[i]));
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 201) << res->body;
    EXPECT_EQ(json::parse(res->body)["progress"]["done"], i + 1);
  }
  const auto progress = json::parse(client_->Get("/api/session/" + p.participant_id +
                                                 "/progress")->body);
  EXPECT_EQ(progress, (json{{"done", 20}, {"total", 20}}));
  EXPECT_EQ(json::parse(client_->Get("/api/session/" + p.participant_id + "/next")->body)["done"],
            true);
  EXPECT_EQ(post(rating(p.participant_id, p.task_ids[0]))->status, 409);

  // The store holds exactly the accepted ratings, and a restart sees them.
  EXPECT_EQ(load_records(dir_ / "ratings.jsonl").size(), 20u);
  service_->stop();
  start(std::nullopt);
  EXPECT_EQ(post(rating(p.participant_id, p.task_ids[5]))->status, 409);
}

TEST_F(ServiceTest, StudyTokenGate) {
  start(std::string("letmein"));
  EXPECT_EQ(client_->Get("/api/taxonomy")->status, 401);
  const httplib::Headers ok{{"X-Study-Token", "letmein"}};
  EXPECT_EQ(client_->Get("/api/taxonomy", ok)->status, 200);
  const httplib::Headers wrong{{"X-Study-Token", "nope"}};
  const auto& p = assignment_.participants[0];
  EXPECT_EQ(post(rating(p.participant_id, p.task_ids[0]), wrong)->status, 401);
  EXPECT_EQ(post(rating(p.participant_id, p.task_ids[0]), ok)->status, 201);
}

}  // namespace
}  // namespace editjudge
