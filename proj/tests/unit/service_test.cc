// Copyright 2026 The ConvXAI Authors.
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
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "convxai/error.h"
#include "convxai/random.h"
#include "convxai/service/api.h"
#include "convxai/service/config.h"
#include "convxai/service/engine.h"
#include "convxai/service/scenario.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;
using namespace convxai::service;
using convxai::testing::TestConfig;

const tabular::NamedValues kProfile = {{"Income", "40"}, {"Age", "30"},
                                       {"Housing", "rent"}, {"Job", "clerk"},
                                       {"Debt", "70"}};
const tabular::NamedValues kRich = {{"Income", "150"}, {"Age", "50"},
                                    {"Housing", "own"}, {"Job", "engineer"},
                                    {"Debt", "5"}};

ServiceConfig Fresh(const std::string& scratch) {
  auto c = TestConfig(scratch);
  std::filesystem::remove(c.unmatched_log);
  return c;
}

std::vector<std::string> Texts(const std::vector<Turn>& turns) {
  std::vector<std::string> out;
  for (const auto& t : turns) out.push_back(t.text);
  return out;
}

TEST_SUITE("service") {

TEST_CASE("session lifecycle and profile turns") {
  Engine engine(Fresh("lifecycle"));
  const auto id = engine.CreateSession("loan");
  CHECK(engine.History(id).empty());
  CHECK(engine.SessionInfo(id)["dataset"] == "loan");

  const auto turn = engine.SetProfile(id, kProfile);
  CHECK(turn.role == Role::kAgent);
  CHECK(turn.text.rfind("I recorded the profile: [Income: 40, Age: 30", 0) == 0);
  CHECK(turn.text.find("the loan decision will be") != std::string::npos);
  CHECK(engine.History(id).size() == 1);

  auto missing = kProfile;
  missing.pop_back();
  try {
    engine.SetProfile(id, missing);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.problems().size() == 1);
    CHECK(e.problems()[0].find("Debt") != std::string::npos);
  }
  CHECK(engine.History(id).size() == 1);

  engine.SetProfile(id, kRich);
  CHECK(engine.History(id).size() == 2);
  CHECK(engine.History(id)[1].text.find("Income: 150") != std::string::npos);

  CHECK_THROWS_AS(engine.CreateSession("mars"), NotFoundError);
  CHECK_THROWS_AS(engine.History("nope"), NotFoundError);
  CHECK_THROWS_AS(engine.Ask("nope", "hi"), NotFoundError);
}

TEST_CASE("every ask appends exactly two turns") {
  auto config = Fresh("parity");
  Engine engine(config);
  const auto id = engine.CreateSession("loan");
  std::size_t expected = 0;
  auto ask = [&](const std::string& text) {
    const auto r = engine.Ask(id, text);
    expected += 2;
    const auto h = engine.History(id);
    REQUIRE(h.size() == expected);
    CHECK(h[expected - 2].role == Role::kUser);
    CHECK(h[expected - 1].role == Role::kAgent);
    CHECK(h[expected - 2].text == text);
    CHECK(!h[expected - 1].text.empty());
    return r;
  };
  // Before a profile: clarification.
  auto r = ask("Give me the reason for this prediction!");
  CHECK(r.agent.text == "Please enter a profile first, then I can answer this question.");
  engine.SetProfile(id, kProfile);
  ++expected;
  r = ask("Give me the reason for this prediction!");
  CHECK(r.agent.provenance["question_id"] == 47);
  CHECK(r.agent.answer.contains("chart"));
  r = ask("qwzx vbnm plokij");
  CHECK(r.agent.provenance["kind"] == "no_match");
  CHECK(r.payload.is_null());
  CHECK(!r.user.label);
  r = ask("Why is this profile predicted rejected instead of approved?");
  CHECK(r.agent.provenance["question_id"] == 53);
  ask("How accurate is the model?");
  ask("");

  // Timestamps never go backwards.
  const auto h = engine.History(id);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i - 1].timestamp <= h[i].timestamp);
  CHECK(engine.Unmatched(config.admin_token).size() == 2);
}

TEST_CASE("failures still append two turns and keep the session usable") {
  auto config = Fresh("failure");
  // A directory cannot be appended to, so logging an unmatched question fails.
  config.unmatched_log = std::filesystem::path(CONVXAI_TEST_VAR);
  Engine engine(config);
  const auto id = engine.CreateSession("loan");
  engine.SetProfile(id, kProfile);
  const auto r = engine.Ask(id, "qwzx vbnm plokij");
  CHECK(r.agent.provenance["kind"] == "error");
  CHECK(r.agent.text.find("E_IO") != std::string::npos);
  CHECK(engine.History(id).size() == 3);
  const auto ok = engine.Ask(id, "Give me the reason for this prediction!");
  CHECK(ok.agent.provenance["question_id"] == 47);
  CHECK(engine.History(id).size() == 5);
}

TEST_CASE("unmatched records survive a restart; the admin token is checked") {
  auto config = Fresh("restart");
  {
    Engine engine(config);
    const auto id = engine.CreateSession("loan");
    engine.Ask(id, "qwzx vbnm plokij");
    CHECK(engine.Unmatched(config.admin_token).size() == 1);
  }
  Engine again(config);
  const auto records = again.Unmatched(config.admin_token);
  REQUIRE(records.size() == 1);
  CHECK(records[0]["original"] == "qwzx vbnm plokij");
  try {
    again.Unmatched("wrong");
    FAIL("expected E_AUTH");
  } catch (const Error& e) {
    CHECK(e.code() == "E_AUTH");
  }
  CHECK_THROWS(again.Unmatched(""));
}

TEST_CASE("bundles are cached and deterministic") {
  Engine engine(Fresh("cache"));
  const auto a = engine.Bundle("loan");
  const auto b = engine.Bundle("loan");
  CHECK(a.get() == b.get());
  const auto c = engine.Bundle("loan", Json{{"n_trees", 7}});
  CHECK(c->key != a->key);
  CHECK(c->forest.trees().size() == 7);
  CHECK(a->card.cv.k == 3);

  // A second engine loads the same model from the artifact cache.
  Engine other(Fresh("cache2"));
  const auto d = other.Bundle("loan");
  CHECK(d->from_cache);
  CHECK(d->forest.Fingerprint() == a->forest.Fingerprint());
  CHECK_THROWS_AS(engine.Bundle("loan", Json{{"n_trees", "many"}}), ValidationError);
  CHECK_THROWS_AS(engine.Bundle("loan", Json{{"n_trees", 0}}), ValidationError);
}

TEST_CASE("identical state and question give identical text") {
  Engine engine(Fresh("determinism"));
  const std::vector<std::string> questions = {
      "Give me the reason for this prediction!",
      "Why is this profile predicted rejected instead of approved?",
      "How could I change only Income to get approved?",
      "What is the scope of change permitted to still get the same prediction?"};
  std::vector<std::string> first;
  for (int round = 0; round < 2; ++round) {
    const auto id = engine.CreateSession("loan");
    engine.SetProfile(id, kProfile);
    std::vector<std::string> texts;
    for (const auto& q : questions) texts.push_back(engine.Ask(id, q).agent.text);
    if (round == 0) first = texts;
    else CHECK(texts == first);
  }
  // The shared pipeline gives the same text outside the engine.
  const auto id = engine.CreateSession("loan");
  engine.SetProfile(id, kProfile);
  const auto bundle = engine.Bundle("loan");
  policy::SessionState state;
  state.current = tabular::ValidateInstance(bundle->schema(), kProfile).instance;
  state.current_prediction = bundle->forest.Predict(*state.current);
  const auto templates = engine.templates();
  PipelineParts parts;
  parts.matcher = &engine.matcher();
  parts.routing = &engine.routing();
  policy::Glossary glossary;
  parts.glossary = &glossary;
  parts.templates = templates.get();
  parts.bundle = bundle.get();
  parts.explainers = &engine.config().explainers;
  parts.chart_top_n = engine.config().chart_top_n;
  CHECK(AnswerQuestion(parts, state, questions[1]).rendered.text == first[1]);
}

TEST_CASE("sessions are isolated under concurrent use") {
  const std::vector<std::string> questions = {
      "Give me the reason for this prediction!",
      "Why is this profile predicted rejected instead of approved?",
      "qwzx vbnm plokij",
      "How accurate is the model?",
      "What if Income was 120?"};
  const std::vector<tabular::NamedValues> profiles = {kProfile, kRich};
  constexpr int kSessions = 6;
  constexpr int kSteps = 8;
  // Each session follows its own seeded script.
  auto script = [&](int s) {
    Rng rng(MixSeed(99, s));
    std::vector<std::pair<bool, std::size_t>> steps;
    for (int i = 0; i < kSteps; ++i) {
      const bool profile = UniformUnit(rng) < 0.25;
      steps.emplace_back(profile, UniformIndex(rng, profile ? 2 : questions.size()));
    }
    return steps;
  };
  auto run = [&](Engine& engine, const std::string& id, int s) {
    engine.SetProfile(id, profiles[s % 2]);
    for (const auto& [profile, k] : script(s)) {
      if (profile) engine.SetProfile(id, profiles[k]);
      else engine.Ask(id, questions[k]);
    }
  };

  Engine concurrent(Fresh("isolation"));
  std::vector<std::string> ids;
  for (int s = 0; s < kSessions; ++s) ids.push_back(concurrent.CreateSession("loan"));
  std::vector<std::thread> threads;
  for (int s = 0; s < kSessions; ++s) {
    threads.emplace_back([&, s] { run(concurrent, ids[s], s); });
  }
  // Extra pressure on one session from two threads at once.
  const auto shared = concurrent.CreateSession("loan");
  concurrent.SetProfile(shared, kProfile);
  for (int t = 0; t < 2; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 5; ++i) concurrent.Ask(shared, questions[i % 2]);
    });
  }
  for (auto& t : threads) t.join();
  CHECK(concurrent.History(shared).size() == 21);

  Engine sequential(Fresh("isolation_seq"));
  for (int s = 0; s < kSessions; ++s) {
    const auto id = sequential.CreateSession("loan");
    run(sequential, id, s);
    CHECK_MESSAGE(Texts(sequential.History(id)) == Texts(concurrent.History(ids[s])),
                  "session " << s);
  }
}

TEST_CASE("api status codes and shapes") {
  Engine engine(Fresh("api"));
  Api api(engine);
  auto call = [&](std::string method, std::string path, Json body = nullptr,
                  std::map<std::string, std::string> headers = {}) {
    return api.Handle({std::move(method), std::move(path),
                       body.is_null() ? "" : body.dump(), std::move(headers)});
  };
  auto created = call("POST", "/sessions", {{"dataset", "loan"}});
  REQUIRE(created.status == 201);
  CHECK(created.body["api_version"] == kApiVersion);
  const std::string id = created.body["session"]["id"];

  CHECK(call("POST", "/sessions", {{"dataset", "mars"}}).status == 404);
  CHECK(call("POST", "/sessions", {{"nothing", 1}}).status == 400);
  CHECK(api.Handle({"POST", "/sessions", "{not json", {}}).status == 400);
  CHECK(call("GET", "/sessions/" + id).status == 200);
  CHECK(call("GET", "/sessions/unknown").status == 404);
  CHECK(call("GET", "/sessions/" + id + "/history").body["turns"].empty());

  Json values = Json::object();
  for (const auto& [k, v] : kProfile) values[k] = v;
  values["Income"] = 40;  // numbers are accepted as well
  auto prof = call("POST", "/v1/sessions/" + id + "/profile", {{"values", values}});
  CHECK(prof.status == 200);
  CHECK(prof.body["turn"]["role"] == "agent");
  auto bad = call("POST", "/sessions/" + id + "/profile",
                  {{"values", {{"Income", "lots"}}}});
  CHECK(bad.status == 400);
  CHECK(bad.body["error"]["problems"].size() >= 2);
  CHECK(call("POST", "/sessions/" + id + "/profile",
             {{"values", values}, {"slot", "third"}}).status == 400);

  auto msg = call("POST", "/sessions/" + id + "/message",
                  {{"text", "Give me the reason for this prediction!"}});
  REQUIRE(msg.status == 200);
  CHECK(msg.body["answer"]["provenance"]["question_id"] == 47);
  CHECK(msg.body["answer"]["provenance"]["route"] == "FeatureImportance");
  CHECK(msg.body["answer"].contains("chart"));
  CHECK(msg.body["payload"]["kind"] == "attribution");
  CHECK(call("POST", "/sessions/" + id + "/message", Json::object()).status == 400);
  CHECK(call("GET", "/sessions/" + id + "/history").body["turns"].size() == 3);

  const auto datasets = call("GET", "/datasets");
  CHECK(datasets.status == 200);
  CHECK(datasets.body["datasets"].size() == 2);
  CHECK(call("GET", "/datasets/loan/schema").body["schema"]["features"].size() == 5);
  CHECK(call("GET", "/datasets/mars/schema").status == 404);

  CHECK(call("GET", "/admin/unmatched").status == 401);
  CHECK(call("GET", "/admin/unmatched", nullptr, {{"x-admin-token", "nope"}}).status == 401);
  CHECK(call("GET", "/admin/unmatched", nullptr,
             {{"authorization", "Bearer " + engine.config().admin_token}}).status == 200);
  CHECK(call("GET", "/nowhere").status == 404);
  CHECK(call("DELETE", "/sessions/" + id).status == 404);
}

TEST_CASE("http round trip") {
  Engine engine(Fresh("http"));
  HttpServer server(engine);
  const int port = server.Bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.Listen(); });
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(60, 0);
  auto created = client.Post("/sessions", R"({"dataset": "loan"})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = Json::parse(created->body)["session"]["id"];
  auto prof = client.Post(("/sessions/" + id + "/profile").c_str(),
                          R"({"values": {"Income": "40", "Age": "30", "Housing": "rent",
                              "Job": "clerk", "Debt": "70"}})",
                          "application/json");
  REQUIRE(prof);
  CHECK(prof->status == 200);
  auto msg = client.Post(("/sessions/" + id + "/message").c_str(),
                         R"({"text": "What is the scope of change permitted to still get the same prediction?"})",
                         "application/json");
  REQUIRE(msg);
  CHECK(msg->status == 200);
  CHECK(Json::parse(msg->body)["answer"]["provenance"]["route"] == "Anchor");
  auto unauth = client.Get("/admin/unmatched");
  REQUIRE(unauth);
  CHECK(unauth->status == 401);
  server.Stop();
  loop.join();
}

TEST_CASE("config validation") {
  const auto base = std::filesystem::path(CONVXAI_TEST_VAR);
  auto j = TestConfig("config").ToJson();
  CHECK_NOTHROW(ServiceConfig::FromJson(j, base));
  j["cv_folds"] = 1;
  j["port"] = -3;
  try {
    ServiceConfig::FromJson(j, base);
    FAIL("expected E_CONFIG");
  } catch (const ValidationError& e) {
    CHECK(e.code() == "E_CONFIG");
    CHECK(e.problems().size() >= 2);
  }
  CHECK_THROWS_AS(DatasetRegistry({{"a"}, {"a"}}), ValidationError);
}

TEST_CASE("scenario replay on the loan data") {
  Engine engine(Fresh("scenario"));
  Scenario s;
  s.dataset = "loan";
  s.profile = kProfile;
  s.turns = {{47, "Give me the reason for this prediction!"},
             {53, "Why is this profile predicted rejected instead of approved?"},
             {10, "How accurate is the model?"}};
  const auto r = RunScenario(engine, s);
  CHECK(r.turns[0].routed_ok);
  CHECK(r.turns[1].routed_ok);
  CHECK(!r.turns[2].routed_ok);
  CHECK(r.first_failure() == 3);
  CHECK(!r.ok());
  CHECK(r.Transcript().find("question 35, expected 10") != std::string::npos);

  Scenario empty;
  empty.dataset = "loan";
  const auto e = RunScenario(engine, empty);
  CHECK(e.ok());
  CHECK(e.turns.empty());
  CHECK(ListScenarios(testing::DataPath("scenarios")) == std::vector<std::string>{"adult"});
}

}  // TEST_SUITE

}  // namespace
