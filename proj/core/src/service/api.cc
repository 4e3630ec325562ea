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

#include "convxai/service/api.h"

#include <regex>

#include "convxai/error.h"
#include "httplib.h"

namespace convxai::service {
namespace {

ApiResponse ErrorResponse(int status, const std::string& code,
                          const std::string& message,
                          const std::vector<std::string>& problems = {}) {
  Json e{{"code", code}, {"message", message}};
  if (!problems.empty()) e["problems"] = problems;
  return {status, Json{{"api_version", kApiVersion}, {"error", e}}};
}

ApiResponse Ok(Json body, int status = 200) {
  body["api_version"] = kApiVersion;
  return {status, std::move(body)};
}

Json ParseBody(const std::string& body) {
  if (body.empty()) return Json::object();
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ValidationError("E_BAD_REQUEST", {"body must be a JSON object"});
  }
  return j;
}

Json TurnsJson(const std::vector<Turn>& turns) {
  Json out = Json::array();
  for (const auto& t : turns) out.push_back(t.ToJson());
  return out;
}

std::string AdminToken(const ApiRequest& r) {
  if (auto it = r.headers.find("x-admin-token"); it != r.headers.end()) {
    return it->second;
  }
  if (auto it = r.headers.find("authorization"); it != r.headers.end()) {
    const std::string prefix = "Bearer ";
    if (it->second.rfind(prefix, 0) == 0) return it->second.substr(prefix.size());
  }
  return "";
}

}  // namespace

ApiResponse Api::Handle(const ApiRequest& request) const {
  static const std::regex kSession(R"(^/sessions/([A-Za-z0-9_-]+)(/[a-z]+)?$)");
  static const std::regex kSchema(R"(^/datasets/([A-Za-z0-9_.-]+)/schema$)");
  std::string path = request.path;
  if (path.rfind("/v1/", 0) == 0) path = path.substr(3);
  if (path.size() > 1 && path.back() == '/') path.pop_back();
  const std::string& m = request.method;
  std::smatch match;
  try {
    if (path == "/sessions" && m == "POST") {
      const Json body = ParseBody(request.body);
      if (!body.contains("dataset") || !body["dataset"].is_string()) {
        throw ValidationError("E_BAD_REQUEST", {"missing dataset"});
      }
      const std::string id = engine_.CreateSession(
          body["dataset"].get<std::string>(), body.value("model", Json::object()));
      return Ok({{"session", engine_.SessionInfo(id)}}, 201);
    }
    if (std::regex_match(path, match, kSession)) {
      const std::string id = match[1];
      const std::string tail = match[2];
      if (tail.empty() && m == "GET") return Ok({{"session", engine_.SessionInfo(id)}});
      if (tail == "/history" && m == "GET") {
        return Ok({{"turns", TurnsJson(engine_.History(id))}});
      }
      if (tail == "/profile" && m == "POST") {
        const Json body = ParseBody(request.body);
        if (!body.contains("values") || !body["values"].is_object()) {
          throw ValidationError("E_BAD_REQUEST", {"missing values object"});
        }
        tabular::NamedValues values;
        for (const auto& [k, v] : body["values"].items()) {
          values.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
        }
        const std::string slot = body.value("slot", std::string("current"));
        if (slot != "current" && slot != "second") {
          throw ValidationError("E_BAD_REQUEST", {"slot must be current or second"});
        }
        Turn t = engine_.SetProfile(id, values, slot == "second");
        return Ok({{"turn", t.ToJson()}});
      }
      if (tail == "/message" && m == "POST") {
        const Json body = ParseBody(request.body);
        if (!body.contains("text") || !body["text"].is_string()) {
          throw ValidationError("E_BAD_REQUEST", {"missing text"});
        }
        auto r = engine_.Ask(id, body["text"].get<std::string>());
        Json answer = r.agent.answer;
        answer["provenance"] = r.agent.provenance;
        Json out{{"user", r.user.ToJson()}, {"agent", r.agent.ToJson()},
                 {"answer", answer}};
        if (!r.payload.is_null()) out["payload"] = r.payload;
        return Ok(out);
      }
      return ErrorResponse(404, "E_NOT_FOUND", "no such endpoint");
    }
    if (path == "/datasets" && m == "GET") {
      return Ok({{"datasets", engine_.ListDatasets()}});
    }
    if (std::regex_match(path, match, kSchema) && m == "GET") {
      return Ok({{"schema", engine_.DatasetSchema(match[1])}});
    }
    if (path == "/admin/unmatched" && m == "GET") {
      return Ok({{"records", engine_.Unmatched(AdminToken(request))}});
    }
    return ErrorResponse(404, "E_NOT_FOUND", "no such endpoint");
  } catch (const ValidationError& e) {
    return ErrorResponse(400, e.code(), e.what(), e.problems());
  } catch (const NotFoundError& e) {
    return ErrorResponse(404, e.code(), e.what());
  } catch (const ParseError& e) {
    return ErrorResponse(400, e.code(), e.what());
  } catch (const PreconditionError& e) {
    return ErrorResponse(400, e.code(), e.what());
  } catch (const Error& e) {
    return ErrorResponse(e.code() == "E_AUTH" ? 401 : 500, e.code(), e.what());
  } catch (const std::exception& e) {
    return ErrorResponse(500, "E_INTERNAL", e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(Engine& engine) : api(engine) {}
  Api api;
  httplib::Server server;
};

HttpServer::HttpServer(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, req.body, {}};
    for (const auto& [k, v] : req.headers) {
      std::string key = k;
      for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      r.headers[key] = v;
    }
    const ApiResponse out = impl_->api.Handle(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace convxai::service
