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

#ifndef CONVXAI_SERVICE_API_H_
#define CONVXAI_SERVICE_API_H_

#include <map>
#include <memory>
#include <string>

#include "convxai/io.h"
#include "convxai/service/engine.h"

namespace convxai::service {

inline constexpr int kApiVersion = 1;

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  // Lower-case header names.
  std::map<std::string, std::string> headers;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

// Transport-independent request handling. Errors map to statuses: 400 for
// bad input, 401 for the admin token, 404 for unknown sessions, datasets
// and paths, 500 otherwise. Error bodies are {"error": {code, message[,
// problems]}}.
class Api {
 public:
  explicit Api(Engine& engine) : engine_(engine) {}
  ApiResponse Handle(const ApiRequest& request) const;

 private:
  Engine& engine_;
};

// HTTP binding of Api.
class HttpServer {
 public:
  explicit HttpServer(Engine& engine);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port; throws IoError.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace convxai::service

#endif  // CONVXAI_SERVICE_API_H_
