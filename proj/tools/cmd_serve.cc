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

#include <csignal>
#include <iostream>

#include "common.h"
#include "convxai/service/api.h"
#include "convxai/service/engine.h"

namespace convxai::cli {
namespace {

service::HttpServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

struct ServeOptions {
  CommonOptions common;
  std::string host;
  int port = -1;
};

int RunServe(const ServeOptions& o) {
  auto config = LoadConfig(o.common);
  if (!o.host.empty()) config.host = o.host;
  if (o.port >= 0) config.port = o.port;
  service::Engine engine(config);
  service::HttpServer server(engine);
  const int port = server.Bind(config.host, config.port);
  std::cout << "listening on " << config.host << ":" << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  server.Listen();
  g_server = nullptr;
  return kOk;
}

}  // namespace

void RegisterServe(CLI::App& app, int& code) {
  auto o = std::make_shared<ServeOptions>();
  auto* cmd = app.add_subcommand("serve", "Run the HTTP service");
  AddCommonOptions(cmd, o->common);
  cmd->add_option("--host", o->host, "Listen address (default from config)");
  cmd->add_option("--port", o->port, "Port, 0 for any free port");
  cmd->callback([o, &code] { code = RunServe(*o); });
}

}  // namespace convxai::cli
