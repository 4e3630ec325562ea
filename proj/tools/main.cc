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

// convxai: chat, evaluation, explanation and service entry points.

#include <iostream>

#include "common.h"
#include "convxai/error.h"

int main(int argc, char** argv) {
  using namespace convxai::cli;
  CLI::App app{"Conversational explanations for tabular classifiers"};
  app.require_subcommand(1);
  int code = kOk;
  RegisterChat(app, code);
  RegisterEval(app, code);
  RegisterExplain(app, code);
  RegisterScenario(app, code);
  RegisterServe(app, code);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUserError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const convxai::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const convxai::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    const std::string& c = e.code();
    const bool user = c == "E_PARSE" || c == "E_NOT_FOUND" || c == "E_IO" ||
                      c == "E_PRECONDITION" || c == "E_CONFIG";
    return user ? kUserError : kInternalError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return code;
}
