/*
   Copyright 2026 The ConnectionChain Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "connchain/api/runtime.hpp"
#include "connchain/common/error.hpp"

namespace httplib {
class Server;
}

namespace connchain::api {

struct ApiError {
    int http_status;
    std::string code;
    std::string message;
};

int http_status_for(ErrorCode code) noexcept;
nlohmann::ordered_json to_json(const ApiError& error);

// HTTP/1.1 JSON control plane over a Runtime.
//
//   POST /chains                                  201 | 400 | 409
//   POST /profiles, GET /profiles, GET /profiles/{ruleID}
//   POST /exchanges                               202 {"id": ...}
//   GET  /exchanges/{id}                          200 record
//   GET  /chains/{chainID}/accounts/{accountID}   200 {"balance": n}
//   POST /chains/{chainID}/faults                 204, test mode only
class ApiServer {
  public:
    ApiServer(Runtime& runtime, bool test_mode);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds and serves on the calling thread until stop().
    bool listen(const std::string& host, int port);
    // Binds to an ephemeral port; call serve() afterwards.
    int bind_any_port(const std::string& host);
    bool serve();
    void stop();
    void wait_until_ready() const;

  private:
    void install_routes();

    Runtime& runtime_;
    const bool test_mode_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace connchain::api
