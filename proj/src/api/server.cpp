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

#include "connchain/api/server.hpp"

#include <functional>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "connchain/api/codec.hpp"
#include "connchain/escrow/profile.hpp"

namespace connchain::api {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(2), kJson);
}

void send_error(httplib::Response& res, const ApiError& error) { send_json(res, error.http_status, to_json(error)); }

nlohmann::ordered_json parse_body(const httplib::Request& req) {
    try {
        return nlohmann::ordered_json::parse(req.body);
    } catch (const nlohmann::ordered_json::parse_error&) {
        throw Error(ErrorCode::kBadRequest, "request body is not valid JSON");
    }
}

// Maps engine/ledger errors onto ApiError bodies; nothing internal leaks out.
httplib::Server::Handler guarded(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    return [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const Error& e) {
            send_error(res, {http_status_for(e.code()), std::string(to_string(e.code())), e.what()});
        } catch (const std::exception& e) {
            spdlog::error("{} {} failed: {}", req.method, req.path, e.what());
            send_error(res, {500, "internal", "internal error"});
        }
    };
}

}  // namespace

int http_status_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kUnknownRule:
        case ErrorCode::kUnknownId:
        case ErrorCode::kUnknownChain:
            return 404;
        case ErrorCode::kDuplicateRule:
        case ErrorCode::kDuplicateChainId:
            return 409;
        case ErrorCode::kInvalidAmount:
        case ErrorCode::kInvalidConfig:
        case ErrorCode::kBadRequest:
        case ErrorCode::kInvalidScenario:
            return 400;
        case ErrorCode::kUnverifiedEvent:
            return 500;
    }
    return 500;
}

nlohmann::ordered_json to_json(const ApiError& error) {
    nlohmann::ordered_json j;
    j["httpStatus"] = error.http_status;
    j["code"] = error.code;
    j["message"] = error.message;
    return j;
}

ApiServer::ApiServer(Runtime& runtime, bool test_mode)
    : runtime_(runtime), test_mode_(test_mode), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::install_routes() {
    auto& engine = runtime_.engine();
    auto& ledger = runtime_.ledger();

    server_->Post("/chains", guarded([this](const httplib::Request& req, httplib::Response& res) {
                      auto config = chain_config_from_json(parse_body(req));
                      runtime_.add_chain(config);
                      send_json(res, 201, to_json(config));
                  }));

    server_->Post("/profiles", guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                      auto profile = escrow::profile_from_json(parse_body(req));
                      engine.register_profile(profile);
                      send_json(res, 201, escrow::to_json(profile));
                  }));

    server_->Get("/profiles", guarded([&engine](const httplib::Request&, httplib::Response& res) {
                     nlohmann::ordered_json list = nlohmann::ordered_json::array();
                     for (const auto& p : engine.list_profiles()) list.push_back(escrow::to_json(p));
                     send_json(res, 200, list);
                 }));

    server_->Get("/profiles/:ruleID", guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                     send_json(res, 200, escrow::to_json(engine.get_profile(req.path_params.at("ruleID"))));
                 }));

    server_->Post("/exchanges", guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                      auto request = escrow::request_from_json(parse_body(req));
                      std::string id = engine.start_exchange(request);
                      send_json(res, 202, {{"id", id}});
                  }));

    server_->Get("/exchanges/:id", guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                     send_json(res, 200, escrow::to_json(engine.get_record(req.path_params.at("id"))));
                 }));

    server_->Get("/chains/:chainID/accounts/:accountID",
                 guarded([&ledger](const httplib::Request& req, httplib::Response& res) {
                     auto balance = ledger.get_balance(req.path_params.at("chainID"), req.path_params.at("accountID"));
                     send_json(res, 200, {{"balance", balance}});
                 }));

    if (test_mode_) {
        server_->Post("/chains/:chainID/faults", guarded([&ledger](const httplib::Request& req, httplib::Response& res) {
                          const auto& chain = req.path_params.at("chainID");
                          if (!ledger.has_chain(chain)) throw Error(ErrorCode::kUnknownChain, "unknown chain: " + chain);
                          ledger.inject_fault(fault_from_json(chain, parse_body(req)));
                          res.status = 204;
                      }));
    }

    server_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
        if (res.status == 404) {
            send_error(res, {404, "not-found", "no route for " + req.method + " " + req.path});
        } else {
            send_error(res, {res.status, "bad-request", "request rejected by the HTTP layer"});
        }
        return httplib::Server::HandlerResponse::Handled;
    });
}

bool ApiServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int ApiServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool ApiServer::serve() { return server_->listen_after_bind(); }

void ApiServer::stop() {
    if (server_->is_running()) server_->stop();
}

void ApiServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace connchain::api
