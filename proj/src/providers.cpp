#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "janaka/error.hpp"
#include "janaka/llm.hpp"

namespace janaka {

MockProvider::MockProvider(std::vector<std::string> responses, std::string id)
    : responses_(std::move(responses)), id_(std::move(id)) {
  if (responses_.empty()) throw Error(ErrorCode::InvalidArgument, "mock provider needs at least one response");
}

std::unique_ptr<MockProvider> MockProvider::from_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, "fixture directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::string> responses;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + f.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    responses.push_back(ss.str());
  }
  if (responses.empty()) throw Error(ErrorCode::Io, "fixture directory is empty: " + dir);
  return std::make_unique<MockProvider>(std::move(responses), "mock:" + fs::path(dir).filename().string());
}

std::string MockProvider::complete(const std::vector<ChatMessage>& messages) {
  std::size_t i = calls_.fetch_add(1);
  {
    std::lock_guard<std::mutex> lock(mu_);
    last_ = messages;
  }
  return responses_[i % responses_.size()];
}

std::vector<ChatMessage> MockProvider::last_messages() const {
  std::lock_guard<std::mutex> lock(mu_);
  return last_;
}

HttpChatProvider::HttpChatProvider(HttpConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.endpoint.empty()) throw Error(ErrorCode::InvalidArgument, "HTTP provider needs an endpoint");
  if (cfg_.model.empty()) throw Error(ErrorCode::InvalidArgument, "HTTP provider needs a model name");
}

std::string HttpChatProvider::id() const { return "http:" + cfg_.model; }

std::string HttpChatProvider::complete(const std::vector<ChatMessage>& messages) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(cfg_.endpoint, m, url_re))
    throw Error(ErrorCode::InvalidArgument, "malformed endpoint URL: " + cfg_.endpoint);
  const std::string base = m[1].str();
  const std::string path = m[2].matched ? m[2].str() : "/";

  const char* key = std::getenv(cfg_.api_key_env.c_str());
  if (!key || !*key) throw Error(ErrorCode::AuthMissing, cfg_.api_key_env + " is not set");

  nlohmann::json body;
  body["model"] = cfg_.model;
  body["temperature"] = cfg_.temperature;
  body["messages"] = nlohmann::json::array();
  for (const auto& msg : messages) body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});

  httplib::Client cli(base);
  auto secs = std::chrono::duration<double>(cfg_.timeout_s);
  cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
  cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
  cli.set_bearer_token_auth(key);
  auto res = cli.Post(path, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::ProviderUnreachable, "request failed: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403)
    throw Error(ErrorCode::AuthMissing, "provider rejected the API key (HTTP " + std::to_string(res->status) + ")");
  if (res->status == 429) {
    double wait = 1.0;
    if (res->has_header("Retry-After")) {
      try {
        wait = std::stod(res->get_header_value("Retry-After"));
      } catch (const std::exception&) {
      }
    }
    throw RateLimitedError("provider rate limit hit", wait);
  }
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorCode::ProviderUnreachable, "provider returned HTTP " + std::to_string(res->status));
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ProviderUnreachable, std::string("malformed provider response: ") + e.what());
  }
}

}  // namespace janaka
