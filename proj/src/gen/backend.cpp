#include "tomi/gen/backend.h"

#include <cstdlib>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "tomi/util/file_io.h"

namespace tomi {

using nlohmann::json;

// ---------------------------------------------------------------------------
// ScriptedBackend
// ---------------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

std::unique_ptr<ScriptedBackend> ScriptedBackend::fromFile(const std::string& path) {
  auto text = readTextFile(path);
  if (!text) return nullptr;

  std::vector<std::string> responses;
  std::string current;
  std::istringstream lines(*text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "---") {
      responses.push_back(current);
      current.clear();
    } else {
      current += line;
      current += "\n";
    }
  }
  if (!current.empty()) responses.push_back(current);
  return std::make_unique<ScriptedBackend>(std::move(responses));
}

ChatResult ScriptedBackend::send(const std::vector<ChatMessage>& messages) {
  (void)messages;
  ChatResult result;
  if (next_ >= responses_.size()) {
    result.error = "scripted backend exhausted after " +
                   std::to_string(responses_.size()) + " responses";
    return result;
  }
  result.ok = true;
  result.text = responses_[next_++];
  return result;
}

// ---------------------------------------------------------------------------
// HttpBackend
// ---------------------------------------------------------------------------

HttpBackend::HttpBackend(std::string url, std::string model, std::string api_key)
    : url_(std::move(url)), model_(std::move(model)), api_key_(std::move(api_key)) {}

std::unique_ptr<HttpBackend> HttpBackend::fromEnvironment() {
  const char* url = std::getenv("TOMI_API_URL");
  if (url == nullptr || *url == '\0') return nullptr;
  const char* key = std::getenv("TOMI_API_KEY");
  const char* model = std::getenv("TOMI_MODEL");
  return std::make_unique<HttpBackend>(url, model != nullptr ? model : "gpt-4o",
                                       key != nullptr ? key : "");
}

ChatResult HttpBackend::send(const std::vector<ChatMessage>& messages) {
  ChatResult result;

  // Split scheme://host[:port] from the request path.
  const size_t scheme_end = url_.find("://");
  if (scheme_end == std::string::npos) {
    result.error = "backend url must carry a scheme: " + url_;
    return result;
  }
  const size_t path_start = url_.find('/', scheme_end + 3);
  const std::string base =
      path_start == std::string::npos ? url_ : url_.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/v1/chat/completions"
                                      : url_.substr(path_start);

  json body;
  body["model"] = model_;
  body["messages"] = json::array();
  for (const ChatMessage& message : messages) {
    body["messages"].push_back({{"role", message.role}, {"content", message.content}});
  }

  httplib::Client client(base);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto response = client.Post(path, headers, body.dump(), "application/json");
  if (!response) {
    result.error = "transport failure contacting " + url_;
    return result;
  }
  if (response->status != 200) {
    result.error = "backend returned status " + std::to_string(response->status) +
                   ": " + response->body;
    return result;
  }

  try {
    json parsed = json::parse(response->body);
    result.text = parsed.at("choices").at(0).at("message").at("content")
                      .get<std::string>();
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = std::string("malformed backend response: ") + e.what();
  }
  return result;
}

}  // namespace tomi
