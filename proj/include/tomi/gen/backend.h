// Chat-completion backend abstraction: an HTTP client speaking the common
// chat-completion wire format, plus a scripted mock for tests.

#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tomi {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatResult {
  bool ok = false;
  std::string error;
  std::string text;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResult send(const std::vector<ChatMessage>& messages) = 0;
};

/// Replays canned responses in order; further calls fail. Transcript files
/// hold responses separated by lines containing only "---".
class ScriptedBackend : public ChatBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> responses);
  static std::unique_ptr<ScriptedBackend> fromFile(const std::string& path);

  ChatResult send(const std::vector<ChatMessage>& messages) override;
  size_t callCount() const { return next_; }

 private:
  std::vector<std::string> responses_;
  size_t next_ = 0;
};

/// POSTs {model, messages} to url and returns choices[0].message.content.
/// url carries scheme, host, port, and path, e.g.
/// "http://localhost:8080/v1/chat/completions".
class HttpBackend : public ChatBackend {
 public:
  HttpBackend(std::string url, std::string model, std::string api_key);

  ChatResult send(const std::vector<ChatMessage>& messages) override;

  /// Reads TOMI_API_URL / TOMI_API_KEY / TOMI_MODEL from the environment;
  /// nullptr when the URL is unset.
  static std::unique_ptr<HttpBackend> fromEnvironment();

 private:
  std::string url_;
  std::string model_;
  std::string api_key_;
};

}  // namespace tomi
