#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tomi {

std::optional<std::string> readTextFile(const std::string& path);
std::optional<std::vector<uint8_t>> readBinaryFile(const std::string& path);

/// Returns false on any I/O failure.
bool writeTextFile(const std::string& path, const std::string& content);
bool writeBinaryFile(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace tomi
