#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace percospec {

// Shortest round-trip decimal representation; locale-free, so outputs are
// byte-identical across runs and thread counts.
std::string fmt_double(double v);

// Opens for writing, creating parent directories. Throws on failure.
std::ofstream open_output(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace percospec
