#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace lvc {

using Report = nlohmann::json;

/// Compact UTF-8 JSON, keys sorted, doubles in shortest round-trip form.
std::string serialize_report(const Report& report);

void write_report(const std::filesystem::path& path, const Report& report);

}  // namespace lvc
