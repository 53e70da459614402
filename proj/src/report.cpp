#include "lvc/report.hpp"

#include <fstream>

#include "lvc/error.hpp"

namespace lvc {

// nlohmann::json objects are std::map backed, so keys come out sorted.
std::string serialize_report(const Report& report) { return report.dump(); }

void write_report(const std::filesystem::path& path, const Report& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << serialize_report(report);
  if (!out) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

}  // namespace lvc
