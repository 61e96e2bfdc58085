#include "percospec/io.hpp"

#include <cmath>
#include <cstdio>

#include "percospec/errors.hpp"

namespace percospec {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  // %.17g always round-trips; prefer the shorter %.15g when it does.
  std::snprintf(buf, sizeof buf, "%.15g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ResourceError("cannot open output file: " + path.string());
  return os;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto os = open_output(path);
  os << text;
  if (!os) throw ResourceError("failed writing: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace percospec
