#include <fmt/format.h>
#include <fmt/ranges.h>

#include <fstream>
#include <system_error>

#include "graphfix/cli.hpp"
#include "graphfix/errors.hpp"

namespace graphfix::cli {

using nlohmann::json;

json RunManifest::to_json() const {
  return json{{"subcommand", subcommand}, {"source", source},         {"parameters", parameters},
              {"out_dir", out_dir.string()}, {"seed", seed}, {"format", format}};
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

namespace {

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw InputError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InputError(fmt::format("output directory '{}' is not usable: {}", dir.string(), ec.message()));
}

std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                  const std::string& format) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : table.rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < table.columns.size() && c < row.size(); ++c) obj[table.columns[c]] = row[c];
      rows.push_back(std::move(obj));
    }
    const auto path = dir / (stem + ".json");
    write_file(path, rows.dump(2) + "\n");
    return path;
  }
  if (format != "csv") throw InputError(fmt::format("unknown output format '{}'", format));
  std::string text = fmt::format("{}\n", fmt::join(table.columns, ","));
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) text += ',';
      text += csv_cell(row[c]);
    }
    text += '\n';
  }
  const auto path = dir / (stem + ".csv");
  write_file(path, text);
  return path;
}

std::filesystem::path write_report(const std::filesystem::path& dir, const std::string& stem, const json& report) {
  const auto path = dir / (stem + ".json");
  write_file(path, report.dump(2) + "\n");
  return path;
}

}  // namespace graphfix::cli
