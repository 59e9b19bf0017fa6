#include "cuspext/io.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "cuspext/errors.hpp"

namespace cuspext {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_cell(const std::string& cell, std::size_t row, const char* column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc{} || ptr != last)
    throw ConfigError("row " + std::to_string(row) + ": cannot parse " + column + " '" + cell +
                      "'");
  return v;
}

}  // namespace

ProfileTable read_profile_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("profile csv: empty input");
  std::string header = trim(line);
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
  if (header != "t,psi") throw ConfigError("profile csv: header must be 't,psi', got '" + header + "'");
  ProfileTable table;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string body = trim(line);
    if (body.empty()) continue;
    ++row;
    const auto comma = body.find(',');
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos)
      throw ConfigError("row " + std::to_string(row) + ": expected two columns");
    table.t.push_back(parse_cell(trim(body.substr(0, comma)), row, "t"));
    table.psi.push_back(parse_cell(trim(body.substr(comma + 1)), row, "psi"));
  }
  if (table.t.empty()) throw ConfigError("profile csv: no data rows");
  validate_table(table.t, table.psi, 1);
  return table;
}

CuspProfile read_profile_csv(std::istream& in, ProfileKind kind) {
  ProfileTable table = read_profile_table(in);
  switch (kind) {
    case ProfileKind::Step: return CuspProfile::step(std::move(table.t), std::move(table.psi));
    case ProfileKind::Tabulated:
      return CuspProfile::tabulated(std::move(table.t), std::move(table.psi));
    default: throw ArgumentError("read_profile_csv: kind must be step or tabulated");
  }
}

CuspProfile load_profile_csv(const std::filesystem::path& path, ProfileKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("profile csv: cannot open '" + path.string() + "'");
  return read_profile_csv(in, kind);
}

void write_profile_csv(std::ostream& out, std::span<const double> t, std::span<const double> psi) {
  if (t.size() != psi.size()) throw ArgumentError("write_profile_csv: column lengths differ");
  out.precision(17);
  out << "t,psi\n";
  for (std::size_t i = 0; i < t.size(); ++i) out << t[i] << ',' << psi[i] << '\n';
}

}  // namespace cuspext
