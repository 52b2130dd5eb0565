#include "polysieve/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polysieve/errors.hpp"

namespace polysieve {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) {
    token.remove_prefix(1);
  }
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) {
    token.remove_suffix(1);
  }
  if (token == "inf" || token == "+inf") return HUGE_VAL;
  if (token == "-inf") return -HUGE_VAL;
  double v = 0;
  const char* first = token.data();
  if (!token.empty() && token.front() == '+') ++first;
  const auto res = std::from_chars(first, token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) {
    throw InputError("not a number: '" + std::string(token) + "'");
  }
  return v;
}

std::string csv_row(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    std::string_view field = line.substr(start, pos == std::string_view::npos ? line.npos : pos - start);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
      field.remove_prefix(1);
    }
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
      field.remove_suffix(1);
    }
    out.emplace_back(field);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> read_observations_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<double> data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    try {
      data.push_back(parse_double(fields[0]));
    } catch (const InputError&) {
      if (lineno == 1 && data.empty()) continue;  // header
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": bad observation '" +
                       fields[0] + "'");
    }
  }
  return data;
}

void write_observations_csv(const std::filesystem::path& path, std::span<const double> data) {
  std::string out = "y\n";
  for (double v : data) {
    out += format_double(v);
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace polysieve
