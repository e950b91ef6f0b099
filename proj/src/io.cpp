#include "dwave/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dwave {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

void write_field_csv(const std::string& path, const ScalarField& f) {
  std::ostringstream os;
  os << "x,value\n";
  for (int j = 0; j < f.grid.n; ++j)
    os << format_g17(f.grid.x(j)) << ',' << format_g17(f.v[j]) << '\n';
  write_text(path, os.str());
}

void write_series_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& t, const std::vector<double>& values) {
  if (t.size() != values.size())
    throw std::invalid_argument("write_series_csv: length mismatch");
  std::ostringstream os;
  os << "t," << name << '\n';
  for (size_t k = 0; k < t.size(); ++k)
    os << format_g17(t[k]) << ',' << format_g17(values[k]) << '\n';
  write_text(path, os.str());
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("write_table_csv: header/column mismatch");
  std::ostringstream os;
  for (size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns)
    if (col.size() != rows) throw std::invalid_argument("write_table_csv: ragged columns");
  for (size_t rw = 0; rw < rows; ++rw) {
    for (size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << format_g17(columns[c][rw]);
    os << '\n';
  }
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace dwave
