#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwave/model.hpp"

namespace dwave {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_g17(double v);

void ensure_dir(const std::string& path);

// Field dump: header "x,value", one node per row.
void write_field_csv(const std::string& path, const ScalarField& f);

// Time-series dump: header "t,<name>", one checkpoint per row.
void write_series_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& t, const std::vector<double>& values);

// Multi-column table with an explicit header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

void write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// FNV-1a, used to fingerprint canonical config text.
std::uint64_t fnv1a(const std::string& s);

std::string hex64(std::uint64_t v);

}  // namespace dwave
