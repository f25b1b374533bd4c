#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "quasient/analysis.hpp"

namespace quasient::cli {

/// Ordered key/value metadata written at the top of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Serializes scan rows to CSV or JSON at `path` ("-" = stdout) with the
/// metadata header; returns the number of bytes written. CSV columns, in
/// this order:
///   model,n,L,boundary,modes,reflection,parity,momentum,
///   S_ground,S_excited,dS,dS_over_log2,k_class,is_regular
/// Floats carry 12 significant digits; lists are semicolon-separated.
std::size_t emit(const std::vector<analysis::ScanRow>& rows, const std::string& format,
                 const std::string& path, const Metadata& metadata);

/// Parses rows back from the JSON produced by emit (round-trip support).
std::vector<analysis::ScanRow> parse_rows_json(const std::string& text);

std::string format_float(double v);  // 12 significant digits

/// Runs one subcommand; args exclude the program name. Returns the exit
/// code: 0 success, 2 config error, 3 numerical/physicality error,
/// 4 size-cap error.
int run(const std::vector<std::string>& args);

}  // namespace quasient::cli
