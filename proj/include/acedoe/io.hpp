#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "acedoe/ace.hpp"
#include "acedoe/design.hpp"
#include "acedoe/zoo.hpp"

namespace acedoe::io {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Header x1..xq, one row per run.
std::string design_csv(const Design& design);
Design parse_design_csv(std::string_view text, const std::vector<Interval>& bounds);
Design read_design_csv(const std::filesystem::path& path, const std::vector<Interval>& bounds);

/// restart,sweep,i,j,proposed,p_star,accepted,loss_estimate (i, j 1-based)
std::string trace_csv(const std::vector<TraceRecord>& trace);

/// design,loss_kind,replicate,estimate (replicate 1-based)
std::string estimates_csv(const std::vector<EvalSummary>& summaries);

/// Writes through a temporary file in the same directory and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

}  // namespace acedoe::io
