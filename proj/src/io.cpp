#include "acedoe/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "acedoe/error.hpp"

namespace acedoe::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string design_csv(const Design& design) {
  std::string out;
  for (std::size_t j = 0; j < design.vars(); ++j) out += (j ? ",x" : "x") + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < design.runs(); ++i) {
    for (std::size_t j = 0; j < design.vars(); ++j) {
      if (j) out += ',';
      out += format_double(design(i, j));
    }
    out += '\n';
  }
  return out;
}

Design parse_design_csv(std::string_view text, const std::vector<Interval>& bounds) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (width == 0) {
      width = cells.size();
      for (std::size_t j = 0; j < width; ++j)
        if (cells[j] != "x" + std::to_string(j + 1))
          throw DomainError("design csv line 1: expected header x1..x" + std::to_string(width));
      continue;
    }
    if (cells.size() != width)
      throw DomainError("design csv line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " values");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw DomainError("design csv line " + std::to_string(line_no) + ": cannot parse '" + c + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("design csv has no rows");
  if (width != bounds.size())
    throw DomainError("design csv has " + std::to_string(width) + " columns, model has " + std::to_string(bounds.size()));
  PointMatrix pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return Design(std::move(pts), bounds);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Design read_design_csv(const std::filesystem::path& path, const std::vector<Interval>& bounds) {
  return parse_design_csv(read_file(path), bounds);
}

std::string trace_csv(const std::vector<TraceRecord>& trace) {
  std::string out = "restart,sweep,i,j,proposed,p_star,accepted,loss_estimate\n";
  for (const auto& r : trace) {
    out += std::to_string(r.restart) + ',' + std::to_string(r.sweep) + ',' + std::to_string(r.row + 1) + ',' +
           std::to_string(r.var + 1) + ',' + format_double(r.proposed) + ',' + format_double(r.p_star) + ',' +
           (r.accepted ? "1" : "0") + ',' + format_double(r.loss_estimate) + '\n';
  }
  return out;
}

std::string estimates_csv(const std::vector<EvalSummary>& summaries) {
  std::string out = "design,loss_kind,replicate,estimate\n";
  for (const auto& s : summaries)
    for (std::size_t r = 0; r < s.estimates.size(); ++r)
      out += s.design + ',' + std::string(to_string(s.kind)) + ',' + std::to_string(r + 1) + ',' +
             format_double(s.estimates[r]) + '\n';
  return out;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  const auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DomainError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("sha256", "digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

}  // namespace acedoe::io
