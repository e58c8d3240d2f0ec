#include "pdilqr/harness/csv.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>

namespace pdilqr::harness {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvRow& CsvRow::operator<<(double v) {
  fields_.push_back(format_double(v));
  return *this;
}
CsvRow& CsvRow::operator<<(int v) {
  fields_.push_back(std::to_string(v));
  return *this;
}
CsvRow& CsvRow::operator<<(long v) {
  fields_.push_back(std::to_string(v));
  return *this;
}
CsvRow& CsvRow::operator<<(long long v) {
  fields_.push_back(std::to_string(v));
  return *this;
}
CsvRow& CsvRow::operator<<(std::uint64_t v) {
  fields_.push_back(std::to_string(v));
  return *this;
}
CsvRow& CsvRow::operator<<(bool v) {
  fields_.push_back(v ? "1" : "0");
  return *this;
}
CsvRow& CsvRow::operator<<(const std::string& v) {
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) {
      if (c == '"') q += '"';
      q += c;
    }
    fields_.push_back(q + "\"");
  } else {
    fields_.push_back(v);
  }
  return *this;
}
CsvRow& CsvRow::operator<<(const char* v) { return *this << std::string(v); }
CsvRow& CsvRow::operator<<(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) *this << v(i);
  return *this;
}

namespace {

const std::string& with_parent_dirs(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);  // failure surfaces when opening
  return path;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(with_parent_dirs(path), std::ios::out | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot create '" + path + "'");
  CsvRow row;
  for (const auto& h : header) row << h;
  write(row);
}

void CsvWriter::write(const CsvRow& row) {
  if (row.fields().size() != columns_) {
    throw std::invalid_argument("csv: row has " + std::to_string(row.fields().size()) + " fields, header has " +
                                std::to_string(columns_));
  }
  std::string line;
  for (std::size_t i = 0; i < row.fields().size(); ++i) {
    if (i) line += ',';
    line += row.fields()[i];
  }
  line += '\n';
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << line;
  out_.flush();
}

std::vector<std::string> indexed_columns(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::string trajectory_digest(const Trajectory& traj) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      unsigned char bytes[sizeof(double)];
      const double d = v(i);
      std::memcpy(bytes, &d, sizeof d);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  };
  for (const auto& x : traj.x) mix(x);
  for (const auto& u : traj.u) mix(u);
  for (const auto& l : traj.lambda) mix(l);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pdilqr::harness
