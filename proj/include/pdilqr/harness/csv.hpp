#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "pdilqr/ocp.hpp"

namespace pdilqr::harness {

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// Builds one record; values are appended in column order.
class CsvRow {
 public:
  CsvRow& operator<<(double v);
  CsvRow& operator<<(int v);
  CsvRow& operator<<(long v);
  CsvRow& operator<<(long long v);
  CsvRow& operator<<(std::uint64_t v);
  CsvRow& operator<<(bool v);
  CsvRow& operator<<(const std::string& v);
  CsvRow& operator<<(const char* v);
  CsvRow& operator<<(const Vector& v);  // one column per entry

  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

/// Append-only CSV file. Rows are written under a lock, so concurrent
/// writers never interleave within a record.
class CsvWriter {
 public:
  /// Throws std::runtime_error if the file cannot be created.
  CsvWriter(const std::string& path, std::vector<std::string> header);

  /// Throws std::invalid_argument on a column-count mismatch.
  void write(const CsvRow& row);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::mutex mutex_;
};

/// Column names prefix0 .. prefix{n-1}.
std::vector<std::string> indexed_columns(const std::string& prefix, int n);

/// FNV-1a digest of every entry of x, u and lambda, as 16 hex digits.
std::string trajectory_digest(const Trajectory& traj);

}  // namespace pdilqr::harness
