#pragma once

#include <string>
#include <vector>

namespace dephasim {

/// Locale-independent "%.12g" formatting; reruns with identical inputs
/// produce byte-identical files.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& fields);
  void row_numeric(const std::vector<double>& values);

 private:
  struct Impl;
  Impl* impl_;
  std::size_t n_columns_;
};

}  // namespace dephasim
