#include "dephasim/csv.hpp"

#include <cstdio>
#include <fstream>

#include "dephasim/errors.hpp"

namespace dephasim {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl), n_columns_(header.size()) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw ConfigError("cannot open CSV output file: " + path);
  }
  row(header);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != n_columns_)
    throw std::logic_error("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << fields[i];
  }
  impl_->out << '\n';
}

void CsvWriter::row_numeric(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  row(fields);
}

}  // namespace dephasim
