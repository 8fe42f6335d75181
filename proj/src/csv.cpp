#include "msd/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace msd {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& file,
                     const std::vector<std::string>& header)
    : columns_(static_cast<int>(header.size())) {
  if (file.has_parent_path()) {
    std::filesystem::create_directories(file.parent_path());
  }
  os_.open(file, std::ios::binary | std::ios::trunc);
  if (!os_) {
    throw std::runtime_error("cannot open " + file.string() + " for writing");
  }
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os_ << ',';
    os_ << header[i];
  }
  os_ << '\n';
}

CsvWriter::~CsvWriter() {
  if (!closed_) close();
}

void CsvWriter::cell(const std::string& v) {
  if (v.find_first_of(",\n\"") != std::string::npos) {
    throw std::invalid_argument("csv cell needs quoting, which tables avoid");
  }
  if (cells_in_row_) os_ << ',';
  os_ << v;
  ++cells_in_row_;
}

void CsvWriter::end_row() {
  if (cells_in_row_ != columns_) {
    throw std::logic_error("csv row width mismatch");
  }
  os_ << '\n';
  cells_in_row_ = 0;
  ++rows_;
}

void CsvWriter::close() {
  if (closed_) return;
  os_.close();
  closed_ = true;
  if (os_.fail()) {
    throw std::runtime_error("csv write failed");
  }
}

}  // namespace msd
