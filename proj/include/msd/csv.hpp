#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace msd {

// Floats at 12 significant digits; the byte-reproducibility contract for all
// emitted tables rests on this one formatter.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file,
            const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void cell(const std::string& v);
  void cell(const char* v) { cell(std::string(v)); }
  void cell(double v) { cell(format_double(v)); }
  void cell(int v) { cell(std::to_string(v)); }
  void cell(uint64_t v) { cell(std::to_string(v)); }
  void end_row();

  int rows_written() const { return rows_; }
  void close();

 private:
  std::ofstream os_;
  int columns_;
  int cells_in_row_ = 0;
  int rows_ = 0;
  bool closed_ = false;
};

}  // namespace msd
