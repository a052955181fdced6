#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcfcap {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rectangular numeric table with named columns.
struct Csv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Header line plus one row per entry, numbers at 9 significant digits.
/// Byte-deterministic for identical input.
std::string render_csv(const Csv& table);

void write_csv(const Csv& table, const std::filesystem::path& path);

/// Companion gnuplot script plotting every column against the first one.
std::string gnuplot_script(const Csv& table, const std::string& csv_path,
                           const std::string& title);

}  // namespace dcfcap
