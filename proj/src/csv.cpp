#include "dcfcap/csv.hpp"

#include <cstdio>
#include <fstream>

namespace dcfcap {

std::string render_csv(const Csv& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    char buf[40];
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw IoError("ragged CSV row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            std::snprintf(buf, sizeof buf, "%.9g", row[c]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Csv& table, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    const std::string body = render_csv(table);
    file.write(body.data(), std::streamsize(body.size()));
    if (!file) throw IoError("short write to " + path.string());
}

std::string gnuplot_script(const Csv& table, const std::string& csv_path,
                           const std::string& title) {
    std::string out;
    out += "set datafile separator ','\n";
    out += "set key autotitle columnhead\n";
    out += "set grid\n";
    out += "set title '" + title + "'\n";
    if (!table.columns.empty()) out += "set xlabel '" + table.columns.front() + "'\n";
    out += "plot";
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        if (c > 1) out += ',';
        out += " '" + csv_path + "' using 1:" + std::to_string(c + 1) + " with linespoints";
    }
    out += '\n';
    return out;
}

}  // namespace dcfcap
