// Minimal CSV emit/parse for the plot-ready artifacts. Doubles are written
// with std::to_chars (shortest exact round-trip) so rewritten artifacts are
// byte-identical across runs.

#pragma once

#include <string>
#include <vector>

namespace rbmflow {

std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
    int column(const std::string& name) const;  // -1 when absent
};

CsvTable parse_csv(const std::string& text);

double parse_double(const std::string& token);

// write-temp-then-rename so readers never observe a partial artifact
void write_file_atomic(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace rbmflow
