#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rydsense {

struct Column {
    std::string name;
    std::string unit;
};

struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
};

struct CsvHeader {
    std::string scenario;
    std::string version;
    std::string config_hash;
};

// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

std::string render_csv(const Table& table, const CsvHeader& header);

// Writes through a temporary file in the same directory and renames it into
// place. Throws rydsense::Error for an empty table or an unwritable path.
void emit_csv(const Table& table, const std::filesystem::path& path, const CsvHeader& header);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rydsense
