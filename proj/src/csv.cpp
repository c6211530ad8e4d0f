#include "rydsense/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "rydsense/errors.hpp"

namespace rydsense {

std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc()) throw Error("number formatting failed");
    return std::string(buf, res.ptr);
}

std::string render_csv(const Table& table, const CsvHeader& header) {
    if (table.rows.empty()) throw Error("table '" + table.name + "' is empty");
    std::string out;
    out += "# rydsense scenario=" + header.scenario + " version=" + header.version +
           " config_hash=" + header.config_hash + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c].name + " (" + table.columns[c].unit + ")";
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw Error("table '" + table.name + "' has a ragged row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write " + path.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("cannot write " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot write " + path.string());
    }
}

void emit_csv(const Table& table, const std::filesystem::path& path, const CsvHeader& header) {
    write_file_atomic(path, render_csv(table, header));
}

}  // namespace rydsense
