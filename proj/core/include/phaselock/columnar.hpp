#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace phaselock {

/// Self-describing columnar text files: '#'-prefixed "key = value" header
/// lines, a "# columns = ..." line, then whitespace-delimited rows.

class TableWriter {
public:
    TableWriter(const std::string& path, const std::vector<std::string>& columns,
                const std::vector<std::pair<std::string, std::string>>& header);
    ~TableWriter();

    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t n_columns_;
};

struct Table {
    std::map<std::string, std::string> header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const;  // throws if absent
    std::vector<double> column(const std::string& name) const;
    const std::string& header_at(const std::string& key) const;
};

Table read_table(const std::string& path);

/// Low-level helpers shared by the structured readers.
std::vector<std::string_view> split_fields(std::string_view line);
double parse_double_field(std::string_view f, const std::string& path, long line_no);
std::int64_t parse_int_field(std::string_view f, const std::string& path, long line_no);

/// FNV-1a hash of a string, used to stamp outputs with their configuration.
std::uint64_t fnv1a64(std::string_view text);
std::string hash_hex(std::uint64_t h);

/// Formats a double so the exact value round-trips through the text file.
std::string format_full(double v);

}  // namespace phaselock
