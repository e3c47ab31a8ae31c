#include "phaselock/columnar.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "phaselock/errors.hpp"

namespace phaselock {

TableWriter::TableWriter(const std::string& path, const std::vector<std::string>& columns,
                         const std::vector<std::pair<std::string, std::string>>& header)
    : out_(path), path_(path), n_columns_(columns.size()) {
    if (!out_) throw ValidationError("cannot open for writing: " + path);
    for (const auto& [k, v] : header) out_ << "# " << k << " = " << v << "\n";
    out_ << "# columns =";
    for (const auto& c : columns) out_ << ' ' << c;
    out_ << "\n";
}

TableWriter::~TableWriter() { close(); }

void TableWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw ValidationError("row width mismatch writing " + path_);
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ' ';
        line += format_full(values[i]);
    }
    out_ << line << "\n";
}

void TableWriter::raw_row(const std::string& line) { out_ << line << "\n"; }

void TableWriter::close() {
    if (out_.is_open()) {
        out_.flush();
        if (!out_) throw NumericError("write failed: " + path_);
        out_.close();
    }
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ValidationError("table has no column '" + name + "'");
}

std::vector<double> Table::column(const std::string& name) const {
    const std::size_t i = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[i]);
    return out;
}

const std::string& Table::header_at(const std::string& key) const {
    const auto it = header.find(key);
    if (it == header.end()) throw ValidationError("table header missing key '" + key + "'");
    return it->second;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j + 1;
    }
    return out;
}

double parse_double_field(std::string_view f, const std::string& path, long line_no) {
    double v = 0.0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        throw ValidationError(path + ":" + std::to_string(line_no) +
                              ": malformed numeric field '" + std::string(f) + "'");
    return v;
}

std::int64_t parse_int_field(std::string_view f, const std::string& path, long line_no) {
    std::int64_t v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        throw ValidationError(path + ":" + std::to_string(line_no) +
                              ": malformed integer field '" + std::string(f) + "'");
    return v;
}

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path);
    Table t;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                std::string value = line.substr(eq + 1);
                const auto trim = [](std::string& s) {
                    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
                    while (!s.empty() &&
                           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                        s.pop_back();
                };
                trim(key);
                trim(value);
                if (key == "columns") {
                    for (const auto f : split_fields(value)) t.columns.emplace_back(f);
                } else {
                    t.header[key] = value;
                }
            }
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (!t.columns.empty() && fields.size() != t.columns.size())
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": expected " + std::to_string(t.columns.size()) +
                                  " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto f : fields) row.push_back(parse_double_field(f, path, line_no));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace phaselock
