#include "tripa/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tripa {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hash_hex(std::uint64_t value) {
    char buffer[19];
    std::snprintf(buffer, sizeof buffer, "0x%016llx",
                  static_cast<unsigned long long>(value));
    return buffer;
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
    double value{};
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw std::invalid_argument("not a floating-point value: '" + text + "'");
    return value;
}

std::int64_t parse_int(const std::string& text) {
    std::int64_t value{};
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw std::invalid_argument("not an integer: '" + text + "'");
    return value;
}

std::string Csv::metadata_value(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return v;
    return {};
}

std::size_t Csv::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::invalid_argument("missing CSV column '" + name + "'");
}

std::string to_string(const Csv& csv) {
    std::ostringstream out;
    for (const auto& [key, value] : csv.metadata) out << "# " << key << " = " << value << "\n";
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        out << (i ? "," : "") << csv.header[i];
    out << "\n";
    for (const auto& row : csv.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void write_csv(const std::filesystem::path& path, const Csv& csv) {
    write_file(path, to_string(csv));
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto from = s.find_first_not_of(" \t");
                    const auto to = s.find_last_not_of(" \t");
                    return from == std::string::npos ? std::string{}
                                                     : s.substr(from, to - from + 1);
                };
                csv.metadata.emplace_back(trim(body.substr(0, eq)),
                                          trim(body.substr(eq + 1)));
            }
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream row(line);
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (!header_seen) {
            csv.header = std::move(fields);
            header_seen = true;
        } else {
            csv.rows.push_back(std::move(fields));
        }
    }
    return csv;
}

Csv read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tripa
