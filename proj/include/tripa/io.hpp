#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tripa {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::uint64_t value);

// shortest representation that round-trips
std::string format_double(double value);
double parse_double(const std::string& text);
std::int64_t parse_int(const std::string& text);

struct Csv {
    std::vector<std::pair<std::string, std::string>> metadata;  // "# key = value" lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string metadata_value(const std::string& key) const;  // "" when absent
    std::size_t column(const std::string& name) const;         // throws when absent
};

std::string to_string(const Csv& csv);
void write_csv(const std::filesystem::path& path, const Csv& csv);
Csv parse_csv(const std::string& text);
Csv read_csv(const std::filesystem::path& path);  // throws with the path on failure

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tripa
