#ifndef FUZZSTOCH_IO_HPP
#define FUZZSTOCH_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fuzzstoch {

/// Shortest round-trip decimal form of a double (deterministic across runs).
std::string format_double(double v);

/// Parse a double; throws FormatError on trailing garbage or empty input.
double parse_double(const std::string& s);

/// One CSV line from already-formatted cells.
std::string csv_line(const std::vector<std::string>& cells);

/// Split a CSV line on commas (no quoting; our formats never need it).
std::vector<std::string> csv_split(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_binary_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_binary_file(const std::string& path);

/// FNV-1a 64-bit checksum, hex encoded.
std::string fnv1a_hex(const void* data, std::size_t size);
std::string file_checksum(const std::string& path);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_IO_HPP
