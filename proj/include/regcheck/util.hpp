#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace regcheck {

// Shortest decimal form that round-trips through double.
std::string format_double(double value);

// Fixed six decimal places ("0.000000"), used by geometry literals.
std::string format_fixed6(double value);

// String comparison where runs of digits compare by numeric value,
// so ".../inst/7" orders before ".../inst/12".
bool natural_less(std::string_view a, std::string_view b);

std::string to_upper(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

std::string sha256_hex(std::string_view bytes);

std::string hex_bytes(const unsigned char* data, std::size_t n);

}  // namespace regcheck
