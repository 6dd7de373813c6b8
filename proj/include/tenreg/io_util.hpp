#pragma once

#include <string>

namespace tenreg {

/// Formats a double with round-trip precision (shortest form via %.17g).
std::string format_double(double v);

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace tenreg
