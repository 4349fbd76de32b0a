#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace biomaudit {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each row has header.size() fields
};

/// Reads a CSV file with a mandatory header row. Fields may be quoted with
/// double quotes; embedded quotes are doubled. Throws MissingFile or
/// ParseError (with the 1-based data row index in the message).
CsvTable read_csv(const std::filesystem::path& path);

/// Writes a CSV file, quoting fields only when needed. Throws WriteError.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string csv_escape(const std::string& field);

/// Fixed CSV float format: 6 significant digits.
std::string format_double(double v);

double parse_double(const std::string& s, std::size_t row_index);  // throws ParseError
int parse_binary(const std::string& s, std::size_t row_index);     // {0,1}, throws ParseError

}  // namespace biomaudit
