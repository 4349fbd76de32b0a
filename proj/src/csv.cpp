#include "biomaudit/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "biomaudit/errors.hpp"

namespace biomaudit {

namespace {

// Splits the full file content into records, honoring quoted fields (which
// may contain commas, quotes and newlines).
std::vector<std::vector<std::string>> parse_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
        } else {
          field += c;  // stray quote inside unquoted field, keep verbatim
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::ParseError, "unterminated quoted field at end of file");
  }
  if (field_started || !field.empty() || !fields.empty()) {
    end_record();
  }
  return records;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = parse_records(buf.str());
  if (records.empty()) {
    throw Error(ErrorKind::ParseError, path.string() + ": missing header row");
  }

  CsvTable table;
  table.header = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw Error(ErrorKind::ParseError,
                  path.string() + ": row " + std::to_string(r) + " has " +
                      std::to_string(records[r].size()) + " fields, expected " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::WriteError, "cannot open " + path.string());
  }
  auto write_row = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(fields[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  if (!out) {
    throw Error(ErrorKind::WriteError, "write failed for " + path.string());
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t row_index) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError,
                "row " + std::to_string(row_index) + ": bad number '" + s + "'");
  }
}

int parse_binary(const std::string& s, std::size_t row_index) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw Error(ErrorKind::ParseError,
              "row " + std::to_string(row_index) + ": expected 0 or 1, got '" + s + "'");
}

}  // namespace biomaudit
