#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "patprof/errors.hpp"
#include "patprof/unicode.hpp"

namespace patprof {

struct IngestOptions {
  std::optional<std::string> column;  // delimited mode when set: name or 0-based index
  bool newline_mode = false;
};

namespace detail {

inline Str decode_line(const std::string& raw, std::size_t line_no,
                       const std::string& path) {
  auto u32 = utf8_to_u32(raw);
  if (!u32)
    throw DataError(path + ":" + std::to_string(line_no) + ": invalid UTF-8");
  return std::move(*u32);
}

// RFC-4180-ish CSV records: comma separated, double-quoted fields with ""
// escapes, newlines allowed inside quotes.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& path,
                                                       std::vector<std::size_t>* line_of_row) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1, row_start_line = 1;
  bool at_field_start = true;

  auto end_field = [&]() {
    row.push_back(std::move(field));
    field.clear();
    at_field_start = true;
    field_was_quoted = false;
  };
  auto end_row = [&]() {
    end_field();
    rows.push_back(std::move(row));
    if (line_of_row) line_of_row->push_back(row_start_line);
    row.clear();
    row_start_line = line;
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"') {
      if (!at_field_start)
        throw DataError(path + ":" + std::to_string(line) +
                        ": quote inside unquoted field");
      in_quotes = true;
      field_was_quoted = true;
      at_field_start = false;
      ++i;
      continue;
    }
    if (field_was_quoted && c != ',' && c != '\n' && c != '\r')
      throw DataError(path + ":" + std::to_string(line) +
                      ": data after closing quote");
    if (c == ',') {
      end_field();
      ++i;
      continue;
    }
    if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      end_row();
      row_start_line = line;
      continue;
    }
    field.push_back(c);
    at_field_start = false;
    ++i;
  }
  if (in_quotes)
    throw DataError(path + ":" + std::to_string(row_start_line) +
                    ": unterminated quoted field");
  if (!field.empty() || !row.empty() || field_was_quoted) end_row();
  return rows;
}

}  // namespace detail

// Reads a dataset. Newline mode yields one string per line (empty lines are
// kept as ε). Delimited mode extracts one column: a named selector reads the
// header row, a numeric selector is a 0-based index into a headerless file.
// Duplicates and order are preserved either way.
inline std::vector<Str> ingest(const std::string& path, const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  std::vector<Str> out;
  if (!opts.column) {
    // newline mode (the default)
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) {
        if (start < text.size()) {
          std::string raw = text.substr(start);
          if (!raw.empty() && raw.back() == '\r') raw.pop_back();
          out.push_back(detail::decode_line(raw, line_no, path));
        }
        break;
      }
      std::string raw = text.substr(start, end - start);
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      out.push_back(detail::decode_line(raw, line_no, path));
      start = end + 1;
      ++line_no;
    }
    return out;
  }

  std::vector<std::size_t> row_lines;
  auto rows = detail::parse_csv(text, path, &row_lines);
  if (rows.empty()) return out;

  const std::string& selector = *opts.column;
  bool numeric = !selector.empty() &&
                 std::all_of(selector.begin(), selector.end(),
                             [](unsigned char c) { return std::isdigit(c); });
  std::size_t col = 0;
  std::size_t first_row = 0;
  if (numeric) {
    col = static_cast<std::size_t>(std::stoul(selector));
  } else {
    first_row = 1;
    const auto& header = rows[0];
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == selector) {
        col = i;
        found = true;
        break;
      }
    }
    if (!found) {
      std::string available;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) available += ", ";
        available += header[i];
      }
      throw DataError(path + ": no column named '" + selector +
                      "' (available: " + available + ")");
    }
  }

  for (std::size_t r = first_row; r < rows.size(); ++r) {
    if (col >= rows[r].size())
      throw DataError(path + ":" + std::to_string(row_lines[r]) +
                      ": row has only " + std::to_string(rows[r].size()) + " column(s)");
    out.push_back(detail::decode_line(rows[r][col], row_lines[r], path));
  }
  return out;
}

}  // namespace patprof
