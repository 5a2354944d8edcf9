#pragma once

// Tabular reports and their CSV / JSON encodings.
//
// CSV: each table starts with a "# <name>" line, then a header row, then
// data rows; tables are separated by one blank line. Numbers and booleans
// are written bare, strings always double-quoted (quotes doubled), an empty
// field is an absent value. No locale formatting anywhere.
//
// JSON: {"schema": ..., "command": ..., "ok": ..., "summary": {...},
//        "tables": {"<name>": [ {column: value, ...}, ... ]}}

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

namespace osieve::report {

inline constexpr const char* kSchema = "osieve.report/1";

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, std::string>;

/// Non-negative integers are always stored as uint64 so that a CSV
/// round trip reproduces the same alternative.
template <class T>
Cell cell(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return Cell{v};
  } else if constexpr (std::is_integral_v<T> && std::is_signed_v<T>) {
    if (v < 0) return Cell{static_cast<std::int64_t>(v)};
    return Cell{static_cast<std::uint64_t>(v)};
  } else if constexpr (std::is_integral_v<T>) {
    return Cell{static_cast<std::uint64_t>(v)};
  } else if constexpr (std::is_convertible_v<T, std::string>) {
    return Cell{std::string(v)};
  } else {
    static_assert(!sizeof(T), "unsupported cell type");
  }
}

template <class T>
Cell cell(const std::optional<T>& v) {
  return v ? cell(*v) : Cell{};
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  template <class... Ts>
  void add(const Ts&... values) {
    rows.push_back({cell(values)...});
  }

  friend bool operator==(const Table&, const Table&) = default;
};

struct Report {
  std::string command;
  std::vector<Table> tables;
  nlohmann::json summary = nlohmann::json::object();
  bool ok = true;
};

class csv_error : public std::runtime_error {
 public:
  csv_error(std::size_t line, const std::string& what)
      : std::runtime_error("csv line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline void write_cell(std::ostream& os, const Cell& c) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
        } else if constexpr (std::is_same_v<V, bool>) {
          os << (v ? "true" : "false");
        } else if constexpr (std::is_same_v<V, std::string>) {
          os << '"';
          for (char ch : v) {
            if (ch == '"') os << '"';
            os << ch;
          }
          os << '"';
        } else {
          os << v;
        }
      },
      c);
}

inline nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
        else return v;
      },
      c);
}

// Splits one CSV record; quoted fields keep their quotes so the cell
// parser can tell strings from numbers.
inline std::vector<std::string> split_record(std::string_view line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += "\"\"";
          ++i;
        } else {
          quoted = false;
          cur += '"';
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      cur += '"';
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw csv_error(lineno, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

inline Cell parse_cell(const std::string& field, std::size_t lineno) {
  if (field.empty()) return Cell{};
  if (field.front() == '"') {
    if (field.size() < 2 || field.back() != '"') throw csv_error(lineno, "bad quoted field");
    std::string s;
    for (std::size_t i = 1; i + 1 < field.size(); ++i) {
      s += field[i];
      if (field[i] == '"') ++i;
    }
    return Cell{std::move(s)};
  }
  if (field == "true") return Cell{true};
  if (field == "false") return Cell{false};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (field.front() == '-') {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec == std::errc{} && p == last) return Cell{v};
  } else {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec == std::errc{} && p == last) return Cell{v};
  }
  throw csv_error(lineno, "unrecognised unquoted field '" + field + "'");
}

}  // namespace detail

inline std::string to_csv(const std::vector<Table>& tables) {
  std::ostringstream os;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const Table& table = tables[t];
    if (t > 0) os << '\n';
    os << "# " << table.name << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        detail::write_cell(os, row[i]);
      }
      os << '\n';
    }
  }
  return os.str();
}

inline std::vector<Table> parse_csv(std::string_view text) {
  std::vector<Table> tables;
  enum class State { kExpectName, kExpectHeader, kRows } state = State::kExpectName;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (state == State::kExpectHeader) throw csv_error(lineno, "table without header");
      state = State::kExpectName;
      continue;
    }
    switch (state) {
      case State::kExpectName:
        if (line.substr(0, 2) != "# ") throw csv_error(lineno, "expected '# <table name>'");
        tables.push_back(Table{std::string(line.substr(2)), {}, {}});
        state = State::kExpectHeader;
        break;
      case State::kExpectHeader:
        tables.back().columns = detail::split_record(line, lineno);
        state = State::kRows;
        break;
      case State::kRows: {
        auto fields = detail::split_record(line, lineno);
        if (fields.size() != tables.back().columns.size())
          throw csv_error(lineno, "expected " + std::to_string(tables.back().columns.size()) +
                                      " fields, got " + std::to_string(fields.size()));
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(detail::parse_cell(f, lineno));
        tables.back().rows.push_back(std::move(row));
        break;
      }
    }
  }
  if (state == State::kExpectHeader) throw csv_error(lineno, "table without header");
  return tables;
}

inline nlohmann::json to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json rec = nlohmann::json::object();
    for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i)
      rec[table.columns[i]] = detail::cell_json(row[i]);
    rows.push_back(std::move(rec));
  }
  return rows;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["command"] = r.command;
  j["ok"] = r.ok;
  j["summary"] = r.summary;
  nlohmann::json tables = nlohmann::json::object();
  for (const auto& t : r.tables) tables[t.name] = to_json(t);
  j["tables"] = std::move(tables);
  return j;
}

/// CSV rendering of a whole report: its tables, then a key/value "summary"
/// table when the summary is non-empty. Non-scalar summary values are
/// written as JSON strings.
inline std::string to_csv(const Report& r) {
  std::vector<Table> tables = r.tables;
  if (!r.summary.empty()) {
    Table s{"summary", {"key", "value"}, {}};
    for (const auto& [key, value] : r.summary.items()) {
      if (value.is_boolean()) s.add(key, value.get<bool>());
      else if (value.is_number_unsigned()) s.add(key, value.get<std::uint64_t>());
      else if (value.is_number_integer()) s.add(key, value.get<std::int64_t>());
      else if (value.is_string()) s.add(key, value.get<std::string>());
      else s.add(key, value.dump());
    }
    tables.push_back(std::move(s));
  }
  return to_csv(tables);
}

}  // namespace osieve::report
