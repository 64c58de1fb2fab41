// Copyright 2026 The Harmonkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harmonkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace harmonkit {

// Defined in the generated bundled_models.cpp.
namespace detail {
struct BundledModel {
  const char* name;
  const char* json;
};
extern const BundledModel kBundledModels[];
extern const std::size_t kBundledModelCount;
}  // namespace detail

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Field> fields;
  std::size_t line = 0;
};

// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + extra >= s.size()) return i;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += extra + 1;
  }
  return std::nullopt;
}

std::vector<Record> split_records(std::string_view s, char delimiter) {
  std::vector<Record> records;
  Record record;
  Field field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  record.line = 1;

  auto end_field = [&] {
    record.fields.push_back(std::move(field));
    field = Field{};
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record = Record{};
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field.text.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.text.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field.quoted = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
      end_record();
      ++line;
      record.line = line;
    } else {
      field.text.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(record.line) + ": unterminated quoted field");
  }
  if (field_started || !record.fields.empty()) end_record();
  return records;
}

std::string quote_field(std::string_view text, char delimiter, bool force) {
  const bool needs = force || text.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos;
  if (!needs) return std::string(text);
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

[[noreturn]] void model_fail(const std::string& message) {
  throw Error(ErrorCode::kValidationError, message);
}

}  // namespace

Dataset parse_csv(std::string_view bytes, const CsvOptions& options) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (const auto bad = invalid_utf8(bytes)) {
    const auto line = 1 + std::count(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(*bad), '\n');
    throw Error(ErrorCode::kEncodingError,
                "invalid UTF-8 at byte " + std::to_string(*bad) + " (line " + std::to_string(line) + ")");
  }
  std::vector<Record> records = split_records(bytes, options.delimiter);
  if (records.empty()) return Dataset();

  std::vector<std::string> names;
  std::size_t first_row = 0;
  if (options.has_header) {
    for (Field& f : records.front().fields) names.push_back(std::move(f.text));
    first_row = 1;
    std::unordered_set<std::string> seen;
    for (const std::string& n : names) {
      if (!seen.insert(n).second) throw Error(ErrorCode::kDuplicateHeader, "duplicate header '" + n + "'");
    }
  } else {
    for (std::size_t i = 0; i < records.front().fields.size(); ++i) names.push_back("col_" + std::to_string(i + 1));
  }

  const std::size_t width = names.size();
  std::vector<std::vector<const Field*>> columns(width);
  for (std::size_t r = first_row; r < records.size(); ++r) {
    const Record& record = records[r];
    if (record.fields.size() != width) {
      throw Error(ErrorCode::kRaggedRow, "line " + std::to_string(record.line) + ": expected " +
                                             std::to_string(width) + " fields, found " +
                                             std::to_string(record.fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) columns[c].push_back(&record.fields[c]);
  }

  std::vector<Column> out;
  out.reserve(width);
  for (std::size_t c = 0; c < width; ++c) {
    auto is_null = [&](const Field* f) { return !f->quoted && options.null_tokens.count(f->text) > 0; };
    bool numeric = true;
    bool any = false;
    for (const Field* f : columns[c]) {
      if (is_null(f)) continue;
      any = true;
      if (!parse_number(f->text)) {
        numeric = false;
        break;
      }
    }
    numeric = numeric && any;
    std::vector<Cell> cells;
    cells.reserve(columns[c].size());
    for (const Field* f : columns[c]) {
      if (is_null(f)) {
        cells.push_back(Cell::null());
      } else if (numeric) {
        cells.push_back(Cell::number(*parse_number(f->text)));
      } else {
        cells.push_back(Cell::text(f->text));
      }
    }
    out.emplace_back(names[c], std::move(cells));
  }
  return Dataset(std::move(out));
}

Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options);
}

std::string format_csv(const Dataset& data, char delimiter) {
  std::string out;
  const auto& columns = data.columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out.push_back(delimiter);
    out += quote_field(columns[c].name(), delimiter, false);
  }
  if (!columns.empty()) out.push_back('\n');
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out.push_back(delimiter);
      const Cell& cell = columns[c].values()[r];
      if (cell.is_text()) {
        out += quote_field(cell.as_text(), delimiter, cell.as_text().empty());
      } else if (cell.is_number()) {
        out += format_number(cell.as_number());
      }
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path, char delimiter) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  file << format_csv(data, delimiter);
  if (!file) throw Error(ErrorCode::kIoError, "write to '" + path.string() + "' failed");
}

TargetModel parse_target_model(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("target model: ") + e.what());
  }
  if (!doc.is_object()) model_fail("target model must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "model_name" && key != "attributes") model_fail("target model: unknown field '" + key + "'");
  }
  if (!doc.contains("model_name") || !doc["model_name"].is_string()) model_fail("target model: missing 'model_name'");
  if (!doc.contains("attributes") || !doc["attributes"].is_array()) model_fail("target model: missing 'attributes'");

  std::vector<std::string> problems;
  std::vector<TargetAttribute> attributes;
  for (std::size_t i = 0; i < doc["attributes"].size(); ++i) {
    const json& a = doc["attributes"][i];
    const std::string label =
        a.is_object() && a.contains("name") && a["name"].is_string() ? a["name"].get<std::string>()
                                                                      : "attributes[" + std::to_string(i) + "]";
    if (!a.is_object()) {
      problems.push_back(label + ": not an object");
      continue;
    }
    TargetAttribute attribute;
    bool ok = true;
    for (const auto& [key, value] : a.items()) {
      if (key != "name" && key != "description" && key != "permissible_values" && key != "value_kind") {
        problems.push_back(label + ": unknown field '" + key + "'");
        ok = false;
      }
    }
    if (!a.contains("name") || !a["name"].is_string()) {
      problems.push_back(label + ": missing name");
      ok = false;
    } else {
      attribute.name = a["name"].get<std::string>();
    }
    if (a.contains("description")) {
      if (a["description"].is_string()) {
        attribute.description = a["description"].get<std::string>();
      } else if (!a["description"].is_null()) {
        problems.push_back(label + ": description must be a string");
        ok = false;
      }
    }
    if (a.contains("permissible_values") && !a["permissible_values"].is_null()) {
      const json& pv = a["permissible_values"];
      std::vector<std::string> values;
      bool strings = pv.is_array();
      if (strings) {
        for (const json& v : pv) {
          if (!v.is_string()) {
            strings = false;
            break;
          }
          values.push_back(v.get<std::string>());
        }
      }
      if (!strings) {
        problems.push_back(label + ": permissible_values must be a list of strings");
        ok = false;
      } else {
        attribute.permissible_values = std::move(values);
      }
    }
    if (!a.contains("value_kind") || !a["value_kind"].is_string()) {
      problems.push_back(label + ": missing value_kind");
      ok = false;
    } else {
      try {
        attribute.value_kind = parse_value_kind(a["value_kind"].get<std::string>());
      } catch (const Error&) {
        problems.push_back(label + ": unknown value_kind '" + a["value_kind"].get<std::string>() + "'");
        ok = false;
      }
    }
    if (ok) attributes.push_back(std::move(attribute));
  }
  if (!problems.empty()) {
    std::string msg = "invalid target model: ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    model_fail(msg);
  }
  return TargetModel(doc["model_name"].get<std::string>(), std::move(attributes));
}

std::vector<std::string> bundled_model_names() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < detail::kBundledModelCount; ++i) names.emplace_back(detail::kBundledModels[i].name);
  return names;
}

TargetModel load_target_model(std::string_view name_or_path) {
  const std::filesystem::path path{std::string(name_or_path)};
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) return parse_target_model(read_file(path));

  if (const char* env = std::getenv("HARMONKIT_MODEL_PATH")) {
    std::stringstream dirs(env);
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      if (dir.empty()) continue;
      const auto candidate = std::filesystem::path(dir) / (std::string(name_or_path) + ".json");
      if (std::filesystem::is_regular_file(candidate, ec)) return parse_target_model(read_file(candidate));
    }
  }
  for (std::size_t i = 0; i < detail::kBundledModelCount; ++i) {
    if (name_or_path == detail::kBundledModels[i].name) return parse_target_model(detail::kBundledModels[i].json);
  }
  throw Error(ErrorCode::kIoError, "no target model file or bundled model named '" + std::string(name_or_path) + "'");
}

std::vector<std::size_t> holdout_rows(std::size_t rows, double holdout_fraction, std::uint64_t seed) {
  if (rows < 2) throw Error(ErrorCode::kTooFewRows, "splitting needs at least 2 rows, got " + std::to_string(rows));
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "holdout fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(rows);
  for (std::size_t i = 0; i < rows; ++i) order[i] = i;
  // Fisher-Yates with rejection sampling, so the split only depends on the
  // (standardized) mt19937_64 stream and not on library distributions.
  std::mt19937_64 rng(seed);
  for (std::size_t i = rows - 1; i > 0; --i) {
    const std::uint64_t bound = i + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    std::swap(order[i], order[static_cast<std::size_t>(draw % bound)]);
  }
  auto count = static_cast<std::size_t>(std::llround(static_cast<double>(rows) * holdout_fraction));
  count = std::clamp<std::size_t>(count, 1, rows - 1);
  std::vector<std::size_t> holdout(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(holdout.begin(), holdout.end());
  return holdout;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double holdout_fraction, std::uint64_t seed) {
  const std::vector<std::size_t> holdout = holdout_rows(data.num_rows(), holdout_fraction, seed);
  std::vector<std::size_t> base;
  std::size_t h = 0;
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    if (h < holdout.size() && holdout[h] == r) {
      ++h;
    } else {
      base.push_back(r);
    }
  }
  return {data.select_rows(base), data.select_rows(holdout)};
}

}  // namespace harmonkit
