// Copyright 2026 The Authors.
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

#include "simexplain/dataset_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "simexplain/errors.h"
#include "simexplain/serialization.h"

namespace simexplain {

namespace {

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line,
                          std::size_t column, const std::string& msg) {
  std::ostringstream os;
  os << path.string() << ":" << line;
  if (column > 0) os << ":" << column;
  os << ": " << msg;
  throw ValidationError(os.str());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_index(const std::string& s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_tokens(const Instance& inst) {
  std::string out;
  for (const std::string& t : inst.token_set()) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool is_json_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".jsonl" || ext == ".json";
}

// Column description parsed from a header cell such as "left_age:4".
struct Column {
  std::string side;  // "left" | "right"
  std::string name;
  std::optional<std::size_t> cardinality;
};

struct Layout {
  Schema schema;
  std::vector<std::size_t> left_cols;
  std::vector<std::size_t> right_cols;
  std::optional<std::size_t> left_id;
  std::optional<std::size_t> right_id;
  std::optional<std::size_t> bb;
  std::optional<std::size_t> left_text;
  std::optional<std::size_t> right_text;
};

Layout parse_header(const std::filesystem::path& path,
                    const std::vector<std::string>& cells) {
  Layout lay;
  std::vector<Column> left;
  std::vector<Column> right;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::string cell = trim(cells[c]);
    if (cell == "bb_distance") {
      lay.bb = c;
      continue;
    }
    if (cell == "left_id") {
      lay.left_id = c;
      continue;
    }
    if (cell == "right_id") {
      lay.right_id = c;
      continue;
    }
    if (cell == "left_text") {
      lay.left_text = c;
      continue;
    }
    if (cell == "right_text") {
      lay.right_text = c;
      continue;
    }
    Column col;
    std::string rest;
    if (cell.rfind("left_", 0) == 0) {
      col.side = "left";
      rest = cell.substr(5);
    } else if (cell.rfind("right_", 0) == 0) {
      col.side = "right";
      rest = cell.substr(6);
    } else {
      fail_at(path, 1, c + 1, "header cell '" + cell +
                                  "' must start with left_ or right_");
    }
    const auto colon = rest.find(':');
    col.name = rest.substr(0, colon);
    if (colon != std::string::npos) {
      std::size_t card = 0;
      if (!parse_index(rest.substr(colon + 1), card) || card == 0) {
        fail_at(path, 1, c + 1, "bad cardinality in '" + cell + "'");
      }
      col.cardinality = card;
    }
    if (col.name.empty()) fail_at(path, 1, c + 1, "empty feature name");
    (col.side == "left" ? left : right).push_back(col);
    (col.side == "left" ? lay.left_cols : lay.right_cols).push_back(c);
  }

  if (lay.left_text || lay.right_text) {
    if (!lay.left_text || !lay.right_text || !left.empty() || !right.empty()) {
      fail_at(path, 1, 0, "token files need exactly left_text and right_text");
    }
    lay.schema = Schema::tokens();
    return lay;
  }
  if (left.empty()) fail_at(path, 1, 0, "header names no features");
  if (left.size() != right.size()) {
    fail_at(path, 1, 0, "left and right sides have different feature counts");
  }
  bool any_card = false;
  bool all_card = true;
  std::vector<std::string> names;
  std::vector<std::size_t> cards;
  for (std::size_t k = 0; k < left.size(); ++k) {
    if (left[k].name != right[k].name ||
        left[k].cardinality != right[k].cardinality) {
      fail_at(path, 1, lay.right_cols[k] + 1,
              "right column does not mirror left column '" + left[k].name + "'");
    }
    any_card = any_card || left[k].cardinality.has_value();
    all_card = all_card && left[k].cardinality.has_value();
    names.push_back(left[k].name);
    cards.push_back(left[k].cardinality.value_or(0));
  }
  if (any_card && !all_card) {
    fail_at(path, 1, 0, "either every feature or none has a cardinality");
  }
  lay.schema = any_card ? Schema::categorical(std::move(names), std::move(cards))
                        : Schema::numeric(std::move(names));
  return lay;
}

void check_schema_match(const std::filesystem::path& path, const Schema& got,
                        const Schema& expected) {
  if (got.kind != expected.kind) {
    fail_at(path, 1, 0,
            "file holds " + std::string(to_string(got.kind)) + " data, expected " +
                std::string(to_string(expected.kind)));
  }
  if (got.kind == InstanceKind::kTokens) return;
  if (got.feature_names != expected.feature_names ||
      got.cardinalities != expected.cardinalities) {
    fail_at(path, 1, 0, "header does not match the expected schema");
  }
}

Instance parse_side(const std::filesystem::path& path, std::size_t line,
                    const std::vector<std::string>& cells,
                    const std::vector<std::size_t>& cols, const Schema& schema) {
  if (schema.kind == InstanceKind::kNumeric) {
    std::vector<double> v;
    v.reserve(cols.size());
    for (std::size_t c : cols) {
      double x = 0.0;
      if (!parse_double(trim(cells[c]), x)) {
        fail_at(path, line, c + 1, "not a finite number: '" + cells[c] + "'");
      }
      v.push_back(x);
    }
    return Instance::numeric(std::move(v));
  }
  std::vector<std::size_t> v;
  v.reserve(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t c = cols[k];
    std::size_t x = 0;
    if (!parse_index(trim(cells[c]), x)) {
      fail_at(path, line, c + 1, "not a category index: '" + cells[c] + "'");
    }
    if (x >= schema.cardinalities[k]) {
      fail_at(path, line, c + 1,
              "category " + std::to_string(x) + " outside cardinality " +
                  std::to_string(schema.cardinalities[k]) + " of feature '" +
                  schema.feature_names[k] + "'");
    }
    v.push_back(x);
  }
  return Instance::categorical(std::move(v));
}

PairFile load_pairs_csv(const std::filesystem::path& path, const Schema* expected) {
  std::ifstream in = open_input(path);
  PairFile out;
  std::string line;
  std::size_t lineno = 0;
  std::optional<Layout> lay;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (!lay) {
      lay = parse_header(path, cells);
      if (expected) check_schema_match(path, lay->schema, *expected);
      out.schema = expected ? *expected : lay->schema;
      continue;
    }
    std::size_t width = 0;
    for (auto c : lay->left_cols) width = std::max(width, c + 1);
    for (auto c : lay->right_cols) width = std::max(width, c + 1);
    for (auto c : {lay->left_id, lay->right_id, lay->bb, lay->left_text,
                   lay->right_text}) {
      if (c) width = std::max(width, *c + 1);
    }
    if (cells.size() != width) {
      fail_at(path, lineno, std::min(cells.size(), width) + 1,
              "expected " + std::to_string(width) + " fields, found " +
                  std::to_string(cells.size()));
    }
    InstancePair p;
    if (lay->schema.kind == InstanceKind::kTokens) {
      p.left = Instance::sentence(cells[*lay->left_text]);
      p.right = Instance::sentence(cells[*lay->right_text]);
      if (p.left.size() == 0) fail_at(path, lineno, *lay->left_text + 1, "empty text");
      if (p.right.size() == 0) {
        fail_at(path, lineno, *lay->right_text + 1, "empty text");
      }
    } else {
      p.left = parse_side(path, lineno, cells, lay->left_cols, lay->schema);
      p.right = parse_side(path, lineno, cells, lay->right_cols, lay->schema);
    }
    if (lay->left_id) p.left.set_id(trim(cells[*lay->left_id]));
    if (lay->right_id) p.right.set_id(trim(cells[*lay->right_id]));
    std::optional<double> bb;
    if (lay->bb) {
      const std::string cell = trim(cells[*lay->bb]);
      if (!cell.empty()) {
        double v = 0.0;
        if (!parse_double(cell, v)) {
          fail_at(path, lineno, *lay->bb + 1, "bad bb_distance '" + cell + "'");
        }
        bb = v;
      }
    }
    out.pairs.push_back(std::move(p));
    out.bb_distances.push_back(bb);
    out.line_numbers.push_back(lineno);
  }
  if (!lay) {
    out.schema = expected ? *expected : Schema::numeric(std::size_t{0});
    out.warnings.push_back(path.string() + ": empty file");
  } else if (out.pairs.empty()) {
    out.warnings.push_back(path.string() + ": no data rows");
  }
  return out;
}

PairFile load_pairs_jsonl(const std::filesystem::path& path, const Schema* expected) {
  std::ifstream in = open_input(path);
  PairFile out;
  std::string line;
  std::size_t lineno = 0;
  std::optional<Schema> schema;
  if (expected) schema = *expected;
  std::vector<std::size_t> max_cat;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      fail_at(path, lineno, e.byte, "invalid JSON");
    }
    try {
      if (j.is_object() && j.contains("schema") && !j.contains("left")) {
        Schema s = schema_from_json(j.at("schema"));
        if (expected) check_schema_match(path, s, *expected);
        schema = s;
        continue;
      }
      InstancePair p = pair_from_json(j);
      if (!schema) {
        if (p.left.kind() == InstanceKind::kNumeric) {
          schema = Schema::numeric(p.left.size());
        } else if (p.left.kind() == InstanceKind::kTokens) {
          schema = Schema::tokens();
        }
      }
      if (schema) {
        validate(p, *schema);
      } else {
        // Categorical without a declared schema: infer cardinalities.
        if (max_cat.empty()) max_cat.assign(p.left.size(), 0);
        if (p.left.size() != max_cat.size()) {
          fail_at(path, lineno, 0, "feature count differs from earlier rows");
        }
        for (const Instance* side : {&p.left, &p.right}) {
          for (std::size_t k = 0; k < max_cat.size(); ++k) {
            max_cat[k] = std::max(max_cat[k], side->categories()[k] + 1);
          }
        }
      }
      std::optional<double> bb;
      if (j.contains("bb_distance") && !j.at("bb_distance").is_null()) {
        bb = j.at("bb_distance").get<double>();
      }
      out.pairs.push_back(std::move(p));
      out.bb_distances.push_back(bb);
      out.line_numbers.push_back(lineno);
    } catch (const Json::exception& e) {
      fail_at(path, lineno, 0, e.what());
    } catch (const ValidationError& e) {
      fail_at(path, lineno, 0, e.what());
    }
  }
  if (!schema && !max_cat.empty()) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < max_cat.size(); ++k) {
      names.push_back("x" + std::to_string(k));
    }
    schema = Schema::categorical(std::move(names), max_cat);
    out.warnings.push_back(path.string() +
                           ": categorical cardinalities inferred from the data");
  }
  out.schema = schema.value_or(Schema::numeric(std::size_t{0}));
  if (out.pairs.empty()) out.warnings.push_back(path.string() + ": empty file");
  return out;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

PairFile load_pairs(const std::filesystem::path& path, const Schema* expected) {
  return is_json_path(path) ? load_pairs_jsonl(path, expected)
                            : load_pairs_csv(path, expected);
}

void write_pairs_csv(const std::filesystem::path& path, const Schema& schema,
                     std::span<const InstancePair> pairs,
                     std::span<const double> bb_distances) {
  if (!bb_distances.empty() && bb_distances.size() != pairs.size()) {
    throw ValidationError("write_pairs_csv: distance count mismatch");
  }
  std::ofstream out = open_output(path);
  std::vector<std::string> header;
  if (schema.kind == InstanceKind::kTokens) {
    header = {"left_text", "right_text"};
  } else {
    for (const char* side : {"left_", "right_"}) {
      for (std::size_t k = 0; k < schema.num_features(); ++k) {
        std::string h = side + schema.feature_names[k];
        if (schema.kind == InstanceKind::kCategorical) {
          h += ":" + std::to_string(schema.cardinalities[k]);
        }
        header.push_back(h);
      }
    }
  }
  if (!bb_distances.empty()) header.push_back("bb_distance");
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << "\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    validate(pairs[i], schema);
    std::vector<std::string> row;
    if (schema.kind == InstanceKind::kTokens) {
      row = {quote_csv(join_tokens(pairs[i].left)),
             quote_csv(join_tokens(pairs[i].right))};
    } else {
      for (const Instance* side : {&pairs[i].left, &pairs[i].right}) {
        for (std::size_t k = 0; k < schema.num_features(); ++k) {
          row.push_back(schema.kind == InstanceKind::kNumeric
                            ? format_double(side->values()[k])
                            : std::to_string(side->categories()[k]));
        }
      }
    }
    if (!bb_distances.empty()) row.push_back(format_double(bb_distances[i]));
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::vector<Instance> load_instances(const std::filesystem::path& path,
                                     const Schema& schema) {
  std::ifstream in = open_input(path);
  std::vector<Instance> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (schema.kind == InstanceKind::kTokens) {
        if (cells.size() != 1 || trim(cells[0]) != "text") {
          fail_at(path, 1, 0, "token instance files have a single 'text' column");
        }
        width = 1;
        continue;
      }
      width = schema.num_features();
      if (cells.size() != width) {
        fail_at(path, 1, 0, "header has " + std::to_string(cells.size()) +
                                " columns, schema has " + std::to_string(width));
      }
      for (std::size_t k = 0; k < width; ++k) {
        std::string want = schema.feature_names[k];
        if (schema.kind == InstanceKind::kCategorical) {
          want += ":" + std::to_string(schema.cardinalities[k]);
        }
        if (trim(cells[k]) != want) {
          fail_at(path, 1, k + 1, "expected column '" + want + "'");
        }
      }
      continue;
    }
    if (cells.size() != width) {
      fail_at(path, lineno, std::min(cells.size(), width) + 1,
              "expected " + std::to_string(width) + " fields, found " +
                  std::to_string(cells.size()));
    }
    if (schema.kind == InstanceKind::kTokens) {
      Instance inst = Instance::sentence(cells[0]);
      if (inst.size() == 0) fail_at(path, lineno, 1, "empty text");
      out.push_back(std::move(inst));
      continue;
    }
    std::vector<std::size_t> cols(width);
    for (std::size_t k = 0; k < width; ++k) cols[k] = k;
    out.push_back(parse_side(path, lineno, cells, cols, schema));
  }
  return out;
}

void write_instances_csv(const std::filesystem::path& path, const Schema& schema,
                         std::span<const Instance> instances) {
  std::ofstream out = open_output(path);
  if (schema.kind == InstanceKind::kTokens) {
    out << "text\n";
    for (const Instance& inst : instances) out << quote_csv(join_tokens(inst)) << "\n";
    return;
  }
  for (std::size_t k = 0; k < schema.num_features(); ++k) {
    out << (k ? "," : "") << schema.feature_names[k];
    if (schema.kind == InstanceKind::kCategorical) {
      out << ":" << schema.cardinalities[k];
    }
  }
  out << "\n";
  for (const Instance& inst : instances) {
    validate(inst, schema);
    for (std::size_t k = 0; k < schema.num_features(); ++k) {
      out << (k ? "," : "")
          << (schema.kind == InstanceKind::kNumeric
                  ? format_double(inst.values()[k])
                  : std::to_string(inst.categories()[k]));
    }
    out << "\n";
  }
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::map<std::string, Eigen::VectorXd> load_embeddings(
    const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::map<std::string, Eigen::VectorXd> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      Json j = Json::parse(line);
      std::string id = j.at("id").get<std::string>();
      std::vector<double> v = j.at("vector").get<std::vector<double>>();
      if (!out.emplace(id, Eigen::Map<const Eigen::VectorXd>(
                               v.data(), static_cast<Eigen::Index>(v.size())))
               .second) {
        fail_at(path, lineno, 0, "duplicate id '" + id + "'");
      }
    } catch (const Json::parse_error& e) {
      fail_at(path, lineno, e.byte, "invalid JSON");
    } catch (const Json::exception& e) {
      fail_at(path, lineno, 0, e.what());
    }
  }
  if (out.empty()) throw ValidationError(path.string() + ": no embeddings");
  return out;
}

std::shared_ptr<TableOracle> load_table_oracle(const std::filesystem::path& path,
                                               bool symmetric) {
  std::ifstream in = open_input(path);
  auto table = std::make_shared<TableOracle>(symmetric);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      Json j = Json::parse(line);
      table->insert(pair_from_json(j), j.at("distance").get<double>());
    } catch (const Json::parse_error& e) {
      fail_at(path, lineno, e.byte, "invalid JSON");
    } catch (const Json::exception& e) {
      fail_at(path, lineno, 0, e.what());
    } catch (const ValidationError& e) {
      fail_at(path, lineno, 0, e.what());
    }
  }
  return table;
}

}  // namespace simexplain
