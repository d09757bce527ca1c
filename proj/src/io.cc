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

#include "igfair/io.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace igfair {
namespace {

bool ReadRecord(std::istream& in, std::vector<std::string>& cells) {
  cells.clear();
  std::string cell;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell += '"';
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (in_quotes) throw Error("unterminated quoted CSV field");
  if (!any) return false;
  cells.push_back(std::move(cell));
  return true;
}

bool IsBlank(const std::vector<std::string>& cells) {
  return cells.size() == 1 && cells[0].find_first_not_of(" \t") == std::string::npos;
}

std::string QuoteCell(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int AsInt(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw Error(std::string(what) + " must be an integer");
  return j.get<int>();
}

Rational AsRational(const Json& j, const char* what) {
  if (j.is_string()) return ParseRational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) {
    // Re-read the shortest round-trip literal so 0.8 stays 4/5.
    return ParseRational(Json(j.get<double>()).dump());
  }
  throw Error(std::string(what) + " must be a number");
}

}  // namespace

Table ReadCsv(std::istream& in) {
  Table table;
  std::vector<std::string> cells;
  bool have_header = false;
  while (ReadRecord(in, cells)) {
    if (IsBlank(cells)) continue;
    if (!have_header) {
      if (!cells.empty() && cells[0].rfind("\xEF\xBB\xBF", 0) == 0) cells[0].erase(0, 3);
      table.header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error("CSV row " + std::to_string(table.rows.size() + 1) + " has " +
                  std::to_string(cells.size()) + " cells, header has " +
                  std::to_string(table.header.size()));
    }
    table.rows.push_back(cells);
  }
  if (!have_header) throw Error("CSV input has no header");
  return table;
}

void WriteCsv(const Table& table, std::ostream& out) {
  auto write_row = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << QuoteCell(row[c]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

Json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

AttributeSchema SchemaFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("attributes") || !json["attributes"].is_array()) {
    throw Error("schema must be an object with an \"attributes\" array");
  }
  std::vector<Attribute> attributes;
  for (const Json& a : json["attributes"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string() ||
        !a.contains("values") || !a["values"].is_array()) {
      throw Error("schema attribute needs a string \"name\" and a \"values\" array");
    }
    Attribute attribute;
    attribute.name = a["name"].get<std::string>();
    for (const Json& v : a["values"]) {
      if (!v.is_string()) throw Error("attribute values must be strings");
      attribute.values.push_back(v.get<std::string>());
    }
    attributes.push_back(std::move(attribute));
  }
  return AttributeSchema::Create(std::move(attributes));
}

Json SchemaToJson(const AttributeSchema& schema) {
  Json attributes = Json::array();
  for (int a = 0; a < schema.num_attributes(); ++a) {
    attributes.push_back({{"name", schema.attribute(a).name},
                          {"values", schema.attribute(a).values}});
  }
  return Json{{"attributes", attributes}};
}

Dataset ReadDatasetCsv(const std::filesystem::path& path, const AttributeSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return LoadDataset(ReadCsv(in), schema);
}

Table DatasetToTable(const Dataset& dataset) {
  const AttributeSchema& schema = dataset.schema();
  Table table;
  table.header = {"id", "score"};
  for (int a = 0; a < schema.num_attributes(); ++a) table.header.push_back(schema.attribute(a).name);
  for (int i = 0; i < dataset.size(); ++i) {
    const Item& item = dataset.item(i);
    std::vector<std::string> row = {item.id, item.score_text};
    for (ValueId v : item.labels) row.push_back(schema.value_name(v));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string DatasetToCsv(const Dataset& dataset) {
  std::ostringstream out;
  WriteCsv(DatasetToTable(dataset), out);
  return out.str();
}

ConstraintSpec ConstraintSpecFromJson(const Json& json) {
  if (!json.is_object()) throw Error("constraint file must be a JSON object");
  ConstraintSpec spec;
  std::string mode = "explicit";
  if (json.contains("mode")) {
    if (!json["mode"].is_string()) throw Error("constraint \"mode\" must be a string");
    mode = json["mode"].get<std::string>();
  }
  if (mode == "explicit") {
    spec.kind = ConstraintSpec::Kind::kExplicit;
    if (json.contains("k")) spec.k = AsInt(json["k"], "k");
    if (json.contains("bounds")) {
      if (!json["bounds"].is_array()) throw Error("\"bounds\" must be an array");
      for (const Json& b : json["bounds"]) {
        if (!b.is_object() || !b.contains("value") || !b["value"].is_string() ||
            !b.contains("position") || !b.contains("min")) {
          throw Error("each bound needs \"value\", \"position\" and \"min\"");
        }
        spec.bounds.push_back({b["value"].get<std::string>(), AsInt(b["position"], "position"),
                               AsInt(b["min"], "min")});
      }
    }
  } else if (mode == "proportional") {
    spec.kind = ConstraintSpec::Kind::kProportional;
    if (!json.contains("alpha")) throw Error("proportional constraints need \"alpha\"");
    spec.alpha = AsRational(json["alpha"], "alpha");
    if (json.contains("checkpoints")) {
      if (!json["checkpoints"].is_array()) throw Error("\"checkpoints\" must be an array");
      for (const Json& c : json["checkpoints"]) spec.checkpoints.push_back(AsInt(c, "checkpoint"));
    }
  } else {
    throw Error("unknown constraint mode '" + mode + "'");
  }
  return spec;
}

DiversityConstraints ResolveConstraints(const ConstraintSpec& spec, const Dataset& dataset, int k,
                                        bool drop_beyond_k) {
  const AttributeSchema& schema = dataset.schema();
  if (spec.kind == ConstraintSpec::Kind::kProportional) {
    std::vector<int> checkpoints;
    for (int c : spec.checkpoints) {
      if (drop_beyond_k && c > k) continue;
      checkpoints.push_back(c);
    }
    if (checkpoints.empty() || drop_beyond_k) checkpoints.push_back(k);
    return ProportionalBounds(dataset, k, checkpoints, spec.alpha);
  }
  std::vector<BoundEntry> entries;
  for (const auto& b : spec.bounds) {
    const std::optional<ValueId> v = schema.FindValue(b.value);
    if (!v) throw Error("constraint refers to unknown value '" + b.value + "'");
    if (drop_beyond_k && b.position > k) continue;
    entries.push_back({*v, b.position, b.min});
  }
  return DiversityConstraints::Create(k, schema.num_values(), entries);
}

Json ConstraintsToJson(const DiversityConstraints& constraints, const AttributeSchema& schema) {
  Json bounds = Json::array();
  for (const BoundEntry& e : constraints.Entries()) {
    bounds.push_back({{"value", schema.value_name(e.value)},
                      {"position", e.position},
                      {"min", e.min}});
  }
  return Json{{"mode", "explicit"}, {"k", constraints.k()}, {"bounds", bounds}};
}

Json RationalToJson(const Rational& value) {
  return Json{{"exact", ToFractionString(value)}, {"value", ToDouble(value)}};
}

Json OutcomeToJson(const Dataset& dataset, const Outcome& outcome) {
  Json ranking = Json::array();
  int position = 1;
  for (int i : outcome.ranking()) {
    ranking.push_back({{"position", position++},
                       {"id", dataset.item(i).id},
                       {"score", dataset.item(i).score_text}});
  }
  return Json{{"k", outcome.k()},
              {"utility", ToDecimalString(outcome.utility())},
              {"ranking", ranking}};
}

Json IgfVectorToJson(const Dataset& dataset, const IgfVector& igf) {
  const AttributeSchema& schema = dataset.schema();
  Json groups = Json::array();
  for (const auto& [v, value] : igf.values) {
    Json g = {{"value", schema.value_name(v)},
              {"attribute", schema.attribute(schema.attribute_of(v)).name}};
    g["igf"] = RationalToJson(value);
    groups.push_back(std::move(g));
  }
  Json out = {{"mode", ModeName(igf.mode)}, {"groups", groups}};
  if (!igf.values.empty()) out["min"] = RationalToJson(igf.Min());
  return out;
}

std::vector<int> RankingFromJson(const Json& json, const Dataset& dataset) {
  const Json* list = &json;
  if (json.is_object()) {
    if (!json.contains("ranking")) throw Error("ranking file has no \"ranking\" field");
    list = &json["ranking"];
  }
  if (!list->is_array()) throw Error("\"ranking\" must be an array");
  std::vector<std::pair<int, int>> placed;
  int next = 1;
  for (const Json& entry : *list) {
    std::string id;
    int position = next;
    if (entry.is_string()) {
      id = entry.get<std::string>();
    } else if (entry.is_object() && entry.contains("id") && entry["id"].is_string()) {
      id = entry["id"].get<std::string>();
      if (entry.contains("position")) position = AsInt(entry["position"], "position");
    } else {
      throw Error("ranking entries must be ids or {\"id\", \"position\"} objects");
    }
    ++next;
    placed.emplace_back(position, dataset.ItemIndex(id));
  }
  std::sort(placed.begin(), placed.end());
  std::vector<int> ranking;
  for (size_t p = 0; p < placed.size(); ++p) {
    if (placed[p].first != static_cast<int>(p) + 1) throw Error("ranking positions must be 1..k");
    ranking.push_back(placed[p].second);
  }
  return ranking;
}

std::string DumpJson(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace igfair
