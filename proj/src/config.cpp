// Copyright 2026 The xbarlife Authors
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

#include "xbarlife/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "xbarlife/error.hpp"

namespace xbarlife {

namespace {

using Value = std::variant<double, bool, std::string>;

struct Entry {
  Value value;
  int line = 0;
  bool used = false;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

Value parse_value(const std::string& raw, int line) {
  if (raw.empty()) fail(line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
    return raw.substr(1, raw.size() - 2);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string digits;
  for (char c : raw)
    if (c != '_') digits += c;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(digits, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != digits.size() || !std::isfinite(v))
    fail(line, "cannot parse value '" + raw + "'");
  return v;
}

const std::set<std::string> kSections = {"technology", "crossbar", "cells",
                                         "cost", "calibration"};

Table parse_table(std::string_view text) {
  Table table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // Strip comments outside strings.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string body = trim(std::string_view(raw).substr(0, cut));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail(line, "malformed section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (section.empty()) fail(line, "empty section name");
      if (!kSections.count(section) && section.rfind("node.", 0) != 0)
        fail(line, "unknown config section [" + section + "]");
      table[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) fail(line, "empty key");
    if (section.empty()) fail(line, "key '" + key + "' outside any section");
    auto& sec = table[section];
    if (sec.count(key)) fail(line, "duplicate key '" + key + "'");
    sec[key] = Entry{parse_value(trim(std::string_view(body).substr(eq + 1)),
                                 line)};
    sec[key].line = line;
  }
  return table;
}

class Reader {
 public:
  explicit Reader(Table& t) : table_(t) {}

  void number(const std::string& sec, const std::string& key, double& out) {
    if (Entry* e = find(sec, key)) {
      const double* v = std::get_if<double>(&e->value);
      if (!v) fail(e->line, "'" + key + "' must be a number");
      out = *v;
    }
  }

  template <typename Int>
  void integer(const std::string& sec, const std::string& key, Int& out) {
    double v = static_cast<double>(out);
    if (Entry* e = find(sec, key)) {
      number(sec, key, v);
      if (v < 0.0 || v != std::floor(v) || v > 1e12)
        fail(e->line, "'" + key + "' must be a non-negative integer");
      out = static_cast<Int>(v);
    }
  }

  bool text(const std::string& sec, const std::string& key, std::string& out) {
    if (Entry* e = find(sec, key)) {
      if (const auto* s = std::get_if<std::string>(&e->value)) {
        out = *s;
        return true;
      }
      fail(e->line, "'" + key + "' must be a string");
    }
    return false;
  }

  bool has(const std::string& sec, const std::string& key) const {
    const auto it = table_.find(sec);
    return it != table_.end() && it->second.count(key);
  }

  int line_of(const std::string& sec, const std::string& key) const {
    return table_.at(sec).at(key).line;
  }

  void reject_unused() const {
    for (const auto& [sec, entries] : table_)
      for (const auto& [key, e] : entries)
        if (!e.used) fail(e.line, "unknown key '" + key + "' in [" + sec + "]");
  }

 private:
  Entry* find(const std::string& sec, const std::string& key) {
    const auto it = table_.find(sec);
    if (it == table_.end()) return nullptr;
    const auto jt = it->second.find(key);
    if (jt == it->second.end()) return nullptr;
    jt->second.used = true;
    return &jt->second;
  }

  Table& table_;
};


int parse_node_name(const std::string& section) {
  const std::string digits = section.substr(5);
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("section [" + section + "] must be [node.<nm>]");
  return std::stoi(digits);
}

}  // namespace

void ToolConfig::finalize() {
  technology.validate();
  levels.validate();
  cost.validate();
  if (!(std::isfinite(r_access) && r_access >= 0.0))
    throw ConfigError("cells.r_access must be >= 0 ohm");
  if (n < 2) throw ConfigError("crossbar.n must be >= 2");
  if (!(r_driver > 0.0)) throw ConfigError("crossbar.r_driver must be > 0");
  if (!(target_current > 0.0))
    throw ConfigError("crossbar.target_current must be > 0");
  if (!(v_stress > 0.0)) throw ConfigError("crossbar.v_stress must be > 0");
  if (!(pulse_width > 0.0))
    throw ConfigError("crossbar.pulse_width must be > 0");
  if (!(tolerance > 0.0)) throw ConfigError("crossbar.tolerance must be > 0");
  if (!(r_segment >= 0.0))
    throw ConfigError("calibration.r_segment must be >= 0");
  if (!(calibration_target > 0.0 && calibration_target < 100.0))
    throw ConfigError("calibration.target_disparity must be in (0, 100)");
  if (reference_node <= 0)
    throw ConfigError("calibration.reference_node must be > 0");
  for (int nm : {90, 65, 45, 32})
    nodes.try_emplace(nm, NodeProfile{nm, double(nm), -1, -1});
  for (auto& [nm, prof] : nodes) {
    prof.node_nm = nm;
    if (!(prof.feature_size > 0.0))
      throw ConfigError("node " + std::to_string(nm) +
                        ": feature_size must be > 0");
    const double scaled = r_segment * reference_node / prof.feature_size;
    if (prof.r_wordline_segment < 0.0) prof.r_wordline_segment = scaled;
    if (prof.r_bitline_segment < 0.0) prof.r_bitline_segment = scaled;
    if (prof.c_wordline_segment <= 0.0) prof.c_wordline_segment = c_wordline_segment;
    if (prof.c_bitline_segment <= 0.0) prof.c_bitline_segment = c_bitline_segment;
  }
  if (!nodes.count(default_node))
    throw ConfigError("technology.node " + std::to_string(default_node) +
                      " has no [node." + std::to_string(default_node) +
                      "] profile");
}

const NodeProfile& ToolConfig::node(int node_nm) const {
  const auto it = nodes.find(node_nm);
  if (it == nodes.end())
    throw ConfigError("no technology profile for " + std::to_string(node_nm) +
                      " nm");
  return it->second;
}

CrossbarGeometry ToolConfig::geometry(std::size_t size, int node_nm) const {
  const NodeProfile& p = node(node_nm);
  CrossbarGeometry g;
  g.n = size;
  g.r_wordline_segment = p.r_wordline_segment;
  g.r_bitline_segment = p.r_bitline_segment;
  g.r_driver = r_driver;
  g.c_wordline_segment = p.c_wordline_segment;
  g.c_bitline_segment = p.c_bitline_segment;
  g.validate();
  return g;
}

TechnologyParams ToolConfig::technology_for(int node_nm) const {
  TechnologyParams t = technology;
  t.feature_size = node(node_nm).feature_size;
  return t;
}

CellStateMatrix ToolConfig::uniform_cells(std::size_t size,
                                          ResistanceState s) const {
  return CellStateMatrix::uniform(size, s, levels, r_access);
}

SolveOptions ToolConfig::solve_options() const {
  SolveOptions o;
  o.tolerance = tolerance;
  return o;
}

std::vector<int> ToolConfig::node_list() const {
  std::vector<int> out;
  for (const auto& [nm, p] : nodes) out.push_back(nm);
  // Coarsest node first.
  return {out.rbegin(), out.rend()};
}

std::string ToolConfig::canonical_json() const {
  nlohmann::json j;
  const auto& t = technology;
  j["technology"] = {{"v0", t.v0}, {"e_a", t.e_a},
                     {"temperature", t.temperature},
                     {"k_boltzmann", t.k_boltzmann}, {"a0", t.a0},
                     {"oxide_thickness", t.oxide_thickness},
                     {"q_charge", t.q_charge}, {"gamma0", t.gamma0},
                     {"beta", t.beta}, {"g0", t.g0}, {"g_min", t.g_min},
                     {"horizon", t.horizon}, {"node", default_node}};
  j["crossbar"] = {{"n", n}, {"r_driver", r_driver},
                   {"target_current", target_current}, {"v_stress", v_stress},
                   {"pulse_width", pulse_width}, {"tolerance", tolerance},
                   {"read_mode", std::string(to_string(read_mode))},
                   {"read_state", std::string(to_string(read_state))}};
  j["cells"] = {{"r_hrs", levels.hrs}, {"r_lrs1", levels.lrs1},
                {"r_lrs2", levels.lrs2}, {"r_lrs3", levels.lrs3},
                {"r_access", r_access}};
  j["cost"] = {{"transistors_per_neuron", cost.transistors_per_neuron},
               {"capacitors_per_neuron", cost.capacitors_per_neuron},
               {"bits_per_cell", cost.bits_per_cell},
               {"transistor_area", cost.transistor_area},
               {"capacitor_area", cost.capacitor_area},
               {"nvm_area", cost.nvm_area}};
  j["calibration"] = {{"n", calibration_n},
                      {"target_disparity", calibration_target},
                      {"reference_node", reference_node},
                      {"r_segment", r_segment}};
  nlohmann::json nj = nlohmann::json::object();
  for (const auto& [nm, p] : nodes)
    nj[std::to_string(nm)] = {{"feature_size", p.feature_size},
                              {"r_wordline_segment", p.r_wordline_segment},
                              {"r_bitline_segment", p.r_bitline_segment}};
  j["nodes"] = std::move(nj);
  return j.dump();
}

ToolConfig default_config() {
  ToolConfig c;
  c.finalize();
  return c;
}

ToolConfig parse_config(std::string_view text) {
  Table table = parse_table(text);

  ToolConfig c;
  Reader r(table);
  auto& t = c.technology;
  r.integer("technology", "node", c.default_node);
  r.number("technology", "temperature", t.temperature);
  r.number("technology", "v0", t.v0);
  r.number("technology", "e_a", t.e_a);
  r.number("technology", "k_boltzmann", t.k_boltzmann);
  r.number("technology", "a0", t.a0);
  r.number("technology", "oxide_thickness", t.oxide_thickness);
  r.number("technology", "q_charge", t.q_charge);
  r.number("technology", "gamma0", t.gamma0);
  r.number("technology", "beta", t.beta);
  r.number("technology", "g0", t.g0);
  r.number("technology", "g_min", t.g_min);
  r.number("technology", "horizon", t.horizon);

  r.integer("crossbar", "n", c.n);
  r.number("crossbar", "r_driver", c.r_driver);
  r.number("crossbar", "target_current", c.target_current);
  r.number("crossbar", "v_stress", c.v_stress);
  r.number("crossbar", "pulse_width", c.pulse_width);
  r.number("crossbar", "tolerance", c.tolerance);
  r.number("crossbar", "c_wordline_segment", c.c_wordline_segment);
  r.number("crossbar", "c_bitline_segment", c.c_bitline_segment);
  std::string word;
  if (r.text("crossbar", "read_mode", word)) c.read_mode = parse_read_mode(word);
  if (r.text("crossbar", "read_state", word))
    c.read_state = parse_resistance_state(word);

  double hrs = c.levels.hrs, lrs3 = c.levels.lrs3;
  r.number("cells", "r_hrs", hrs);
  r.number("cells", "r_lrs3", lrs3);
  if (!(hrs > 0.0 && lrs3 > 0.0))
    throw ConfigError("cells.r_hrs and cells.r_lrs3 must be > 0");
  c.levels = StateResistances::log_spaced(hrs, lrs3);
  r.number("cells", "r_lrs1", c.levels.lrs1);
  r.number("cells", "r_lrs2", c.levels.lrs2);
  r.number("cells", "r_access", c.r_access);

  r.integer("cost", "transistors_per_neuron", c.cost.transistors_per_neuron);
  r.integer("cost", "capacitors_per_neuron", c.cost.capacitors_per_neuron);
  r.integer("cost", "bits_per_cell", c.cost.bits_per_cell);
  r.number("cost", "transistor_area", c.cost.transistor_area);
  r.number("cost", "capacitor_area", c.cost.capacitor_area);
  r.number("cost", "nvm_area", c.cost.nvm_area);

  r.integer("calibration", "n", c.calibration_n);
  r.number("calibration", "target_disparity", c.calibration_target);
  r.integer("calibration", "reference_node", c.reference_node);
  r.number("calibration", "r_segment", c.r_segment);

  for (const auto& [sec, entries] : table) {
    if (sec.rfind("node.", 0) != 0) continue;
    const int nm = parse_node_name(sec);
    NodeProfile p{nm, double(nm), -1.0, -1.0};
    r.number(sec, "feature_size", p.feature_size);
    r.number(sec, "r_wordline_segment", p.r_wordline_segment);
    r.number(sec, "r_bitline_segment", p.r_bitline_segment);
    r.number(sec, "c_wordline_segment", p.c_wordline_segment);
    r.number(sec, "c_bitline_segment", p.c_bitline_segment);
    if (r.has(sec, "r_wordline_segment") && p.r_wordline_segment < 0.0)
      fail(r.line_of(sec, "r_wordline_segment"), "resistance must be >= 0");
    if (r.has(sec, "r_bitline_segment") && p.r_bitline_segment < 0.0)
      fail(r.line_of(sec, "r_bitline_segment"), "resistance must be >= 0");
    c.nodes[nm] = p;
  }
  r.reject_unused();
  c.finalize();
  return c;
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace xbarlife
