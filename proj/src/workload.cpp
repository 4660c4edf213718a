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

#include "xbarlife/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "xbarlife/error.hpp"

namespace xbarlife {

namespace {

using json = nlohmann::json;

std::string synapse_label(SynapseId id) {
  return "synapse " + std::to_string(id);
}

// std:: distributions are implementation-defined; only the engine is
// portable, so the mappings below are spelled out.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }

  double normal() {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> parse_args(std::string_view inside, std::string_view spec) {
  std::vector<double> args;
  std::size_t pos = 0;
  while (pos <= inside.size()) {
    std::size_t comma = inside.find(',', pos);
    if (comma == std::string_view::npos) comma = inside.size();
    std::string token(inside.substr(pos, comma - pos));
    token.erase(std::remove_if(token.begin(), token.end(), ::isspace),
                token.end());
    if (token.empty())
      throw ConfigError("empty argument in distribution '" +
                        std::string(spec) + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size())
      throw ConfigError("bad number '" + token + "' in distribution '" +
                        std::string(spec) + "'");
    args.push_back(v);
    pos = comma + 1;
  }
  return args;
}

std::uint64_t as_count(double v, std::string_view spec) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e18)
    throw ConfigError("distribution '" + std::string(spec) +
                      "' needs non-negative integer bounds");
  return static_cast<std::uint64_t>(v);
}

std::string fmt_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void ClusteredWorkload::validate(std::optional<std::size_t> capacity) const {
  if (!(std::isfinite(window_seconds) && window_seconds > 0.0))
    throw ConfigError("workload window_seconds must be > 0");
  if (capacity && synapses.size() > *capacity)
    throw CapacityError("workload has " + std::to_string(synapses.size()) +
                        " synapses but the crossbar holds " +
                        std::to_string(*capacity));
  std::unordered_set<SynapseId> seen;
  seen.reserve(synapses.size());
  for (const Synapse& s : synapses) {
    if (!seen.insert(s.id).second)
      throw ConfigError("duplicate synapse_id " + std::to_string(s.id));
    if (!s.times) continue;
    const auto& t = *s.times;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (!std::isfinite(t[k]) || t[k] < 0.0 || t[k] > window_seconds)
        throw ConfigError(synapse_label(s.id) + ": spike time " +
                          fmt_number(t[k]) + " outside [0, window]");
      if (k > 0 && !(t[k] > t[k - 1]))
        throw ConfigError(synapse_label(s.id) +
                          ": spike times not strictly increasing at index " +
                          std::to_string(k));
    }
    if (t.size() != s.spikes_per_image)
      throw ConfigError(synapse_label(s.id) + ": spikes_per_image " +
                        std::to_string(s.spikes_per_image) +
                        " does not match " + std::to_string(t.size()) +
                        " spike times");
  }
}

double average_isi(std::span<const double> times) {
  const std::size_t k = times.size();
  if (k < 2)
    throw DomainError("inter-spike interval needs at least two spikes");
  double sum = 0.0;
  for (std::size_t i = 1; i < k; ++i) sum += times[i] - times[i - 1];
  return sum / static_cast<double>(k - 1);
}

SpikeDistribution parse_distribution(std::string_view spec) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string_view::npos || close != spec.size() - 1 ||
      close < open)
    throw ConfigError("distribution '" + std::string(spec) +
                      "' is not of the form name(args)");
  const std::string_view name = spec.substr(0, open);
  const auto args = parse_args(spec.substr(open + 1, close - open - 1), spec);
  if (name == "uniform") {
    if (args.size() != 2)
      throw ConfigError("uniform(lo,hi) takes two arguments");
    UniformSpikes u{as_count(args[0], spec), as_count(args[1], spec)};
    if (u.lo > u.hi) throw ConfigError("uniform(lo,hi) needs lo <= hi");
    return u;
  }
  if (name == "lognormal") {
    if (args.size() != 2)
      throw ConfigError("lognormal(mu,sigma) takes two arguments");
    if (!(args[1] >= 0.0) || !std::isfinite(args[0]))
      throw ConfigError("lognormal needs finite mu and sigma >= 0");
    return LogNormalSpikes{args[0], args[1]};
  }
  if (name == "zipf") {
    if (args.empty() || args.size() > 2)
      throw ConfigError("zipf(s) or zipf(s,k_max)");
    ZipfSpikes z{args[0], 100};
    if (!(z.s >= 0.0) || !std::isfinite(z.s))
      throw ConfigError("zipf exponent must be >= 0");
    if (args.size() == 2) z.k_max = as_count(args[1], spec);
    if (z.k_max < 1) throw ConfigError("zipf k_max must be >= 1");
    return z;
  }
  throw ConfigError("unknown distribution '" + std::string(name) +
                    "' (expected uniform, lognormal or zipf)");
}

std::string to_string(const SpikeDistribution& d) {
  struct Visitor {
    std::string operator()(const UniformSpikes& u) const {
      return "uniform(" + std::to_string(u.lo) + "," + std::to_string(u.hi) +
             ")";
    }
    std::string operator()(const LogNormalSpikes& l) const {
      return "lognormal(" + fmt_number(l.mu) + "," + fmt_number(l.sigma) + ")";
    }
    std::string operator()(const ZipfSpikes& z) const {
      return "zipf(" + fmt_number(z.s) + "," + std::to_string(z.k_max) + ")";
    }
  };
  return std::visit(Visitor{}, d);
}

ClusteredWorkload generate_workload(std::size_t n_synapses,
                                    const SpikeDistribution& distribution,
                                    std::uint64_t seed) {
  ClusteredWorkload w;
  w.cluster_id = "synthetic-" + to_string(distribution) + "-seed" +
                 std::to_string(seed);
  w.window_seconds = 1.0;
  w.synapses.resize(n_synapses);
  Stream rng(seed);

  std::vector<double> zipf_cdf;
  if (const auto* z = std::get_if<ZipfSpikes>(&distribution)) {
    zipf_cdf.resize(z->k_max);
    double acc = 0.0;
    for (std::uint64_t k = 1; k <= z->k_max; ++k) {
      acc += std::pow(static_cast<double>(k), -z->s);
      zipf_cdf[k - 1] = acc;
    }
    for (double& c : zipf_cdf) c /= acc;
  }

  for (std::size_t i = 0; i < n_synapses; ++i) {
    Synapse& s = w.synapses[i];
    s.id = i;
    if (const auto* u = std::get_if<UniformSpikes>(&distribution)) {
      s.spikes_per_image = rng.uniform_int(u->lo, u->hi);
    } else if (const auto* l = std::get_if<LogNormalSpikes>(&distribution)) {
      const double v = std::exp(l->mu + l->sigma * rng.normal());
      s.spikes_per_image = static_cast<std::uint64_t>(std::llround(
          std::min(v, 1e15)));
    } else {
      const double u = rng.uniform01();
      const auto it = std::upper_bound(zipf_cdf.begin(), zipf_cdf.end(), u);
      const auto k = static_cast<std::uint64_t>(it - zipf_cdf.begin()) + 1;
      s.spikes_per_image = std::min<std::uint64_t>(k, zipf_cdf.size());
    }
  }
  return w;
}

ClusteredWorkload parse_workload_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed workload JSON: ") + e.what());
  }
  ClusteredWorkload w;
  try {
    if (!doc.is_object()) throw ConfigError("workload must be a JSON object");
    const auto& cid = doc.at("cluster_id");
    w.cluster_id = cid.is_string() ? cid.get<std::string>() : cid.dump();
    w.window_seconds = doc.value("window_seconds", 1.0);
    const auto& list = doc.at("synapses");
    if (!list.is_array()) throw ConfigError("'synapses' must be an array");
    w.synapses.reserve(list.size());
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto& rec = list[k];
      if (!rec.is_object() || !rec.contains("id") ||
          !rec["id"].is_number_unsigned())
        throw ConfigError("synapse record " + std::to_string(k) +
                          " needs a non-negative integer 'id'");
      Synapse s;
      s.id = rec["id"].get<SynapseId>();
      if (!rec.contains("spikes_per_image") ||
          !rec["spikes_per_image"].is_number_unsigned())
        throw ConfigError(synapse_label(s.id) +
                          ": 'spikes_per_image' must be a non-negative "
                          "integer");
      s.spikes_per_image = rec["spikes_per_image"].get<std::uint64_t>();
      if (rec.contains("times")) {
        if (!rec["times"].is_array())
          throw ConfigError(synapse_label(s.id) + ": 'times' must be an array");
        s.times = rec["times"].get<std::vector<double>>();
      }
      w.synapses.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid workload: ") + e.what());
  }
  w.validate();
  return w;
}

ClusteredWorkload load_workload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read workload file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workload_json(buf.str());
}

std::string workload_to_json(const ClusteredWorkload& w) {
  json doc;
  doc["cluster_id"] = w.cluster_id;
  doc["window_seconds"] = w.window_seconds;
  json list = json::array();
  for (const Synapse& s : w.synapses) {
    json rec;
    rec["id"] = s.id;
    rec["spikes_per_image"] = s.spikes_per_image;
    if (s.times) rec["times"] = *s.times;
    list.push_back(std::move(rec));
  }
  doc["synapses"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string workload_to_csv(const ClusteredWorkload& w) {
  std::string out = "synapse_id,spikes_per_image\n";
  for (const Synapse& s : w.synapses)
    out += std::to_string(s.id) + "," + std::to_string(s.spikes_per_image) +
           "\n";
  return out;
}

}  // namespace xbarlife
