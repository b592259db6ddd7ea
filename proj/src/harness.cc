/* Copyright 2026 The ShardGNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "shardgnn/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "shardgnn/random.h"
#include "shardgnn/sampling.h"

namespace shardgnn {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

using EdgeKey = std::tuple<VertexId, VertexId, uint16_t, double>;

uint64_t HashBits(uint64_t h, double x) {
  uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  return SplitMix64(h ^ bits);
}

size_t NonIsolated(const ImportanceTable& table) {
  size_t n = 0;
  for (size_t i = 0; i < table.size(); ++i) n += !table.Isolated(i);
  return n;
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string Trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool HasColumn(const CsvTable& t, const std::string& name) {
  return std::find(t.header.begin(), t.header.end(), name) != t.header.end();
}

double Cell(const CsvTable& t, size_t row, const std::string& col) {
  const std::string& text = t.rows[row][t.Column(col)];
  try {
    size_t used = 0;
    double x = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchema, fmt::format("row {}: '{}' is not a number in {}", row + 1,
                                                text, col));
  }
}

std::string FormatTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows, bool markdown) {
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    if (markdown) out += "| ";
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c) out += markdown ? " | " : "  ";
      out += fmt::format("{:<{}}", cells[c], width[c]);
    }
    out += markdown ? " |\n" : "\n";
  };
  line(header);
  std::vector<std::string> rule;
  for (size_t w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : rows) line(r);
  return out;
}

}  // namespace

BuildRun TimedBuild(const GraphData& graph, const PartitionPlan& plan, unsigned builders) {
  BuildOptions options;
  options.builders = builders;
  auto start = Clock::now();
  BuildRun run{Partition(graph, plan, options), 0.0};
  run.seconds = SecondsSince(start);
  return run;
}

std::string CheckConservation(const GraphData& graph, const PartitionResult& built) {
  std::vector<EdgeKey> expected;
  expected.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) expected.emplace_back(e.src, e.dst, e.type.code, e.weight);
  std::vector<EdgeKey> stored;
  std::vector<VertexId> owned;
  for (const auto& shard : built.shards) {
    for (VertexId v : shard.owned_vertices()) {
      owned.push_back(v);
      for (const auto& r : shard.OwnedNeighbors(v)) {
        stored.emplace_back(v, r.neighbor, r.edge_type.code, r.weight);
      }
    }
  }
  std::sort(expected.begin(), expected.end());
  std::sort(stored.begin(), stored.end());
  std::sort(owned.begin(), owned.end());
  bool exact = built.plan.source_partitioned();
  if (exact) {
    if (stored.size() != expected.size()) {
      return fmt::format("{} edges stored, {} in the input", stored.size(), expected.size());
    }
    if (stored != expected) return "stored edge multiset differs from the input";
    if (std::adjacent_find(owned.begin(), owned.end()) != owned.end()) {
      return "a vertex is owned by more than one shard";
    }
  } else {
    if (stored.size() < expected.size()) {
      return fmt::format("{} edges stored, fewer than {}", stored.size(), expected.size());
    }
    if (!std::includes(stored.begin(), stored.end(), expected.begin(), expected.end())) {
      return "an input edge is missing from every shard";
    }
  }
  owned.erase(std::unique(owned.begin(), owned.end()), owned.end());
  auto ids = graph.AllVertexIds();
  // Declared vertices without edges are owned too; sources always are.
  if (!std::includes(owned.begin(), owned.end(), ids.begin(), ids.end())) {
    for (const auto& e : graph.edges()) {
      if (!std::binary_search(owned.begin(), owned.end(), e.src)) {
        return fmt::format("source vertex {} is not stored", e.src);
      }
    }
    for (const auto& v : graph.vertices()) {
      if (!std::binary_search(owned.begin(), owned.end(), v.id)) {
        return fmt::format("vertex {} is not stored", v.id);
      }
    }
  }
  return {};
}

double UnionCachedFraction(const ImportanceTable& table, uint32_t h, double tau) {
  size_t eligible = NonIsolated(table);
  if (!eligible) return 0.0;
  size_t selected = 0;
  for (size_t i = 0; i < table.size(); ++i) {
    if (table.Isolated(i)) continue;
    for (uint32_t k = 1; k <= h; ++k) {
      if (table.Imp(i, k) >= tau) {
        ++selected;
        break;
      }
    }
  }
  return static_cast<double>(selected) / static_cast<double>(eligible);
}

std::vector<CacheSweepRow> CacheSweep(const ImportanceTable& table, uint32_t h,
                                      const std::vector<double>& taus) {
  if (h == 0 || h > table.hops()) {
    throw Error(ErrorCode::kUsage, fmt::format("hops {} outside 1..{}", h, table.hops()));
  }
  std::vector<CacheSweepRow> rows;
  for (double tau : taus) {
    // Hop-1 lists are always cached; the threshold governs the deepest hop.
    CacheSweepRow row{tau, CachedFraction(table, h, tau), {}};
    for (uint32_t k = 1; k <= h; ++k) row.per_hop.push_back(CachedFraction(table, k, tau));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> ParseSweep(const std::string& text) {
  double start, stop, step;
  char c1, c2;
  std::istringstream in(text);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof() ||
      step <= 0 || stop < start) {
    throw Error(ErrorCode::kUsage, fmt::format("bad sweep '{}', want start:stop:step", text));
  }
  std::vector<double> out;
  auto steps = static_cast<size_t>(std::floor((stop - start) / step + 1e-9));
  for (size_t i = 0; i <= steps; ++i) {
    double x = start + static_cast<double>(i) * step;
    out.push_back(std::round(x * 1e12) / 1e12);
  }
  return out;
}

CacheSelection SelectTopImportance(const ImportanceTable& table, const CachePolicyConfig& cfg,
                                   size_t budget) {
  if (cfg.h == 0 || cfg.h > table.hops()) {
    throw Error(ErrorCode::kUsage, fmt::format("cache depth {} outside 1..{}", cfg.h, table.hops()));
  }
  struct Scored {
    double score;
    VertexId v;
    uint32_t depth;
  };
  std::vector<Scored> scored;
  for (size_t i = 0; i < table.size(); ++i) {
    if (table.Isolated(i)) continue;
    Scored s{0.0, table.id(i), 0};
    for (uint32_t k = 1; k <= cfg.h; ++k) {
      double tau = cfg.Tau(k);
      double imp = table.Imp(i, k);
      double score = tau > 0 ? imp / tau : (imp > 0 ? kSinkImportance : 0.0);
      s.score = std::max(s.score, score);
      if (imp >= tau) s.depth = k;
    }
    if (s.depth == 0) s.depth = cfg.h;
    scored.push_back(s);
  }
  budget = std::min(budget, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + budget, scored.end(),
                    [](const Scored& a, const Scored& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.v < b.v;
                    });
  std::vector<std::vector<VertexId>> sets(cfg.h);
  for (size_t i = 0; i < budget; ++i) sets[scored[i].depth - 1].push_back(scored[i].v);
  for (auto& s : sets) std::sort(s.begin(), s.end());
  return CacheSelection::FromSets(std::move(sets));
}

std::vector<CacheBenchRow> BenchCache(const GraphData& graph, const ImportanceTable& table,
                                      const CacheBenchConfig& cfg) {
  PartitionPlan plan;
  plan.shards = cfg.shards;
  auto built = Partition(graph, plan);
  auto& shards = built.shards;

  CachePolicyConfig pc;
  pc.h = cfg.hops;
  pc.tau.assign(cfg.hops, cfg.tau);
  size_t budget = cfg.budget < 0
                      ? SelectCacheSet(table, pc).size()
                      : static_cast<size_t>(std::llround(cfg.budget *
                                                         static_cast<double>(NonIsolated(table))));
  CacheSelection importance = SelectTopImportance(table, pc, budget);

  // Equal replica counts per shard: random and lru draw, from the vertices a
  // shard references, as many as importance placed there.
  std::vector<CacheSelection> imp_sel(shards.size(), importance);
  std::vector<CacheSelection> rnd_sel;
  std::vector<std::vector<VertexId>> rnd_sets;
  for (ShardId s = 0; s < shards.size(); ++s) {
    auto refs = shards[s].ReferencedRemoteVertices();
    size_t want = 0;
    for (VertexId v : refs) want += importance.Depth(v) > 0;
    Rng rng(MixSeed({cfg.seed, s, 0x726e64}));
    for (size_t j = 0; j < want; ++j) std::swap(refs[j], refs[j + rng.Below(refs.size() - j)]);
    refs.resize(want);
    std::sort(refs.begin(), refs.end());
    std::vector<std::vector<VertexId>> sets(cfg.hops);
    sets.back() = refs;
    rnd_sel.push_back(CacheSelection::FromSets(std::move(sets)));
    rnd_sets.push_back(std::move(refs));
  }

  std::vector<CacheBenchRow> rows;
  std::vector<uint64_t> reference_entries;
  for (CachePolicy policy : {CachePolicy::kImportance, CachePolicy::kRandom, CachePolicy::kLru}) {
    for (auto& shard : shards) shard.ClearRemoteCache();
    if (policy == CachePolicy::kImportance) MaterializeCache(shards, imp_sel, cfg.hops);
    if (policy == CachePolicy::kRandom) MaterializeCache(shards, rnd_sel, cfg.hops);
    SamplerOptions options;
    options.buckets_per_shard = cfg.buckets_per_shard;
    options.lru = policy == CachePolicy::kLru;
    GraphService service(shards, options);
    std::vector<uint64_t> entries;
    for (ShardId s = 0; s < shards.size(); ++s) {
      if (policy == CachePolicy::kLru) {
        service.SeedLru(s, rnd_sets[s]);
        entries.push_back(rnd_sets[s].size());
      } else {
        entries.push_back(shards[s].CachedVertices().size());
      }
    }
    if (reference_entries.empty()) reference_entries = entries;
    if (entries != reference_entries) {
      throw Error(ErrorCode::kUsage,
                  fmt::format("cache budget mismatch for policy {}", CachePolicyName(policy)));
    }

    service.ResetStats();
    std::vector<double> ms;
    auto start = Clock::now();
    for (size_t r = 0; r < cfg.rounds; ++r) {
      auto roots = service.TraverseSampleGlobal(kAnyEdgeType, cfg.batch,
                                                MixSeed({cfg.seed, r, 0x726f6f74}));
      auto t0 = Clock::now();
      service.NeighborhoodSample(roots, kAnyEdgeType, cfg.hop_nums, MixSeed({cfg.seed, r}));
      ms.push_back(SecondsSince(t0) * 1e3);
    }
    CacheBenchRow row;
    row.seconds = SecondsSince(start);
    auto stats = service.stats();
    row.policy = policy;
    row.cached_entries = std::accumulate(entries.begin(), entries.end(), uint64_t{0});
    row.remote_fetches = stats.remote_fetches;
    row.remote_tasks = stats.remote_tasks;
    row.cache_tasks = stats.cache_tasks;
    row.local_tasks = stats.local_tasks;
    auto lat = Summarize(std::move(ms));
    row.p50_ms = lat.p50_ms;
    row.p90_ms = lat.p90_ms;
    row.p99_ms = lat.p99_ms;
    rows.push_back(row);
  }
  for (auto& shard : shards) shard.ClearRemoteCache();
  return rows;
}

SamplerKind ParseSamplerKind(std::string_view name) {
  for (auto k : {SamplerKind::kTraverse, SamplerKind::kNeighborhood, SamplerKind::kNegative}) {
    if (SamplerKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kUsage, fmt::format("unknown sampler kind '{}'", name));
}

std::string_view SamplerKindName(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kTraverse: return "traverse";
    case SamplerKind::kNeighborhood: return "neighborhood";
    case SamplerKind::kNegative: return "negative";
  }
  return "unknown";
}

LatencySummary Summarize(std::vector<double> ms) {
  LatencySummary s;
  s.calls = ms.size();
  if (ms.empty()) return s;
  std::sort(ms.begin(), ms.end());
  auto at = [&](double q) {
    auto i = static_cast<size_t>(std::ceil(q * static_cast<double>(ms.size()))) - 1;
    return ms[std::min(i, ms.size() - 1)];
  };
  s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  s.p50_ms = at(0.5);
  s.p90_ms = at(0.9);
  s.p99_ms = at(0.99);
  s.max_ms = ms.back();
  return s;
}

LatencySummary BenchSampler(const GraphData& graph, const SampleBenchConfig& cfg) {
  if (cfg.batch == 0 || cfg.neg == 0) throw Error(ErrorCode::kUsage, "batch and neg must be >= 1");
  PartitionPlan plan;
  plan.shards = cfg.shards;
  auto built = Partition(graph, plan);
  ImportanceTable table(GlobalDegreePass(graph, 2));
  CachePolicyConfig pc;
  pc.tau.assign(2, cfg.tau);
  MaterializeCache(built.shards, SelectCacheSet(table, pc));
  SamplerOptions options;
  options.buckets_per_shard = cfg.buckets_per_shard;
  GraphService service(built.shards, options);

  std::vector<double> ms;
  uint64_t digest = 0;
  auto mix = [&](const std::vector<VertexId>& ids) {
    for (VertexId v : ids) digest = SplitMix64(digest ^ v);
  };
  for (size_t it = 0; it < cfg.iters; ++it) {
    uint64_t seed = MixSeed({cfg.seed, it});
    auto t0 = Clock::now();
    auto roots = service.TraverseSampleGlobal(kAnyEdgeType, cfg.batch, seed);
    if (cfg.kind == SamplerKind::kTraverse) {
      ms.push_back(SecondsSince(t0) * 1e3);
      mix(roots);
      continue;
    }
    t0 = Clock::now();
    if (cfg.kind == SamplerKind::kNeighborhood) {
      auto res = service.NeighborhoodSample(roots, kAnyEdgeType, cfg.hop_nums, seed);
      ms.push_back(SecondsSince(t0) * 1e3);
      for (const auto& hop : res.ids) mix(hop);
    } else {
      auto neg = service.NegativeSample(roots, kAnyEdgeType, cfg.neg, seed);
      ms.push_back(SecondsSince(t0) * 1e3);
      mix(neg);
    }
  }
  auto s = Summarize(std::move(ms));
  s.digest = digest;
  return s;
}

uint64_t VectorDigest(const std::vector<Vector>& vectors) {
  uint64_t h = SplitMix64(vectors.size());
  for (const auto& v : vectors) {
    h = SplitMix64(h ^ v.size());
    for (double x : v) h = HashBits(h, x);
  }
  return h;
}

OpBenchResult BenchOperators(const GraphData& graph, const OpBenchConfig& cfg) {
  PartitionPlan plan;
  plan.shards = cfg.shards;
  auto built = Partition(graph, plan);
  GraphService service(built.shards);
  TrainConfig tc;
  tc.d = cfg.dim;
  tc.k_max = cfg.hops;
  tc.hop_nums = cfg.hop_nums;
  tc.seed = cfg.seed;
  tc.Validate();
  GnnRuntime runtime(service, tc, GnnModel::Init(tc, graph.vertex_arity()));

  OpBenchResult out;
  std::vector<Vector> outputs;
  double seconds = 0.0;
  for (size_t it = 0; it < cfg.iters; ++it) {
    auto batch = service.TraverseSampleGlobal(kAnyEdgeType, cfg.batch, MixSeed({cfg.seed, it, 1}));
    auto sample = runtime.Plan(batch, MixSeed({cfg.seed, it, 2}));
    // Features are fetched once up front so both modes time only operators.
    for (uint32_t k = 0; k <= cfg.hops; ++k) {
      for (VertexId v : sample.Needed(k)) runtime.RawFeatures(v);
    }
    for (uint32_t k = 1; k <= cfg.hops; ++k) out.distinct_pairs += sample.Needed(k).size();
    ForwardStats stats;
    auto t0 = Clock::now();
    auto h = runtime.Forward(batch, sample, cfg.memoize, &stats);
    seconds += SecondsSince(t0);
    out.computed += stats.computed;
    out.reused += stats.reused;
    out.aggregate_evals += stats.aggregate_evals;
    outputs.insert(outputs.end(), h.begin(), h.end());
  }
  out.seconds_per_batch = cfg.iters ? seconds / static_cast<double>(cfg.iters) : 0.0;
  out.output_digest = VectorDigest(outputs);
  return out;
}

size_t CsvTable::Column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::kSchema, fmt::format("missing column '{}'", name));
  return static_cast<size_t>(it - header.begin());
}

CsvTable ReadCsv(std::istream& in) {
  CsvTable t;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = SplitCommas(line);
    for (auto& c : cells) c = Trim(c);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error(ErrorCode::kSchema, fmt::format("line {}: {} cells, header has {}", number,
                                                  cells.size(), t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void WriteCsv(const CsvTable& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    if (cells.size() != table.header.size()) {
      throw Error(ErrorCode::kSchema, fmt::format("row has {} cells, header has {}", cells.size(),
                                                  table.header.size()));
    }
    for (const auto& c : cells) {
      if (c.find_first_of(",\"\n\r") != std::string::npos) {
        throw Error(ErrorCode::kSchema, fmt::format("CSV cell '{}' needs quoting", c));
      }
    }
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

std::string ReportCsv(const CsvTable& table, bool markdown) {
  if (table.rows.empty()) return "no rows\n";
  auto header = table.header;
  auto rows = table.rows;
  std::string verdict;

  if (HasColumn(table, "tau") && HasColumn(table, "cached_fraction")) {
    bool ok = true;
    for (size_t r = 1; r < table.rows.size(); ++r) {
      if (Cell(table, r, "tau") > Cell(table, r - 1, "tau") &&
          Cell(table, r, "cached_fraction") > Cell(table, r - 1, "cached_fraction")) {
        ok = false;
      }
    }
    verdict = fmt::format("monotonicity (cached_fraction non-increasing in tau): {}\n",
                          ok ? "PASS" : "FAIL");
  }

  if (HasColumn(table, "memoize") && HasColumn(table, "seconds_per_batch")) {
    // Rows with the same workload columns pair up as on/off.
    std::vector<std::string> keys;
    for (const char* k : {"batch", "hops", "hop_nums"}) {
      if (HasColumn(table, k)) keys.push_back(k);
    }
    auto key_of = [&](size_t r) {
      std::string k;
      for (const auto& c : keys) k += table.rows[r][table.Column(c)] + "/";
      return k;
    };
    std::map<std::string, double> on, off;
    for (size_t r = 0; r < table.rows.size(); ++r) {
      const auto& m = table.rows[r][table.Column("memoize")];
      double t = Cell(table, r, "seconds_per_batch");
      if (m == "on") on[key_of(r)] = t;
      if (m == "off") off[key_of(r)] = t;
    }
    header.push_back("speedup");
    for (size_t r = 0; r < rows.size(); ++r) {
      auto k = key_of(r);
      bool both = on.count(k) && off.count(k) && on[k] > 0;
      rows[r].push_back(both ? fmt::format("{:.3f}", off[k] / on[k]) : "");
    }
  }
  return FormatTable(header, rows, markdown) + verdict;
}

std::map<std::string, std::string> ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, fmt::format("{}:{}: expected key=value", path, number));
    }
    out[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return out;
}

std::string Sha256File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

void RunManifest::Write(const std::string& path) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["seeds"] = seeds;
  auto& inputs_j = j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& p : inputs) inputs_j.push_back({{"path", p}, {"sha256", Sha256File(p)}});
  j["timings_seconds"] = timings;
  auto& outputs_j = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& p : outputs) outputs_j.push_back({{"path", p}, {"sha256", Sha256File(p)}});
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace shardgnn
