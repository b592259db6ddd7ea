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

// shardgnn command-line harness.
//
//   shardgnn [--seed S] [--shards P] [--partition hash|vcut|grid2d|stream|file:PATH]
//            [--config FILE] [--manifest FILE] <subcommand> ...
//
// Exit codes: 0 success, 2 usage, 3 data error, 4 divergence.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "shardgnn/generators.h"
#include "shardgnn/gnn.h"
#include "shardgnn/harness.h"
#include "shardgnn/importance.h"
#include "shardgnn/power_law.h"

namespace sg = shardgnn;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Globals {
  uint64_t seed = 0;
  uint32_t shards = 4;
  std::string partition = "hash";
  std::string config;
  std::string manifest;
  uint32_t buckets = 0;
};

struct GraphInput {
  std::string vertices;
  std::string edges;

  void Add(CLI::App* cmd) {
    cmd->add_option("--vertices", vertices, "vertex TSV: id, type, features");
    cmd->add_option("--edges", edges, "edge TSV: src, dst, type, weight, features")->required();
  }
  sg::GraphData Load() const {
    return sg::LoadGraph(vertices.empty() ? std::nullopt : std::optional(vertices), edges);
  }
  std::vector<std::string> Paths() const {
    std::vector<std::string> p;
    if (!vertices.empty()) p.push_back(vertices);
    p.push_back(edges);
    return p;
  }
};

std::vector<uint32_t> ParseList(const std::string& text) {
  std::vector<uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<uint32_t>(v));
    } catch (const std::exception&) {
      throw sg::Error(sg::ErrorCode::kUsage, fmt::format("bad list entry '{}' in '{}'", item, text));
    }
  }
  if (out.empty()) throw sg::Error(sg::ErrorCode::kUsage, "empty list");
  return out;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sg::Error(sg::ErrorCode::kIo, "cannot write " + path);
  return out;
}

std::string F(double x) { return fmt::format("{:.6g}", x); }

// Collects the per-command manifest and writes it next to the first output.
struct Manifest {
  sg::RunManifest m;
  const Globals* g = nullptr;

  void Finish() {
    m.seeds["seed"] = g->seed;
    m.config["shards"] = std::to_string(g->shards);
    m.config["partition"] = g->partition;
    if (!g->config.empty()) m.config["config_file"] = g->config;
    std::string path = g->manifest;
    if (path.empty() && !m.outputs.empty()) path = m.outputs.front() + ".manifest.json";
    if (path.empty()) return;
    m.Write(path);
    std::cerr << "manifest: " << path << "\n";
  }
};

// Appends `--key=value` for every config entry so file values win over flags.
std::vector<std::string> ApplyConfig(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  for (const auto& [k, v] : sg::ReadConfigFile(path)) args.push_back(fmt::format("--{}={}", k, v));
  return args;
}

int Run(int argc, char** argv) {
  CLI::App app{"Sharded graph storage, sampling and GNN operator harness"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "base seed");
  app.add_option("--shards", g.shards, "number of shards")->check(CLI::Range(1u, 1u << 16));
  app.add_option("--partition", g.partition, "hash|vcut|grid2d|stream|file:<path>");
  app.add_option("--config", g.config, "key=value file overriding flags");
  app.add_option("--manifest", g.manifest, "run manifest path (default: <first output>.manifest.json)");
  app.add_option("--buckets", g.buckets, "consumer buckets per shard (0: one per core)");
  Manifest man;
  man.g = &g;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic graph");
  sg::SyntheticSpec spec;
  std::string model = "preferential-attachment";
  std::string out_v, out_e;
  gen->add_option("--model", model, "preferential-attachment|erdos-renyi|sbm|path|star|clique");
  gen->add_option("--n", spec.n, "vertices");
  gen->add_option("--m", spec.m, "edges (erdos-renyi; caps preferential-attachment)");
  gen->add_option("--p-in", spec.p_in, "sbm intra-block edge probability");
  gen->add_option("--p-out", spec.p_out, "sbm inter-block edge probability");
  gen->add_option("--communities", spec.communities, "sbm blocks");
  gen->add_option("--alpha", spec.alpha, "preferential-attachment new-source probability");
  gen->add_option("--beta", spec.beta, "preferential-attachment internal-edge probability");
  gen->add_option("--gamma", spec.gamma, "preferential-attachment new-target probability");
  gen->add_option("--delta-in", spec.delta_in, "preferential-attachment in-degree offset");
  gen->add_option("--delta-out", spec.delta_out, "preferential-attachment out-degree offset");
  gen->add_option("--source-fanout", spec.source_fanout, "preferential-attachment out-edges per new source");
  gen->add_option("--vertex-arity", spec.vertex_arity, "vertex feature length");
  gen->add_option("--edge-arity", spec.edge_arity, "edge attribute length");
  gen->add_option("--attr-distinct", spec.attr_distinct, "categorical attribute codes (0: Gaussian)");
  gen->add_option("--vertex-types", spec.vertex_types, "vertex types");
  gen->add_option("--edge-types", spec.edge_types, "edge types");
  gen->add_option("--out-vertices", out_v, "vertex TSV path")->required();
  gen->add_option("--out-edges", out_e, "edge TSV path")->required();
  gen->callback([&] {
    spec.model = sg::ParseGraphModel(model);
    spec.seed = g.seed;
    auto t = Clock::now();
    auto graph = sg::Generate(spec);
    {
      auto vo = OpenOut(out_v);
      sg::WriteVertices(graph, vo);
      auto eo = OpenOut(out_e);
      sg::WriteEdges(graph, eo);
    }
    man.m.timings["generate"] = Since(t);
    man.m.config["model"] = model;
    man.m.config["n"] = std::to_string(spec.n);
    man.m.config["m"] = std::to_string(spec.m);
    man.m.outputs = {out_e, out_v};
    std::cout << fmt::format("{}: {} vertices, {} edges\n", model, graph.vertices().size(),
                             graph.edges().size());
  });

  // build
  auto* build = app.add_subcommand("build", "partition and build shards");
  GraphInput build_in;
  build_in.Add(build);
  unsigned builders = 0;
  std::string build_out;
  build->add_option("--builders", builders, "concurrent shard builders (0: one per shard)");
  build->add_option("--out", build_out, "per-shard CSV");
  build->callback([&] {
    auto graph = build_in.Load();
    auto plan = sg::PartitionPlan::FromFlag(g.partition, g.shards);
    auto run = sg::TimedBuild(graph, plan, builders);
    auto why = sg::CheckConservation(graph, run.result);
    if (!why.empty()) throw sg::Error(sg::ErrorCode::kSchema, "conservation: " + why);
    const auto& q = run.result.quality;
    std::cout << fmt::format("strategy {} shards {} build {:.3f}s\n", sg::StrategyName(plan.strategy),
                             plan.shards, run.seconds);
    std::cout << fmt::format("edges {} crossing {} balance {:.4f} replication {:.4f}\n",
                             q.total_edges, q.crossing_edges, q.balance, q.replication_factor);
    sg::CsvTable t{{"shard", "vertices", "records", "n_d", "n_l", "n_a", "combined_bytes",
                    "separated_bytes"},
                   {}};
    for (const auto& s : run.result.shards) {
      auto r = s.Report();
      t.rows.push_back({std::to_string(s.shard_id()), std::to_string(r.n),
                        std::to_string(r.records), F(r.n_d), F(r.n_l), std::to_string(r.n_a),
                        std::to_string(r.combined_bytes), std::to_string(r.separated_bytes)});
    }
    std::cout << sg::ReportCsv(t);
    man.m.inputs = build_in.Paths();
    man.m.timings["build"] = run.seconds;
    man.m.config["builders"] = std::to_string(builders);
    if (!build_out.empty()) {
      auto o = OpenOut(build_out);
      sg::WriteCsv(t, o);
      man.m.outputs.push_back(build_out);
    }
  });

  // degree-stats
  auto* deg = app.add_subcommand("degree-stats", "k-hop degrees, importance and tail fits");
  GraphInput deg_in;
  deg_in.Add(deg);
  uint32_t deg_hops = 2;
  std::string deg_out;
  deg->add_option("--hops", deg_hops, "hops")->check(CLI::Range(1u, 8u));
  deg->add_option("--out", deg_out, "per-vertex CSV")->required();
  deg->callback([&] {
    auto graph = deg_in.Load();
    auto t = Clock::now();
    sg::ImportanceTable table(sg::GlobalDegreePass(graph, deg_hops));
    man.m.timings["degrees"] = Since(t);
    sg::CsvTable csv;
    csv.header.push_back("vertex_id");
    for (uint32_t k = 1; k <= deg_hops; ++k) {
      csv.header.push_back(fmt::format("d_in_{}", k));
      csv.header.push_back(fmt::format("d_out_{}", k));
      csv.header.push_back(fmt::format("imp_{}", k));
    }
    std::vector<std::vector<double>> cols(3 * deg_hops);
    for (size_t i = 0; i < table.size(); ++i) {
      std::vector<std::string> row{std::to_string(table.id(i))};
      for (uint32_t k = 1; k <= deg_hops; ++k) {
        double imp = table.Imp(i, k);
        row.push_back(std::to_string(table.degrees().In(i, k)));
        row.push_back(std::to_string(table.degrees().Out(i, k)));
        row.push_back(std::isinf(imp) ? "inf" : F(imp));
        auto& c = cols[3 * (k - 1)];
        if (table.degrees().In(i, k) > 0) c.push_back(table.degrees().In(i, k));
        if (table.degrees().Out(i, k) > 0) cols[3 * (k - 1) + 1].push_back(table.degrees().Out(i, k));
        if (imp > 0 && std::isfinite(imp)) cols[3 * (k - 1) + 2].push_back(imp);
      }
      csv.rows.push_back(std::move(row));
    }
    auto o = OpenOut(deg_out);
    sg::WriteCsv(csv, o);
    o.close();
    man.m.inputs = deg_in.Paths();
    man.m.outputs = {deg_out};
    std::cout << fmt::format("{:<8} {:>8} {:>10} {:>8} {:>10} {:>10}  verdict\n", "sample", "n_tail",
                             "alpha_hat", "x_min", "ks_power", "ks_exp");
    for (size_t c = 0; c < cols.size(); ++c) {
      const std::string& name = csv.header[c + 1];
      try {
        auto p = sg::FitPowerLawTail(cols[c]);
        auto e = sg::FitExponentialTail(cols[c], p.x_min);
        std::cout << fmt::format("{:<8} {:>8} {:>10.4f} {:>8.4g} {:>10.5f} {:>10.5f}  {}\n", name,
                                 p.n_tail, p.alpha_hat, p.x_min, p.ks_distance, e.ks_distance,
                                 p.ks_distance < e.ks_distance ? "power-law" : "exponential");
      } catch (const sg::Error& err) {
        std::cout << fmt::format("{:<8} {}\n", name, err.what());
      }
    }
  });

  // cache-stats
  auto* cstats = app.add_subcommand("cache-stats", "cached fraction over an importance threshold sweep");
  GraphInput cs_in;
  cs_in.Add(cstats);
  std::string sweep = "0.05:0.45:0.05";
  uint32_t cs_hops = 2;
  std::string cs_out;
  cstats->add_option("--tau-sweep", sweep, "start:stop:step");
  cstats->add_option("--hops", cs_hops, "cache depth h")->check(CLI::Range(1u, 8u));
  cstats->add_option("--out", cs_out, "CSV: tau, cached_fraction, cached_fraction_k<k>")->required();
  cstats->callback([&] {
    auto taus = sg::ParseSweep(sweep);
    auto graph = cs_in.Load();
    auto t = Clock::now();
    sg::ImportanceTable table(sg::GlobalDegreePass(graph, cs_hops));
    auto rows = sg::CacheSweep(table, cs_hops, taus);
    man.m.timings["sweep"] = Since(t);
    sg::CsvTable csv{{"tau", "cached_fraction"}, {}};
    for (uint32_t k = 1; k <= cs_hops; ++k) csv.header.push_back(fmt::format("cached_fraction_k{}", k));
    for (const auto& r : rows) {
      std::vector<std::string> row{F(r.tau), fmt::format("{:.6f}", r.cached_fraction)};
      for (double f : r.per_hop) row.push_back(fmt::format("{:.6f}", f));
      csv.rows.push_back(std::move(row));
    }
    auto o = OpenOut(cs_out);
    sg::WriteCsv(csv, o);
    o.close();
    std::cout << sg::ReportCsv(csv);
    man.m.inputs = cs_in.Paths();
    man.m.outputs = {cs_out};
    man.m.config["tau_sweep"] = sweep;
  });

  // bench-cache
  auto* bcache = app.add_subcommand("bench-cache", "remote fetches under importance/random/lru caching");
  GraphInput bc_in;
  bc_in.Add(bcache);
  sg::CacheBenchConfig bc;
  std::string bc_hop_nums = "10,5";
  std::string bc_out;
  bcache->add_option("--tau", bc.tau, "importance threshold at every hop");
  bcache->add_option("--budget", bc.budget,
                     "cached vertices as a fraction of non-isolated ones (default: importance set size at tau)");
  bcache->add_option("--hop-nums", bc_hop_nums, "fanout per hop");
  bcache->add_option("--batch", bc.batch, "roots per request");
  bcache->add_option("--rounds", bc.rounds, "requests replayed per policy");
  bcache->add_option("--out", bc_out, "CSV")->required();
  bcache->callback([&] {
    bc.hop_nums = ParseList(bc_hop_nums);
    bc.hops = static_cast<uint32_t>(bc.hop_nums.size());
    bc.shards = g.shards;
    bc.seed = g.seed;
    bc.buckets_per_shard = g.buckets ? g.buckets : 1;
    auto graph = bc_in.Load();
    sg::ImportanceTable table(sg::GlobalDegreePass(graph, bc.hops));
    auto rows = sg::BenchCache(graph, table, bc);
    sg::CsvTable csv{{"policy", "cached_entries", "remote_fetches", "remote_tasks", "cache_tasks",
                      "local_tasks", "seconds", "p50_ms", "p90_ms", "p99_ms"},
                     {}};
    for (const auto& r : rows) {
      csv.rows.push_back({std::string(sg::CachePolicyName(r.policy)), std::to_string(r.cached_entries),
                          std::to_string(r.remote_fetches), std::to_string(r.remote_tasks),
                          std::to_string(r.cache_tasks), std::to_string(r.local_tasks),
                          F(r.seconds), F(r.p50_ms), F(r.p90_ms), F(r.p99_ms)});
      man.m.timings[std::string(sg::CachePolicyName(r.policy))] = r.seconds;
    }
    auto o = OpenOut(bc_out);
    sg::WriteCsv(csv, o);
    o.close();
    std::cout << sg::ReportCsv(csv);
    man.m.inputs = bc_in.Paths();
    man.m.outputs = {bc_out};
    man.m.config["hop_nums"] = bc_hop_nums;
    man.m.config["buckets"] = std::to_string(bc.buckets_per_shard);
  });

  // sample-bench
  auto* sbench = app.add_subcommand("sample-bench", "sampler latency percentiles");
  GraphInput sb_in;
  sb_in.Add(sbench);
  sg::SampleBenchConfig sb;
  std::string sb_kind = "neighborhood";
  std::string sb_hops = "2,2";
  std::string sb_out;
  sbench->add_option("--kind", sb_kind, "traverse|neighborhood|negative");
  sbench->add_option("--batch", sb.batch, "vertices per call");
  sbench->add_option("--hops", sb_hops, "fanout per hop");
  sbench->add_option("--neg", sb.neg, "negatives per vertex");
  sbench->add_option("--iters", sb.iters, "calls");
  sbench->add_option("--tau", sb.tau, "importance threshold of the cache");
  sbench->add_option("--out", sb_out, "CSV")->required();
  sbench->callback([&] {
    sb.kind = sg::ParseSamplerKind(sb_kind);
    sb.hop_nums = ParseList(sb_hops);
    sb.shards = g.shards;
    sb.seed = g.seed;
    sb.buckets_per_shard = g.buckets;
    auto graph = sb_in.Load();
    auto t = Clock::now();
    auto s = sg::BenchSampler(graph, sb);
    man.m.timings["bench"] = Since(t);
    std::string hn;
    for (auto h : sb.hop_nums) hn += (hn.empty() ? "" : ":") + std::to_string(h);
    sg::CsvTable csv{{"kind", "batch", "hop_nums", "iters", "digest", "mean_ms", "p50_ms", "p90_ms",
                      "p99_ms", "max_ms"},
                     {{sb_kind, std::to_string(sb.batch), hn, std::to_string(sb.iters),
                       fmt::format("{:016x}", s.digest), F(s.mean_ms), F(s.p50_ms), F(s.p90_ms),
                       F(s.p99_ms), F(s.max_ms)}}};
    auto o = OpenOut(sb_out);
    sg::WriteCsv(csv, o);
    o.close();
    std::cout << sg::ReportCsv(csv);
    man.m.inputs = sb_in.Paths();
    man.m.outputs = {sb_out};
  });

  // op-bench
  auto* obench = app.add_subcommand("op-bench", "forward pass with and without memoization");
  GraphInput ob_in;
  ob_in.Add(obench);
  sg::OpBenchConfig ob;
  std::string memo = "on";
  std::string ob_hop_nums;
  std::string ob_out;
  obench->add_option("--memoize", memo, "on|off")->check(CLI::IsMember({"on", "off"}));
  obench->add_option("--batch", ob.batch, "batch size");
  obench->add_option("--hops", ob.hops, "k_max")->check(CLI::Range(1u, 8u));
  obench->add_option("--hop-nums", ob_hop_nums, "fanout per hop (default 10 at every hop)");
  obench->add_option("--dim", ob.dim, "embedding dimension");
  obench->add_option("--iters", ob.iters, "batches");
  obench->add_option("--out", ob_out, "CSV")->required();
  obench->callback([&] {
    ob.memoize = memo == "on";
    ob.hop_nums = ob_hop_nums.empty() ? std::vector<uint32_t>(ob.hops, 10) : ParseList(ob_hop_nums);
    ob.shards = g.shards;
    ob.seed = g.seed;
    auto graph = ob_in.Load();
    auto r = sg::BenchOperators(graph, ob);
    std::string hn;
    for (auto h : ob.hop_nums) hn += (hn.empty() ? "" : ":") + std::to_string(h);
    sg::CsvTable csv{{"memoize", "batch", "hops", "hop_nums", "iters", "seconds_per_batch",
                      "computed", "reused", "aggregate_evals", "distinct_pairs", "output_digest"},
                     {{memo, std::to_string(ob.batch), std::to_string(ob.hops), hn,
                       std::to_string(ob.iters), F(r.seconds_per_batch), std::to_string(r.computed),
                       std::to_string(r.reused), std::to_string(r.aggregate_evals),
                       std::to_string(r.distinct_pairs), fmt::format("{:016x}", r.output_digest)}}};
    auto o = OpenOut(ob_out);
    sg::WriteCsv(csv, o);
    o.close();
    std::cout << sg::ReportCsv(csv);
    man.m.inputs = ob_in.Paths();
    man.m.outputs = {ob_out};
    man.m.timings["forward_per_batch"] = r.seconds_per_batch;
  });

  // train
  auto* train = app.add_subcommand("train", "train the reference GNN");
  GraphInput tr_in;
  tr_in.Add(train);
  sg::TrainConfig tc;
  std::string objective = "skipgram";
  std::string tr_hop_nums = "10,5";
  std::string emb_out, loss_out, aggregate = "mean", combine = "sum-dense";
  train->add_option("--objective", objective, "skipgram|supervised-linkpred");
  train->add_option("--dim", tc.d, "embedding dimension");
  train->add_option("--hops", tc.k_max, "k_max")->check(CLI::Range(1u, 8u));
  train->add_option("--hop-nums", tr_hop_nums, "fanout per hop");
  train->add_option("--neg", tc.neg_num, "negatives per positive");
  train->add_option("--epochs", tc.epochs, "epochs");
  train->add_option("--lr", tc.lr, "learning rate");
  train->add_option("--batch-size", tc.batch_size, "positive pairs per step");
  train->add_option("--walk-len", tc.walk_len, "random walk length");
  train->add_option("--walks", tc.walks_per_vertex, "walks per vertex");
  train->add_option("--window", tc.window, "skip-gram window");
  train->add_option("--aggregate", aggregate, "mean|weighted-mean|max-pool|sum");
  train->add_option("--combine", combine, "concat-dense|sum-dense");
  train->add_option("--emb-out", emb_out, "embedding TSV")->required();
  train->add_option("--loss-out", loss_out, "per-epoch loss CSV");
  train->callback([&] {
    tc.hop_nums = ParseList(tr_hop_nums);
    tc.seed = g.seed;
    tc.aggregate = sg::ParseAggregate(aggregate);
    tc.combine = sg::ParseCombine(combine);
    tc.Validate();
    auto obj = sg::ParseObjective(objective);
    auto graph = tr_in.Load();
    if (graph.vertex_arity() == 0) {
      throw sg::Error(sg::ErrorCode::kSchema, "training needs vertex features");
    }
    auto plan = sg::PartitionPlan::FromFlag(g.partition, g.shards);
    auto built = sg::Partition(graph, plan);
    sg::SamplerOptions so;
    so.buckets_per_shard = g.buckets;
    sg::GraphService service(built.shards, so);
    auto ids = graph.AllVertexIds();
    auto t = Clock::now();
    auto res = sg::Train(service, tc, obj, graph.vertex_arity(), ids);
    man.m.timings["train"] = Since(t);
    for (size_t e = 0; e < res.epoch_losses.size(); ++e) {
      std::cout << fmt::format("epoch {} loss {:.6f}\n", e + 1, res.epoch_losses[e]);
    }
    auto emb = sg::EmbedAll(service, tc, res.model, ids);
    auto o = OpenOut(emb_out);
    for (size_t i = 0; i < ids.size(); ++i) {
      o << ids[i] << '\t';
      for (size_t j = 0; j < emb[i].size(); ++j) o << (j ? "," : "") << fmt::format("{}", emb[i][j]);
      o << '\n';
    }
    o.close();
    man.m.outputs = {emb_out};
    if (!loss_out.empty()) {
      sg::CsvTable csv{{"epoch", "loss"}, {}};
      for (size_t e = 0; e < res.epoch_losses.size(); ++e) {
        csv.rows.push_back({std::to_string(e + 1), fmt::format("{:.9g}", res.epoch_losses[e])});
      }
      auto lo = OpenOut(loss_out);
      sg::WriteCsv(csv, lo);
      man.m.outputs.push_back(loss_out);
    }
    man.m.inputs = tr_in.Paths();
    man.m.config["objective"] = objective;
    man.m.config["dim"] = std::to_string(tc.d);
    man.m.config["hop_nums"] = tr_hop_nums;
    man.m.config["epochs"] = std::to_string(tc.epochs);
  });

  // report
  auto* report = app.add_subcommand("report", "summarize bench CSVs");
  std::vector<std::string> csvs;
  std::string md_out;
  report->add_option("csv", csvs, "CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--md", md_out, "markdown summary path");
  report->callback([&] {
    std::string md;
    for (const auto& path : csvs) {
      std::ifstream in(path);
      if (!in) throw sg::Error(sg::ErrorCode::kIo, "cannot open " + path);
      auto table = sg::ReadCsv(in);
      std::cout << "== " << path << "\n" << sg::ReportCsv(table) << "\n";
      md += "## " + std::filesystem::path(path).filename().string() + "\n\n" +
            sg::ReportCsv(table, true) + "\n";
    }
    if (!md_out.empty()) {
      auto o = OpenOut(md_out);
      o << md;
      o.close();
      man.m.outputs = {md_out};
    }
    man.m.inputs = csvs;
  });

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = ApplyConfig(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  man.m.command = app.get_subcommands().front()->get_name();
  for (const auto& a : std::vector<std::string>(argv + 1, argv + argc)) {
    man.m.config["argv"] += (man.m.config["argv"].empty() ? "" : " ") + a;
  }
  man.Finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const sg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case sg::ErrorCode::kUsage: return kExitUsage;
      case sg::ErrorCode::kDivergence: return kExitDivergence;
      default: return kExitData;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
