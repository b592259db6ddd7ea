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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shardgnn/generators.h"
#include "shardgnn/harness.h"
#include "shardgnn/importance.h"

namespace shardgnn {
namespace {

namespace fs = std::filesystem;

fs::path TempDir() {
  auto dir = fs::temp_directory_path() /
             ("shardgnn_harness_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
              "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(dir);
  return dir;
}

CsvTable Parse(const std::string& text) {
  std::istringstream in(text);
  return ReadCsv(in);
}

TEST(Csv, RoundTrip) {
  CsvTable t{{"a", "b"}, {{"1", "x"}, {"2", "y"}}};
  std::ostringstream out;
  WriteCsv(t, out);
  auto back = Parse(out.str());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.Column("b"), 1u);
  try {
    back.Column("c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

TEST(Csv, WriterRejectsCellsNeedingQuotes) {
  std::ostringstream out;
  try {
    WriteCsv(CsvTable{{"hops"}, {{"10,5"}}}, out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
  EXPECT_THROW(WriteCsv(CsvTable{{"a", "b"}, {{"1"}}}, out), Error);
}

TEST(Report, EmptyTable) { EXPECT_EQ(ReportCsv(Parse("tau,cached_fraction\n")), "no rows\n"); }

TEST(Report, MonotonicityVerdict) {
  auto ok = ReportCsv(Parse("tau,cached_fraction\n0.1,0.5\n0.2,0.3\n0.3,0.3\n"));
  EXPECT_NE(ok.find("non-increasing in tau): PASS"), std::string::npos);
  auto bad = ReportCsv(Parse("tau,cached_fraction\n0.1,0.5\n0.2,0.6\n"));
  EXPECT_NE(bad.find("FAIL"), std::string::npos);
}

TEST(Report, SpeedupColumn) {
  auto r = ReportCsv(Parse("memoize,batch,seconds_per_batch\non,512,0.5\noff,512,1.5\n"));
  EXPECT_NE(r.find("speedup"), std::string::npos);
  EXPECT_NE(r.find("3.000"), std::string::npos);
  auto md = ReportCsv(Parse("memoize,batch,seconds_per_batch\non,512,0.5\n"), true);
  EXPECT_EQ(md.rfind("|", 0), 0u);
}

TEST(Sweep, Parse) {
  auto s = ParseSweep("0.05:0.45:0.05");
  ASSERT_EQ(s.size(), 9u);
  EXPECT_DOUBLE_EQ(s.front(), 0.05);
  EXPECT_DOUBLE_EQ(s.back(), 0.45);
  EXPECT_THROW(ParseSweep("0.1:0.05:0.01"), Error);
  EXPECT_THROW(ParseSweep("0.1:0.2"), Error);
  EXPECT_THROW(ParseSweep("0.1:0.2:0"), Error);
}

TEST(Config, KeyValueFile) {
  auto path = TempDir() / "run.cfg";
  std::ofstream(path) << "# comment\nseed = 5\n\nshards=2  # trailing\n";
  auto cfg = ReadConfigFile(path.string());
  EXPECT_EQ(cfg.size(), 2u);
  EXPECT_EQ(cfg["seed"], "5");
  EXPECT_EQ(cfg["shards"], "2");
  std::ofstream(path) << "novalue\n";
  try {
    ReadConfigFile(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  EXPECT_THROW(ReadConfigFile((TempDir() / "missing.cfg").string()), Error);
}

TEST(Manifest, HashesInputsAndOutputs) {
  auto dir = TempDir();
  auto in = dir / "in.txt", out = dir / "out.txt", man = dir / "m.json";
  std::ofstream(in) << "abc";
  std::ofstream(out) << "";
  EXPECT_EQ(Sha256File(in.string()),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256File(out.string()),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  RunManifest m;
  m.command = "gen";
  m.seeds["seed"] = 3;
  m.inputs = {in.string()};
  m.outputs = {out.string()};
  m.Write(man.string());
  auto j = nlohmann::json::parse(std::ifstream(man));
  EXPECT_EQ(j["command"], "gen");
  EXPECT_NE(j.dump().find("ba7816bf"), std::string::npos);
  m.outputs.push_back((dir / "nope").string());
  EXPECT_THROW(m.Write(man.string()), Error);
}

GraphData Pa(uint64_t n, uint64_t seed, size_t arity = 0) {
  SyntheticSpec spec;
  spec.model = GraphModel::kPreferentialAttachment;
  spec.n = n;
  spec.seed = seed;
  spec.vertex_arity = arity;
  return Generate(spec);
}

TEST(BenchCache, ZeroBudgetMakesPoliciesEqual) {
  auto g = Pa(2000, 1);
  ImportanceTable table(GlobalDegreePass(g, 2));
  CacheBenchConfig cfg;
  cfg.budget = 0;
  cfg.rounds = 4;
  cfg.batch = 64;
  auto rows = BenchCache(g, table, cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.cached_entries, 0u);
    EXPECT_EQ(r.remote_fetches, rows[0].remote_fetches);
  }
  EXPECT_GT(rows[0].remote_fetches, 0u);
}

TEST(BenchCache, FullBudgetRemovesRemoteFetches) {
  auto g = Pa(2000, 2);
  ImportanceTable table(GlobalDegreePass(g, 2));
  CacheBenchConfig cfg;
  cfg.budget = 1.0;
  cfg.rounds = 4;
  cfg.batch = 64;
  auto rows = BenchCache(g, table, cfg);
  EXPECT_EQ(rows[0].remote_fetches, 0u);
  EXPECT_EQ(rows[0].remote_tasks, 0u);
  // Equal replica counts across policies.
  EXPECT_EQ(rows[0].cached_entries, rows[1].cached_entries);
  EXPECT_EQ(rows[0].cached_entries, rows[2].cached_entries);
}

TEST(BenchCache, DeterministicCounts) {
  auto g = Pa(1500, 3);
  ImportanceTable table(GlobalDegreePass(g, 2));
  CacheBenchConfig cfg;
  cfg.rounds = 3;
  cfg.batch = 32;
  auto a = BenchCache(g, table, cfg);
  auto b = BenchCache(g, table, cfg);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].remote_fetches, b[i].remote_fetches);
    EXPECT_EQ(a[i].cache_tasks, b[i].cache_tasks);
  }
}

TEST(BenchOperators, MemoizationCountsAndDigest) {
  auto g = Pa(500, 4, 8);
  OpBenchConfig on;
  on.batch = 64;
  on.hop_nums = {4, 4};
  on.iters = 1;
  auto off = on;
  off.memoize = false;
  auto a = BenchOperators(g, on);
  auto b = BenchOperators(g, off);
  EXPECT_EQ(a.aggregate_evals, a.distinct_pairs);
  EXPECT_GT(b.aggregate_evals, a.aggregate_evals);
  EXPECT_EQ(a.output_digest, b.output_digest);
}

TEST(BenchSampler, DigestIsSeeded) {
  auto g = Pa(800, 5);
  SampleBenchConfig cfg;
  cfg.iters = 3;
  cfg.batch = 32;
  cfg.buckets_per_shard = 1;
  for (auto kind : {SamplerKind::kTraverse, SamplerKind::kNeighborhood, SamplerKind::kNegative}) {
    cfg.kind = kind;
    auto a = BenchSampler(g, cfg);
    auto b = BenchSampler(g, cfg);
    EXPECT_EQ(a.calls, 3u);
    EXPECT_EQ(a.digest, b.digest) << SamplerKindName(kind);
    EXPECT_LE(a.p50_ms, a.p99_ms);
  }
}

TEST(Summarize, Percentiles) {
  std::vector<double> ms;
  for (int i = 1; i <= 100; ++i) ms.push_back(i);
  auto s = Summarize(ms);
  EXPECT_EQ(s.calls, 100u);
  EXPECT_DOUBLE_EQ(s.mean_ms, 50.5);
  EXPECT_DOUBLE_EQ(s.max_ms, 100);
  EXPECT_NEAR(s.p50_ms, 50.5, 0.5);
  EXPECT_NEAR(s.p99_ms, 99, 1);
}

}  // namespace
}  // namespace shardgnn
