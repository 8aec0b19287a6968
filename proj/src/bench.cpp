// Copyright 2026 the BranchLab Authors
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

#include "branchlab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace branchlab {

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) throw Error("aggregate: empty value list");
  double mean = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw Error("aggregate: values must be positive");
    mean += std::log(v);
  }
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) {
    const double d = std::log(v) - mean;
    var += d * d;
  }
  var /= static_cast<double>(values.size());  // population variance
  return {std::exp(mean), 100.0 * std::sqrt(var)};
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string manifest_to_jsonl(const RunManifest& m) {
  std::ostringstream out;
  nlohmann::ordered_json head;
  head["config_hash"] = m.config_hash;
  head["base_seed"] = m.base_seed;
  head["environment"] = m.environment;
  out << head.dump() << "\n";
  for (const ManifestRow& r : m.rows) {
    nlohmann::ordered_json j;
    j["instance_id"] = r.instance_id;
    j["policy"] = r.policy;
    j["status"] = r.status;
    j["node_count"] = r.node_count;
    j["solve_time_s"] = r.solve_time_s;
    j["objective"] = std::isfinite(r.objective) ? nlohmann::ordered_json(r.objective)
                                                : nlohmann::ordered_json("inf");
    j["lp_solves"] = r.lp_solves;
    out << j.dump() << "\n";
  }
  return out.str();
}

RunManifest manifest_from_jsonl(const std::string& text) {
  RunManifest m;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (header) {
        m.config_hash = j.at("config_hash").get<std::string>();
        m.base_seed = j.at("base_seed").get<std::uint64_t>();
        m.environment = j.at("environment").get<std::string>();
        header = false;
        continue;
      }
      ManifestRow r;
      r.instance_id = j.at("instance_id").get<std::string>();
      r.policy = j.at("policy").get<std::string>();
      r.status = j.at("status").get<std::string>();
      r.node_count = j.at("node_count").get<long>();
      r.solve_time_s = j.at("solve_time_s").get<double>();
      r.objective = j.at("objective").is_string() ? kInf : j.at("objective").get<double>();
      r.lp_solves = j.at("lp_solves").get<long>();
      m.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (header) throw FormatError("manifest missing header record");
  return m;
}

void write_manifest_file(const RunManifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for write: " + path);
  out << manifest_to_jsonl(m);
}

RunManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_jsonl(ss.str());
}

RunManifest bench_run(const std::vector<std::pair<std::string, MilpInstance>>& instances,
                      const std::vector<PolicySpec>& policies,
                      const BenchConfig& cfg) {
  RunManifest manifest;
  manifest.config_hash = cfg.config_hash;
  manifest.base_seed = cfg.base_seed;
  manifest.environment = "branchlab/" BRANCHLAB_PLATFORM_NOTE;
  manifest.rows.resize(instances.size() * policies.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= manifest.rows.size()) break;
      const std::size_t inst_idx = task / policies.size();
      const std::size_t pol_idx = task % policies.size();
      const auto& [id, inst] = instances[inst_idx];
      const PolicySpec& ps = policies[pol_idx];

      ManifestRow row;
      row.instance_id = id;
      row.policy = ps.name;
      try {
        auto policy = ps.make();
        BnbOptions opts;
        opts.time_model = cfg.time_model;
        const SolveResult res = solve(inst, *policy, cfg.limits, opts, nullptr, id);
        row.status = res.limit_hit ? "limit" : "ok";
        row.node_count = res.stats.node_count;
        row.solve_time_s = res.stats.solve_time;
        row.objective = res.stats.incumbent_objective;
        row.lp_solves = res.stats.lp_solves;
      } catch (const OOMGuard&) {
        row.status = "model_oom_guard";
      }
      manifest.rows[task] = std::move(row);
    }
  };

  const int width = std::max(1, cfg.threads);
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return manifest;
}

namespace {

std::string format_pair(const Aggregate& agg) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f +- %.0f%%", agg.a, agg.b_percent);
  return buf;
}

}  // namespace

std::string render_report(const RunManifest& m) {
  // Preserve first-appearance policy order.
  std::vector<std::string> policies;
  for (const ManifestRow& r : m.rows) {
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end()) {
      policies.push_back(r.policy);
    }
  }
  std::ostringstream out;
  out << "policy              time            node            n    oom\n";
  for (const std::string& p : policies) {
    std::vector<double> times, nodes;
    long oom = 0;
    for (const ManifestRow& r : m.rows) {
      if (r.policy != p) continue;
      if (r.status == "model_oom_guard") {
        ++oom;
        continue;
      }
      times.push_back(std::max(r.solve_time_s, kTimeFloor));
      nodes.push_back(static_cast<double>(std::max(r.node_count, 1L)));
    }
    char line[160];
    if (times.empty()) {
      std::snprintf(line, sizeof line, "%-18s  %-14s  %-14s  %-3ld  %ld\n", p.c_str(),
                    "-", "-", 0L, oom);
    } else {
      std::snprintf(line, sizeof line, "%-18s  %-14s  %-14s  %-3zu  %ld\n", p.c_str(),
                    format_pair(aggregate(times)).c_str(),
                    format_pair(aggregate(nodes)).c_str(), times.size(), oom);
    }
    out << line;
  }
  return out.str();
}

std::string render_accuracy_table(const std::vector<AccuracyRow>& rows) {
  std::ostringstream out;
  out << "arch       loss       accuracy\n";
  for (const AccuracyRow& r : rows) {
    char line[96];
    if (r.accuracy >= 0) {
      std::snprintf(line, sizeof line, "%-9s  %-9s  %.3f\n", r.arch.c_str(),
                    r.loss.c_str(), r.accuracy);
    } else {
      std::snprintf(line, sizeof line, "%-9s  %-9s  -\n", r.arch.c_str(), r.loss.c_str());
    }
    out << line;
  }
  return out.str();
}

}  // namespace branchlab
