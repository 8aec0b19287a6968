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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "branchlab/bench.hpp"
#include "branchlab/imitation.hpp"
#include "branchlab/instance_gen.hpp"
#include "branchlab/policies.hpp"

namespace fs = std::filesystem;
using namespace branchlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitLimit = 3;
constexpr int kExitFormat = 4;

void write_resolved_config(CLI::App* sub, const std::string& beside) {
  std::ofstream out(beside);
  if (!out) throw Error("cannot write resolved config: " + beside);
  out << sub->config_to_str(true, false);
}

std::vector<std::pair<std::string, MilpInstance>> load_instances(
    const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const std::string& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.path().extension() == ".json") files.push_back(e.path().string());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no instance files found");
  std::vector<std::pair<std::string, MilpInstance>> out;
  for (const std::string& f : files) {
    out.emplace_back(fs::path(f).stem().string(), read_milp_file(f));
  }
  return out;
}

TimeModel time_model_from(const std::string& s) {
  if (s == "wall") return TimeModel::kWall;
  if (s == "deterministic") return TimeModel::kDeterministic;
  throw Error("unknown time model: " + s);
}

// "strong" | "most_fractional" | "pseudocost" | "gnn:<ckpt path>"
PolicySpec make_policy_spec(const std::string& token, long oom_cap) {
  PolicySpec spec;
  if (token == "strong") {
    spec.name = token;
    spec.make = [] { return std::make_unique<StrongBranchingPolicy>(); };
  } else if (token == "most_fractional") {
    spec.name = token;
    spec.make = [] { return std::make_unique<MostFractionalPolicy>(); };
  } else if (token == "pseudocost") {
    spec.name = token;
    spec.make = [] { return std::make_unique<PseudocostPolicy>(); };
  } else if (token.rfind("gnn:", 0) == 0) {
    const std::string path = token.substr(4);
    CheckpointMeta meta;
    const GnnModel probe = read_checkpoint_file(path, &meta);  // fail fast
    spec.name = "gnn_" + probe.arch + "_" + (meta.loss_kind.empty() ? "x" : meta.loss_kind);
    spec.make = [path, oom_cap] {
      return std::make_unique<GnnPolicy>(read_checkpoint_file(path), oom_cap);
    };
  } else {
    throw Error("unknown policy: " + token);
  }
  return spec;
}

int run(int argc, char** argv) {
  CLI::App app{"branchlab: branch-and-bound variable-selection laboratory"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override");

  // generate
  auto* gen = app.add_subcommand("generate", "emit MILP-JSON instances");
  std::string g_family = "setcover", g_size = "small", g_out = ".";
  int g_count = 1, g_custom_a = 0, g_custom_b = 0;
  std::uint64_t g_seed = 0;
  GenSpec g_spec;
  gen->add_option("--family", g_family, "setcover|cauction|facilities|indset");
  gen->add_option("--size", g_size, "small|medium|large|custom");
  gen->add_option("--custom-a", g_custom_a, "vars/bids/facilities/nodes for custom");
  gen->add_option("--custom-b", g_custom_b, "cons/items/customers for custom");
  gen->add_option("--count", g_count, "number of instances");
  gen->add_option("--seed", g_seed, "base seed; instance i uses mix(seed, i)");
  gen->add_option("--density", g_spec.density, "setcover coverage density");
  gen->add_option("--affinity", g_spec.affinity, "indset attachment count");
  gen->add_option("--bundle-mean", g_spec.bundle_mean, "cauction bundle-size mean");
  gen->add_option("--cost-scale", g_spec.cost_scale, "facilities cost multiplier");
  gen->add_option("--out", g_out, "output directory");

  // collect
  auto* col = app.add_subcommand("collect", "record strong-branching samples");
  std::vector<std::string> c_instances;
  long c_node_cap = 50;
  std::uint64_t c_seed = 0;
  std::string c_out = "samples.jsonl";
  double c_max_seconds = 0;
  col->add_option("--instances", c_instances, "instance files or directories")->required();
  col->add_option("--node-cap", c_node_cap, "expanded-node cap per instance");
  col->add_option("--seed", c_seed, "collection seed");
  col->add_option("--max-seconds", c_max_seconds, "per-instance wall limit");
  col->add_option("--out", c_out, "output SAMPLES-JSONL path");

  // train
  auto* tr = app.add_subcommand("train", "imitation-train a branching model");
  std::string t_samples, t_arch = "mpnn", t_loss = "pairwise", t_out = "ckpt.json";
  std::string t_test_samples;
  TrainConfig t_cfg;
  int t_epochs = 0, t_layers = 0;
  tr->add_option("--samples", t_samples, "SAMPLES-JSONL training data")->required();
  tr->add_option("--arch", t_arch, "mpnn|subgraph");
  tr->add_option("--loss", t_loss, "scores|rank|pairwise");
  tr->add_option("--epochs", t_epochs, "max epochs (0 = arch default 500/200)");
  tr->add_option("--batch", t_cfg.batch_size, "batch size");
  tr->add_option("--lr", t_cfg.lr, "Adam learning rate");
  tr->add_option("--seed", t_cfg.seed, "training seed");
  tr->add_option("--val-fraction", t_cfg.val_fraction, "validation split by instance");
  tr->add_option("--patience", t_cfg.patience, "early-stop patience (0 = off)");
  tr->add_option("--hidden", t_cfg.hidden, "hidden width");
  tr->add_option("--layers", t_layers, "message-passing layers (0 = arch default)");
  tr->add_flag("--global-agg", t_cfg.global_agg, "enable pooled update inputs");
  tr->add_option("--test-samples", t_test_samples, "held-out samples for accuracy");
  tr->add_option("--out", t_out, "output CKPT-JSON path");

  // solve
  auto* so = app.add_subcommand("solve", "solve one instance with a policy");
  std::string s_instance, s_policy = "strong", s_out, s_time_model = "wall";
  long s_max_nodes = 0;
  double s_max_seconds = 300;
  long s_oom_cap = 50'000'000;
  so->add_option("--instance", s_instance, "MILP-JSON file")->required();
  so->add_option("--policy", s_policy, "strong|most_fractional|pseudocost|gnn:<ckpt>");
  so->add_option("--max-nodes", s_max_nodes, "node limit (0 = off)");
  so->add_option("--max-seconds", s_max_seconds, "time limit (0 = off)");
  so->add_option("--time-model", s_time_model, "wall|deterministic");
  so->add_option("--oom-cap", s_oom_cap, "anchored-policy pair-state cap");
  so->add_option("--out", s_out, "stats JSON path (default stdout)");

  // bench
  auto* be = app.add_subcommand("bench", "policy set x instance set manifest");
  std::vector<std::string> b_instances, b_policies;
  std::string b_baseline = "pseudocost", b_out = "manifest.jsonl", b_time_model = "wall";
  long b_max_nodes = 0;
  double b_max_seconds = 300;
  int b_threads = 1;
  long b_oom_cap = 50'000'000;
  std::uint64_t b_seed = 0;
  be->add_option("--instances", b_instances, "instance files or directories")->required();
  be->add_option("--policies", b_policies, "policy tokens")->required();
  be->add_option("--baseline", b_baseline, "co-run baseline policy (none = off)");
  be->add_option("--max-nodes", b_max_nodes, "per-solve node limit");
  be->add_option("--max-seconds", b_max_seconds, "per-solve time limit");
  be->add_option("--threads", b_threads, "worker pool width");
  be->add_option("--time-model", b_time_model, "wall|deterministic");
  be->add_option("--oom-cap", b_oom_cap, "anchored-policy pair-state cap");
  be->add_option("--seed", b_seed, "recorded base seed");
  be->add_option("--out", b_out, "manifest JSONL path");

  // report
  auto* re = app.add_subcommand("report", "render tables from manifests/ckpts");
  std::vector<std::string> r_manifests, r_ckpts;
  std::string r_out;
  re->add_option("--manifest", r_manifests, "manifest JSONL files");
  re->add_option("--ckpts", r_ckpts, "checkpoints for the accuracy table");
  re->add_option("--out", r_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    g_spec.family = family_from_string(g_family);
    g_spec.size = size_from_string(g_size);
    g_spec.custom_a = g_custom_a;
    g_spec.custom_b = g_custom_b;
    fs::create_directories(g_out);
    for (int i = 0; i < g_count; ++i) {
      g_spec.seed = mix_seed(g_seed, static_cast<std::uint64_t>(i));
      const MilpInstance inst = generate(g_spec);
      char name[128];
      std::snprintf(name, sizeof name, "%s_%s_%04d.json", g_family.c_str(),
                    g_size.c_str(), i);
      write_milp_file(inst, (fs::path(g_out) / name).string());
    }
    write_resolved_config(gen, (fs::path(g_out) / "resolved.cfg").string());
    return kExitOk;
  }

  if (col->parsed()) {
    const auto instances = load_instances(c_instances);
    CollectConfig cfg;
    cfg.node_cap = c_node_cap;
    cfg.seed = c_seed;
    cfg.max_seconds_per_instance = c_max_seconds;
    const auto samples = collect_samples(instances, cfg, &std::cerr);
    write_samples_file(samples, c_out);
    write_resolved_config(col, c_out + ".cfg");
    std::cout << "collected " << samples.size() << " samples from "
              << instances.size() << " instances\n";
    return kExitOk;
  }

  if (tr->parsed()) {
    const auto samples = read_samples_file(t_samples);
    t_cfg.loss = loss_from_string(t_loss);
    t_cfg.max_epochs = t_epochs;
    t_cfg.layers = t_layers;
    TrainResult res = train(t_arch, samples, t_cfg);
    if (!t_test_samples.empty()) {
      const auto test = read_samples_file(t_test_samples);
      res.meta.test_accuracy = eval_accuracy(res.model, test);
    }
    write_checkpoint_file(res.model, res.meta, t_out);
    std::ofstream curve(t_out + ".curve.csv");
    curve << "epoch,train_loss,val_loss\n";
    for (const CurvePoint& p : res.curve) {
      curve << p.epoch << "," << p.train_loss << "," << p.val_loss << "\n";
    }
    write_resolved_config(tr, t_out + ".cfg");
    std::cout << "best_val_loss=" << res.meta.best_val_loss
              << " best_epoch=" << res.meta.best_epoch;
    if (res.meta.test_accuracy >= 0) std::cout << " test_accuracy=" << res.meta.test_accuracy;
    std::cout << "\n";
    return kExitOk;
  }

  if (so->parsed()) {
    const MilpInstance inst = read_milp_file(s_instance);
    const PolicySpec spec = make_policy_spec(s_policy, s_oom_cap);
    auto policy = spec.make();
    BnbOptions opts;
    opts.time_model = time_model_from(s_time_model);
    SolveLimits limits;
    limits.max_nodes = s_max_nodes;
    limits.max_seconds = s_max_seconds;
    const SolveResult res = solve(inst, *policy, limits, opts);
    nlohmann::ordered_json j;
    j["policy"] = spec.name;
    j["status"] = res.limit_hit ? "limit" : "ok";
    j["node_count"] = res.stats.node_count;
    j["solve_time_s"] = res.stats.solve_time;
    j["incumbent_objective"] = std::isfinite(res.stats.incumbent_objective)
                                   ? nlohmann::ordered_json(res.stats.incumbent_objective)
                                   : nlohmann::ordered_json("inf");
    j["optimality_proven"] = res.stats.optimality_proven;
    j["policy_calls"] = res.stats.policy_calls;
    j["lp_solves"] = res.stats.lp_solves;
    if (s_out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream out(s_out);
      out << j.dump(2) << "\n";
      write_resolved_config(so, s_out + ".cfg");
    }
    return res.limit_hit ? kExitLimit : kExitOk;
  }

  if (be->parsed()) {
    const auto instances = load_instances(b_instances);
    if (b_policies.empty()) throw CLI::ValidationError("--policies", "empty policy set");
    std::vector<PolicySpec> specs;
    for (const std::string& tok : b_policies) specs.push_back(make_policy_spec(tok, b_oom_cap));
    if (b_baseline != "none") {
      bool present = false;
      for (const auto& s : specs) present = present || s.name == b_baseline;
      if (!present) specs.push_back(make_policy_spec(b_baseline, b_oom_cap));
    }
    BenchConfig cfg;
    cfg.limits.max_nodes = b_max_nodes;
    cfg.limits.max_seconds = b_max_seconds;
    cfg.time_model = time_model_from(b_time_model);
    if (const char* env = std::getenv("BRANCHLAB_THREADS")) {
      b_threads = std::max(1, std::atoi(env));
    }
    cfg.threads = b_threads;
    cfg.base_seed = b_seed;
    cfg.config_hash = std::to_string(fnv1a64(be->config_to_str(true, false)));
    const RunManifest manifest = bench_run(instances, specs, cfg);
    write_manifest_file(manifest, b_out);
    write_resolved_config(be, b_out + ".cfg");
    bool all_limit = !manifest.rows.empty();
    for (const ManifestRow& r : manifest.rows) all_limit = all_limit && r.status == "limit";
    std::cout << render_report(manifest);
    return all_limit ? kExitLimit : kExitOk;
  }

  if (re->parsed()) {
    std::ostringstream out;
    if (!r_ckpts.empty()) {
      std::vector<AccuracyRow> rows;
      std::sort(r_ckpts.begin(), r_ckpts.end());
      for (const std::string& path : r_ckpts) {
        CheckpointMeta meta;
        const GnnModel model = read_checkpoint_file(path, &meta);
        rows.push_back({model.arch, meta.loss_kind, meta.test_accuracy});
      }
      out << render_accuracy_table(rows) << "\n";
    }
    for (const std::string& path : r_manifests) {
      out << render_report(read_manifest_file(path));
    }
    if (r_out.empty()) {
      std::cout << out.str();
    } else {
      std::ofstream f(r_out);
      f << out.str();
    }
    return kExitOk;
  }

  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const FormatError& e) {
    std::cerr << "data format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
