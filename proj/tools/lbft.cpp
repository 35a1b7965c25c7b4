// Copyright 2026 The lbft Authors
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

#include "lbft/checkers.hpp"
#include "lbft/simnet.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace lbft;

namespace {

struct Common {
   std::string scenario;
   std::string mode;
   std::string out_dir;
   std::string check = "all";
   Height target = -1;
   Height deadline = -1;
};

CheckOptions check_options(const Common& c)
{
   CheckOptions o;
   if (c.check == "safety")
      o.which = CheckSet::safety;
   else if (c.check == "liveness")
      o.which = CheckSet::liveness;
   else if (c.check == "accountability")
      o.which = CheckSet::accountability;
   if (c.target >= 0)
      o.target = c.target;
   if (c.deadline >= 0)
      o.deadline = c.deadline;
   return o;
}

Scenario load(const Common& c, std::optional<std::uint64_t> seed)
{
   Scenario s = load_scenario(c.scenario);
   if (!c.mode.empty())
      s.mode = c.mode == "lisk" ? Mode::lisk : Mode::general;
   if (seed)
      s.seed = *seed;
   s.schedule.seed = s.seed;
   s.validate();
   return s;
}

void write_file(const fs::path& path, const std::string& text)
{
   std::ofstream out(path);
   if (!out)
      throw std::runtime_error("cannot write " + path.string());
   out << text;
}

std::string evidence_lines(const std::vector<EvidenceRecord>& evidence)
{
   std::string out;
   for (const auto& e : evidence)
      out += evidence_json(e) + '\n';
   return out;
}

void add_check_flags(CLI::App* app, Common& c)
{
   app->add_option("--check", c.check, "Which checkers to run")
       ->check(CLI::IsMember({"safety", "liveness", "accountability", "all"}));
   app->add_option("--target-height", c.target, "Height every honest proposer must finalize");
   app->add_option("--deadline-blocks", c.deadline, "Blocks allowed between a height and its finalization");
}

/// Parses "0..999", "0-999", "3" or "1,5,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
   std::vector<std::uint64_t> out;
   std::string range = text;
   if (auto dots = range.find(".."); dots != std::string::npos)
      range.replace(dots, 2, "-");
   for (auto id : parse_id_list(range))
      out.push_back(id.value);
   return out;
}

struct RunResult {
   Trace trace;
   Verdict verdict;
};

RunResult run_and_check(const Scenario& s, const CheckOptions& options)
{
   RunResult r{run(s), {}};
   const ChainState state = replay(r.trace);
   r.verdict = evaluate(r.trace, state, options);
   return r;
}

int cmd_run(const Common& c, std::optional<std::uint64_t> seed)
{
   const Scenario s = load(c, seed);
   const auto options = check_options(c);
   auto r = run_and_check(s, options);
   const std::string report = format_verdict(r.verdict, s);
   std::cout << report;
   const fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
   fs::create_directories(dir);
   save_trace((dir / "trace.jsonl").string(), r.trace);
   write_file(dir / "verdict.txt", report);
   write_file(dir / "evidence.jsonl", evidence_lines(r.verdict.accountability.evidence));
   return exit_code(r.verdict);
}

int cmd_sweep(const Common& c, const std::string& seeds_text)
{
   const auto seeds = parse_seeds(seeds_text);
   const auto options = check_options(c);
   std::vector<Scenario> scenarios;
   for (auto seed : seeds)
      scenarios.push_back(load(c, seed));

   struct Row {
      std::uint64_t seed;
      Verdict verdict;
      Height height;
      std::size_t blocks;
   };
   std::vector<Row> rows(scenarios.size());
   const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
   std::atomic<std::size_t> next{0};
   auto work = [&] {
      for (std::size_t i; (i = next++) < scenarios.size();) {
         auto r = run_and_check(scenarios[i], options);
         Height h = 0;
         for (const auto& b : r.trace.blocks)
            h = std::max(h, b.block.height);
         rows[i] = Row{scenarios[i].seed, std::move(r.verdict), h, r.trace.blocks.size()};
      }
   };
   std::vector<std::future<void>> pool;
   for (std::size_t w = 0; w < workers; ++w)
      pool.push_back(std::async(std::launch::async, work));
   for (auto& f : pool)
      f.get();

   std::ostringstream table;
   table << "seed\tsafety\tliveness\taccountability\theight\tblocks\n";
   int worst = 0;
   std::size_t fails[3] = {0, 0, 0};
   auto mark = [](bool pass) { return pass ? "pass" : "FAIL"; };
   for (const auto& row : rows) {
      const auto& v = row.verdict;
      table << row.seed << '\t' << mark(v.safety.pass) << '\t' << mark(v.liveness.pass) << '\t'
            << mark(v.accountability.pass) << '\t' << row.height << '\t' << row.blocks << '\n';
      fails[0] += !v.safety.pass;
      fails[1] += !v.liveness.pass;
      fails[2] += !v.accountability.pass;
      const int code = exit_code(v);
      if (code != 0 && (worst == 0 || code < worst))
         worst = code;
   }
   table << "runs: " << rows.size() << "\nsafety_failures: " << fails[0] << "\nliveness_failures: " << fails[1]
         << "\naccountability_failures: " << fails[2] << '\n';
   std::cout << table.str();
   if (!c.out_dir.empty()) {
      fs::create_directories(c.out_dir);
      write_file(fs::path(c.out_dir) / "sweep.tsv", table.str());
   }
   return worst;
}

int cmd_check(const Common& c, const std::string& trace_path)
{
   Trace trace = load_trace(trace_path);
   const ChainState state = replay(trace);
   const auto verdict = evaluate(trace, state, check_options(c));
   const std::string report = format_verdict(verdict, trace.scenario);
   std::cout << report;
   if (!c.out_dir.empty()) {
      fs::create_directories(c.out_dir);
      write_file(fs::path(c.out_dir) / "verdict.txt", report);
   }
   return exit_code(verdict);
}

int cmd_evidence(const Common& c, const std::string& trace_path, std::optional<std::uint64_t> seed)
{
   Trace trace = trace_path.empty() ? run(load(c, seed)) : load_trace(trace_path);
   const ChainState state = replay(trace);
   const std::string lines = evidence_lines(collect_evidence(trace, state));
   std::cout << lines;
   if (!c.out_dir.empty()) {
      fs::create_directories(c.out_dir);
      write_file(fs::path(c.out_dir) / "evidence.jsonl", lines);
   }
   return 0;
}

}  // namespace

int main(int argc, char** argv)
{
   CLI::App app{"Lisk-BFT and prevote/precommit framework simulator"};
   app.require_subcommand(1);
   Common c;
   std::uint64_t seed = 0;
   std::string seeds = "0..9";
   std::string trace_path;

   auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and check the trace");
   run_cmd->add_option("--scenario", c.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
   auto* run_seed = run_cmd->add_option("--seed", seed, "Override the scenario seed");
   run_cmd->add_option("--mode", c.mode, "Override the protocol mode")->check(CLI::IsMember({"lisk", "general"}));
   run_cmd->add_option("--out-dir", c.out_dir, "Directory for trace.jsonl, verdict.txt and evidence.jsonl");
   add_check_flags(run_cmd, c);

   auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a seed range");
   sweep_cmd->add_option("--scenario", c.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
   sweep_cmd->add_option("--seeds", seeds, "Seeds, e.g. 0..999 or 1,4,9");
   sweep_cmd->add_option("--mode", c.mode, "Override the protocol mode")->check(CLI::IsMember({"lisk", "general"}));
   sweep_cmd->add_option("--out-dir", c.out_dir, "Directory for sweep.tsv");
   add_check_flags(sweep_cmd, c);

   auto* check_cmd = app.add_subcommand("check", "Re-run the checkers on a saved trace");
   check_cmd->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);
   check_cmd->add_option("--out-dir", c.out_dir, "Directory for verdict.txt");
   add_check_flags(check_cmd, c);

   auto* evidence_cmd = app.add_subcommand("evidence", "Print evidence records");
   auto* ev_trace = evidence_cmd->add_option("--trace", trace_path, "Trace file")->check(CLI::ExistingFile);
   auto* ev_scenario =
       evidence_cmd->add_option("--scenario", c.scenario, "Scenario to simulate instead")->check(CLI::ExistingFile);
   auto* ev_seed = evidence_cmd->add_option("--seed", seed, "Override the scenario seed");
   evidence_cmd->add_option("--mode", c.mode, "Override the protocol mode")->check(CLI::IsMember({"lisk", "general"}));
   evidence_cmd->add_option("--out-dir", c.out_dir, "Directory for evidence.jsonl");
   ev_trace->excludes(ev_scenario);

   try {
      app.parse(argc, argv);
   } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
   } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 1;
   }

   try {
      if (*run_cmd)
         return cmd_run(c, *run_seed ? std::optional<std::uint64_t>{seed} : std::nullopt);
      if (*sweep_cmd)
         return cmd_sweep(c, seeds);
      if (*check_cmd)
         return cmd_check(c, trace_path);
      if (*evidence_cmd) {
         if (trace_path.empty() && c.scenario.empty()) {
            std::cerr << "evidence: need --trace or --scenario\n";
            return 1;
         }
         return cmd_evidence(c, trace_path, *ev_seed ? std::optional<std::uint64_t>{seed} : std::nullopt);
      }
   } catch (const InvalidScenario& e) {
      std::cerr << "invalid scenario: " << e.what() << '\n';
      return 1;
   } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
   }
   return 1;
}
