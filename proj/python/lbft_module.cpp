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
#include "lbft/lisk_bft.hpp"
#include "lbft/simnet.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace lbft;

namespace {

CheckSet check_set(const std::string& which)
{
   if (which == "all")
      return CheckSet::all;
   if (which == "safety")
      return CheckSet::safety;
   if (which == "liveness")
      return CheckSet::liveness;
   if (which == "accountability")
      return CheckSet::accountability;
   throw py::value_error("check must be safety, liveness, accountability or all");
}

std::vector<std::uint32_t> raw(const std::vector<ProposerId>& ids)
{
   std::vector<std::uint32_t> out;
   for (auto id : ids)
      out.push_back(id.value);
   return out;
}

py::dict evaluate_py(Trace& trace, const std::string& which, std::optional<Height> target,
                     std::optional<Height> deadline)
{
   const ChainState state = replay(trace);
   CheckOptions options;
   options.which = check_set(which);
   options.target = target;
   options.deadline = deadline;
   const Verdict v = evaluate(trace, state, options);

   py::dict out;
   out["exit_code"] = exit_code(v);
   out["report"] = format_verdict(v, trace.scenario);
   out["safety"] = v.safety.pass;
   out["liveness"] = v.liveness.pass;
   out["liveness_exercised"] = v.liveness.exercised;
   out["accountability"] = v.accountability.pass;
   out["flagged"] = raw(v.accountability.flagged);
   out["wrongly_flagged"] = raw(v.accountability.wrongly_flagged);
   out["missed"] = raw(v.accountability.missed);
   if (v.safety.witness) {
      const auto& [a, b] = *v.safety.witness;
      out["witness"] = py::make_tuple(a.block.value, b.block.value);
   } else {
      out["witness"] = py::none();
   }
   return out;
}

Block header_block(std::uint32_t id, std::tuple<Height, Height, Height> triple)
{
   Block b;
   b.id = BlockId{id};
   b.parent = genesis_id;
   b.proposer = ProposerId{0};
   b.height = std::get<2>(triple);
   b.header = LiskHeader{std::get<0>(triple), std::get<1>(triple)};
   return b;
}

}  // namespace

PYBIND11_MODULE(_lbft, m)
{
   m.doc() = "Lisk-BFT consensus simulator and checkers";

   py::register_exception<InvalidScenario>(m, "InvalidScenario", PyExc_ValueError);

   py::enum_<Mode>(m, "Mode").value("general", Mode::general).value("lisk", Mode::lisk);

   py::class_<Scenario>(m, "Scenario")
       .def_readwrite("mode", &Scenario::mode)
       .def_readwrite("seed", &Scenario::seed)
       .def_readwrite("stop_height", &Scenario::stop_height)
       .def_readwrite("gst", &Scenario::gst)
       .def_readwrite("delta", &Scenario::delta)
       .def_property_readonly("universe", &Scenario::universe)
       .def("validate", &Scenario::validate)
       .def("to_text", [](const Scenario& s) { return format_scenario(s); })
       .def("__repr__", [](const Scenario& s) {
          return "<Scenario mode=" + to_string(s.mode) + " seed=" + std::to_string(s.seed) + ">";
       });

   m.def("parse_scenario", &parse_scenario, py::arg("text"));
   m.def("load_scenario", &load_scenario, py::arg("path"));

   py::class_<Trace>(m, "Trace")
       .def_property_readonly("block_count", [](const Trace& t) { return t.blocks.size(); })
       .def_property_readonly("message_count", [](const Trace& t) { return t.messages.size(); })
       .def_property_readonly("final_count", [](const Trace& t) { return t.finals.size(); })
       .def_readonly("end_time", &Trace::end_time)
       .def_readonly("convergence_height", &Trace::convergence_height)
       .def_readonly("sync_violations", &Trace::sync_violations)
       .def_readonly("scenario", &Trace::scenario)
       .def("max_height",
            [](const Trace& t) {
               Height h = 0;
               for (const auto& b : t.blocks)
                  h = std::max(h, b.block.height);
               return h;
            })
       .def("to_jsonl",
            [](const Trace& t) {
               std::ostringstream out;
               write_trace(out, t);
               return out.str();
            })
       .def("save", [](const Trace& t, const std::string& path) { save_trace(path, t); }, py::arg("path"));

   m.def(
       "run",
       [](Scenario s) {
          s.schedule.seed = s.seed;
          s.validate();
          py::gil_scoped_release release;
          return run(s);
       },
       py::arg("scenario"), "Simulate one scenario and return its trace.");
   m.def("load_trace", &load_trace, py::arg("path"));
   m.def(
       "trace_from_jsonl",
       [](const std::string& text) {
          std::istringstream in(text);
          return read_trace(in);
       },
       py::arg("text"));

   m.def("evaluate", &evaluate_py, py::arg("trace"), py::arg("check") = "all", py::arg("target") = py::none(),
         py::arg("deadline") = py::none(),
         "Run the safety, liveness and accountability checks. Returns a dict.");
   m.def(
       "evidence",
       [](Trace& trace) {
          const ChainState state = replay(trace);
          std::vector<std::string> out;
          for (const auto& e : collect_evidence(trace, state))
             out.push_back(evidence_json(e));
          return out;
       },
       py::arg("trace"), "Evidence records as JSON strings.");

   m.def(
       "check_contradicting",
       [](std::tuple<Height, Height, Height> a, std::tuple<Height, Height, Height> b) -> std::optional<std::string> {
          const auto e = check_contradicting(header_block(1, a), header_block(2, b));
          if (!e)
             return std::nullopt;
          return e->clause;
       },
       py::arg("a"), py::arg("b"),
       "Headers as (h_previous, h_prevoted, height) of one author. Returns the failed clause or None.");
}
