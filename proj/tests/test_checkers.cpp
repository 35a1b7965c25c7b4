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

#include <gtest/gtest.h>

#include <algorithm>

using namespace lbft;

namespace {

struct Outcome {
   Trace trace;
   ChainState state;
   Verdict verdict;
};

Outcome simulate(const std::string& text, CheckOptions options = {})
{
   auto trace = run(parse_scenario(text));
   auto state = replay(trace);
   auto verdict = evaluate(trace, state, options);
   return {std::move(trace), std::move(state), std::move(verdict)};
}

}  // namespace

TEST(Liveness, CrashedQuorumStallsFinality)
{
   CheckOptions options;
   options.deadline = 10;
   const auto out = simulate("proposers 4\nround_length 4\nbehavior 2-3 crashed\nstop_height 40\n", options);
   EXPECT_TRUE(out.verdict.safety.pass);
   EXPECT_FALSE(out.verdict.liveness.pass);
   EXPECT_EQ(exit_code(out.verdict), 3);

   const auto ok = simulate("proposers 4\nround_length 4\nbehavior 3 crashed\nstop_height 40\n", options);
   EXPECT_TRUE(ok.verdict.liveness.pass);
   EXPECT_TRUE(ok.verdict.liveness.exercised);
}

TEST(Liveness, TargetBeyondTraceFails)
{
   const auto trace = run(parse_scenario("proposers 4\nround_length 4\nstop_height 40\n"));
   EXPECT_FALSE(check_liveness(trace, 500, 20).pass);
   EXPECT_TRUE(check_liveness(trace, 5, 20).pass);
   EXPECT_EQ(default_deadline(trace.scenario), 302);
}

TEST(Accountability, EquivocatorsAreFlaggedAndHonestAreNot)
{
   const auto out = simulate("proposers 7\nround_length 7\nbehavior 0-1 equivocate\ngst 100\nstop_height 60\n");
   const auto& acc = out.verdict.accountability;
   EXPECT_TRUE(acc.pass);
   EXPECT_TRUE(acc.wrongly_flagged.empty());
   EXPECT_TRUE(acc.missed.empty());
   EXPECT_FALSE(acc.flagged.empty());
   for (auto id : acc.flagged)
      EXPECT_LT(id.value, 2u);
}

TEST(Accountability, UnderstatingApproverCaught)
{
   const auto out = simulate(
       "mode general\nproposers 4\nround_length 4\nbehavior 3 understate\ngst 40\nstop_height 40\n");
   const auto& acc = out.verdict.accountability;
   EXPECT_TRUE(acc.pass) << format_verdict(out.verdict, out.trace.scenario);
   EXPECT_EQ(acc.flagged, std::vector<ProposerId>{ProposerId{3}});
}

TEST(Safety, SplitWithTooManyByzantineBreaks)
{
   const auto out = simulate("proposers 7\nround_length 7\nbehavior 0-2 split\npartition 3-4 | 5-6\n"
                             "drop_rate 0\nmax_pre_gst_delay 2\ngst 400\nstop_height 120\n");
   EXPECT_FALSE(out.verdict.safety.pass);
   ASSERT_TRUE(out.verdict.safety.witness.has_value());
   EXPECT_EQ(exit_code(out.verdict), 2);
   const auto& acc = out.verdict.accountability;
   EXPECT_TRUE(acc.wrongly_flagged.empty());
   EXPECT_TRUE(acc.missed.empty());
   EXPECT_FALSE(acc.flagged.empty());
   EXPECT_NE(format_verdict(out.verdict, out.trace.scenario).find("safety: fail"), std::string::npos);
}

TEST(Evidence, JsonRoundTrip)
{
   const auto out = simulate("proposers 7\nround_length 7\nbehavior 0 equivocate\ngst 100\nstop_height 40\n");
   ASSERT_FALSE(out.verdict.accountability.evidence.empty());
   const auto& e = out.verdict.accountability.evidence.front();
   const auto back = evidence_from_json(evidence_json(e));
   EXPECT_EQ(back.author, e.author);
   ASSERT_TRUE(back.headers.has_value());
   EXPECT_EQ(*back.headers, *e.headers);
   EXPECT_EQ(evidence_json(back), evidence_json(e));
}

TEST(Oracles, HonestTraceHasNoDuplicateQuorums)
{
   const auto out = simulate("proposers 7\nround_length 7\ngst 80\nstop_height 60\n");
   EXPECT_TRUE(duplicate_quorum_heights(out.state).empty());
   EXPECT_FALSE(tally_recount_mismatch(out.state).has_value());
}

TEST(ExitCode, FirstFailureWins)
{
   Verdict v;
   EXPECT_EQ(exit_code(v), 0);
   v.accountability.pass = false;
   EXPECT_EQ(exit_code(v), 4);
   v.liveness.pass = false;
   EXPECT_EQ(exit_code(v), 3);
   v.safety.pass = false;
   EXPECT_EQ(exit_code(v), 2);
}
