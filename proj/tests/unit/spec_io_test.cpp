// Copyright 2026 The qmask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmask/spec_io.hpp"

#include <gtest/gtest.h>

#include "qmask/error.hpp"
#include "qmask/examples.hpp"
#include "support/random_objects.hpp"

namespace qmask {
namespace {

std::string fixture(const std::string& name) { return std::string(QMASK_FIXTURE_DIR) + "/" + name; }

constexpr const char* kIdentityDoc = R"({
  "type": "kraus",
  "dims": {"E": 1, "A": 2, "B": 2},
  "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]
})";

TEST(ChannelSpec, MinimalIdentityDocument) {
  const ChannelSpec spec = parse_channel_spec(kIdentityDoc);
  ASSERT_TRUE(std::holds_alternative<StateDependentChannel>(spec.channel));
  EXPECT_TRUE(validate(spec).ok());
  const auto& ch = std::get<StateDependentChannel>(spec.channel);
  EXPECT_EQ(linalg::max_abs(ch.kraus()[0] - Matrix::Identity(2, 2)), 0.0);
}

TEST(ChannelSpec, NonCompletingPovmNamesResidual) {
  const char* doc = R"({
    "type": "measurement",
    "dims": {"E": 1, "A": 2},
    "povm": {"labels": ["0", "1"],
             "elements": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
                          [[[0, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}
  })";
  try {
    parse_channel_spec(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("completeness"), std::string::npos) << e.what();
  }
}

TEST(ChannelSpec, SchemaErrors) {
  try {
    parse_channel_spec(R"({"type": "kraus", "dims": {"E": 1, "A": 2}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    EXPECT_NE(std::string(e.what()).find("'B'"), std::string::npos);
  }
  EXPECT_THROW(parse_channel_spec("{not json"), Error);
  EXPECT_THROW(parse_channel_spec(R"({"type": "other"})"), Error);
  EXPECT_THROW(parse_channel_spec(R"({"type": "kraus", "dims": {"E": 1, "A": 2, "B": 2},
                                      "kraus": [[[[1, 0]], [[0, 0]]]]})"),
               Error);
}

TEST(ChannelSpec, DepolarizingFixtureHasFourBranches) {
  const ChannelSpec spec = load_channel_spec(fixture("example1.json"));
  ASSERT_TRUE(std::holds_alternative<RandomParameterChannel>(spec.channel));
  const auto& rpc = std::get<RandomParameterChannel>(spec.channel);
  EXPECT_EQ(rpc.num_states(), 4);
  const auto built = examples::build_depolarizing(0.5);
  for (int s = 0; s < 4; ++s) {
    EXPECT_NEAR(rpc.q()[s], built.q()[s], 1e-15);
    EXPECT_LT(linalg::max_abs(rpc.branch_kraus()[s][0] - built.branch_kraus()[s][0]), 1e-15);
  }
}

TEST(ChannelSpec, FixturesValidateAndRoundTrip) {
  for (const char* name : {"identity.json", "example1.json", "example2.json", "example3_meas.json",
                           "modadd.json"}) {
    const ChannelSpec spec = load_channel_spec(fixture(name));
    EXPECT_TRUE(validate(spec).ok()) << name;
    const std::string once = emit_channel_spec(spec);
    EXPECT_EQ(emit_channel_spec(parse_channel_spec(once)), once) << name;
  }
}

TEST(ChannelSpec, RandomChannelRoundTripIsBitExact) {
  CounterRng rng(70, 0, 0);
  const auto ch = testing::random_channel(rng, 2, 2, 3, 2);
  const StateSource src = testing::random_source(rng, 2, 2, 3);
  const ChannelSpec back = parse_channel_spec(emit_channel_spec({ch, src}));
  const auto& k = std::get<StateDependentChannel>(back.channel).kraus();
  ASSERT_EQ(k.size(), ch.kraus().size());
  for (std::size_t i = 0; i < k.size(); ++i) EXPECT_TRUE(k[i] == ch.kraus()[i]);
  EXPECT_TRUE(back.source->vector() == src.vector());
}

TEST(ChannelSpec, MixedSourceIsPurifiedIntoE) {
  // rho on E0 E C = 1/2 (|000><000| + |111><111|).
  const char* doc = R"({
    "type": "measurement",
    "dims": {"E": 2, "A": 2},
    "povm": {"labels": ["0", "1"],
             "elements": [
      [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]],
      [[[0,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]]},
    "source": {"dims": {"E0": 2, "E": 2, "C": 2},
               "density": [
      [[0.5,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0.5,0]]]}
  })";
  const ChannelSpec spec = parse_channel_spec(doc);
  ASSERT_TRUE(spec.source.has_value());
  const StateSource& src = *spec.source;
  EXPECT_EQ(src.dim_e(), 4);  // G (rank 2) times E
  const auto& ch = std::get<MeasurementChannel>(spec.channel);
  EXPECT_EQ(ch.dim_e(), 4);
  const std::vector<int> dims{2, 2, 2, 2};  // E0 G E C
  const Matrix reduced = linalg::partial_trace(src.density(), dims, {true, false, true, true});
  Matrix expect = Matrix::Zero(8, 8);
  expect(0, 0) = expect(7, 7) = 0.5;
  EXPECT_LT(linalg::max_abs(reduced - expect), 1e-12);
  // Outcome statistics with the measurement ignoring G match the mixed source.
  const auto resolved = resolve(spec);
  const auto p = evaluate_strategy(resolved.source, examples::projection_strategy(0.5), resolved.channel);
  EXPECT_GE(p.leakage, 0.0);
}

TEST(ChannelSpec, ResolveLiftsRandomParameter) {
  const auto resolved = resolve(load_channel_spec(fixture("example2.json")));
  EXPECT_EQ(resolved.source.dim_e0(), 2);
  const auto p = evaluate_strategy(resolved.source, examples::projection_strategy(0.5), resolved.channel);
  EXPECT_NEAR(p.rate, 0.5, 1e-9);
  EXPECT_NEAR(p.leakage, 0.3112781245, 1e-9);
}

TEST(ChannelSpec, ResolveNeedsSourceWhenStateful) {
  const ChannelSpec spec{examples::projection_measurement(0.5).channel, std::nullopt};
  EXPECT_THROW(resolve(spec), Error);
}

TEST(StrategySpec, RoundTrip) {
  const Strategy s = examples::depolarizing_correction_strategy();
  const Strategy back = parse_strategy(emit_strategy(s));
  EXPECT_EQ(back.hash(), s.hash());
  const Strategy file = load_strategy(fixture("strategies/projection_half.json"));
  EXPECT_EQ(file.hash(), examples::projection_strategy(0.5).hash());
}

}  // namespace
}  // namespace qmask
