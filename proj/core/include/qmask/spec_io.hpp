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

#pragma once

// JSON channel specs and strategies. Complex numbers are [re, im] pairs,
// matrices are row-major nested arrays.

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qmask/region.hpp"

namespace qmask {

using ChannelVariant = std::variant<StateDependentChannel, MeasurementChannel, RandomParameterChannel>;

struct ChannelSpec {
  ChannelVariant channel;
  std::optional<StateSource> source;
};

/// Mixed sources ("density") are purified here; the purifying system is
/// folded into E and the channel is extended to ignore it.
ChannelSpec parse_channel_spec(std::string_view text);
std::string emit_channel_spec(const ChannelSpec& spec);
ChannelSpec load_channel_spec(const std::string& path);

/// Channel and source ready for evaluation; random-parameter channels are
/// lifted, a missing source is allowed only when dimE == 1.
struct ResolvedChannel {
  AnyChannel channel;
  StateSource source;
};
ResolvedChannel resolve(const ChannelSpec& spec);

ValidationReport validate(const ChannelSpec& spec);

Strategy parse_strategy(std::string_view text);
std::string emit_strategy(const Strategy& strategy);
Strategy load_strategy(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace qmask
