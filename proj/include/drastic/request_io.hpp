// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drastic/mode_solver.hpp"

#include <string>
#include <string_view>

namespace drastic {

// Flat key=value form: "mode=min-bitrate qmin=35 tmax=600". Pairs are
// separated by whitespace or commas. Keys: mode, qmin, tmax, rmax, alpha,
// beta, gamma. Bounds accept "inf".
ModeRequest parse_request(std::string_view text);
std::string format_request(const ModeRequest& request);

} // namespace drastic
