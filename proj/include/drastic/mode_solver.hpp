// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drastic/error.hpp"
#include "drastic/pareto.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace drastic {

enum class Mode { MinBitrate, MaxQuality, MinTime, Typical };

std::string_view to_string(Mode mode) noexcept;  // "min-bitrate", "max-quality", ...
std::optional<Mode> parse_mode(std::string_view text);

struct Weights {
    double alpha = 0;  // quality
    double beta = 0;   // bitrate
    double gamma = 0;  // time

    friend bool operator==(const Weights&, const Weights&) = default;
};

// One DRASTIC mode with its bounds. Every bound that is set is enforced with
// a strict comparison; a bound may be +inf.
//   MinBitrate: min r  s.t. q > q_min, t < t_max
//   MaxQuality: max q  s.t. r < r_max, t < t_max
//   MinTime:    min t  s.t. q > q_min, r < r_max
//   Typical:    max alpha*q' - beta*r' - gamma*t' under all three bounds
struct ModeRequest {
    Mode mode = Mode::MinBitrate;
    std::optional<double> q_min;
    std::optional<double> t_max;
    std::optional<double> r_max;
    std::optional<Weights> weights;

    friend bool operator==(const ModeRequest&, const ModeRequest&) = default;
};

// Throws InvalidArgument when a bound required by the mode is missing, or the
// Typical weights are negative or do not sum to 1 (within 1e-9).
void validate(const ModeRequest& request);

// Strict feasibility under every bound the request sets.
bool satisfies(const ModeRequest& request, const ObjectivePoint& p) noexcept;

struct Selection {
    std::string config_id;
    ObjectivePoint point;
    double objective_value = 0;
    std::size_t feasible_count = 0;
};

// Smallest move of each active bound that would admit at least one point,
// keeping the other bounds fixed. Each value is the point coordinate the
// bound has to get past (q_min below it, t_max / r_max above it); empty when
// relaxing that bound alone cannot help.
struct InfeasibleDiagnostics {
    std::optional<double> q_min_below;
    std::optional<double> t_max_above;
    std::optional<double> r_max_above;
};

class Infeasible : public EmptyResult {
public:
    Infeasible(const std::string& message, InfeasibleDiagnostics diagnostics)
        : EmptyResult("mode_solver", message), diagnostics_(diagnostics) {}

    const InfeasibleDiagnostics& diagnostics() const noexcept { return diagnostics_; }

private:
    InfeasibleDiagnostics diagnostics_;
};

// Ties on the primary objective are broken by q desc, t asc, r asc (skipping
// the primary), then config_id ascending. Typical-mode axes are min-max
// normalized over the non-dominated feasible points (a zero range maps to
// 0.5), so the value is the same whether `points` is a full set or its front.
Selection solve(const ModeRequest& request, std::span<const ObjectivePoint> points);
Selection solve_on_front(const ModeRequest& request, const ParetoFront& front);

} // namespace drastic
