// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drastic/error.hpp"
#include "drastic/measurement.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drastic {

// One configuration in objective space: maximize q (PSNR dB), minimize
// t (encoding time s) and r (bitrate kbps).
struct ObjectivePoint {
    std::string config_id;
    double q = 0;
    double t = 0;
    double r = 0;

    friend bool operator==(const ObjectivePoint&, const ObjectivePoint&) = default;
};

ObjectivePoint to_point(const Measurement& m);
std::vector<ObjectivePoint> to_points(std::span<const Measurement> rows);

struct ParetoFront {
    std::vector<ObjectivePoint> members;  // ascending natural config_id order
    std::size_t source_size = 0;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& id)
        : Error("pareto_core", "duplicate config_id " + id) {}
};

// Weak Pareto dominance: a is no worse on every objective and strictly
// better on at least one. Comparisons are exact.
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept;

// Non-dominated subset. Of several points with identical objective vectors
// only the one with the lowest config_id is kept. The scan is parallel over
// candidates (OpenMP); membership does not depend on the schedule.
ParetoFront pareto_front(std::span<const ObjectivePoint> points);

// Single-threaded reference for pareto_front; same contract.
ParetoFront pareto_front_serial(std::span<const ObjectivePoint> points);

// True iff `candidate` is exactly the front of `points` (as a set of ids).
bool is_front(std::span<const ObjectivePoint> points, std::span<const ObjectivePoint> candidate);

// Per-video fronts of a measurement table, keyed and ordered by video_id.
struct VideoFront {
    std::string video_id;
    ParetoFront front;
};
std::vector<VideoFront> fronts_by_video(std::span<const Measurement> rows);

// Front file: measurement columns plus a pareto flag (1 member, 0 not).
// When `all_rows` is false only members are written.
std::string format_front_file(std::span<const Measurement> rows,
                              std::span<const VideoFront> fronts, bool all_rows = false);

// Reads a front file (or plain measurement file) back into per-video fronts.
// Rows flagged pareto=0 are skipped; a file without the flag column is taken
// as members verbatim.
std::vector<VideoFront> parse_front_file(std::string_view text);

} // namespace drastic
