// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drastic/config_space.hpp"
#include "drastic/error.hpp"
#include "drastic/measurement.hpp"
#include "drastic/mode_solver.hpp"
#include "drastic/pareto.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drastic {

// What plan() does when a segment's request has no feasible front member.
//   Abort     - propagate Infeasible.
//   Skip      - emit the rest of the segment as one unselected step.
//   RelaxNone - keep encoding with the previous selection, constraints
//               untouched, steps flagged; behaves as Skip when nothing was
//               selected before.
enum class InfeasiblePolicy { Abort, Skip, RelaxNone };

std::string_view to_string(InfeasiblePolicy policy) noexcept;
std::optional<InfeasiblePolicy> parse_policy(std::string_view text);

struct ScheduleEntry {
    VideoSegment segment;
    ModeRequest request;
};

struct SwitchSchedule {
    std::vector<ScheduleEntry> entries;
    InfeasiblePolicy on_infeasible = InfeasiblePolicy::Abort;
};

// Throws InvalidArgument unless segments are valid, contiguous and
// non-overlapping in frame index and every request is valid.
void validate(const SwitchSchedule& schedule);

// Schedule file: optional "on_infeasible=<policy>" line, then one entry per
// line: video_id,start_frame,end_frame,<request key=value form>. Lines
// starting with '#' are comments. Segment geometry defaults to 416x240@30.
SwitchSchedule parse_schedule(std::string_view text);
std::string format_schedule(const SwitchSchedule& schedule);

enum class StepStatus { Selected, Skipped, Held };
std::string_view to_string(StepStatus status) noexcept;

struct SwitchStep {
    std::string video_id;
    long frame_start = 0;
    long frame_end = 0;
    std::string config_id;                   // empty when skipped
    std::optional<Measurement> measurement;  // the segment's record for config_id
    ModeRequest request;
    StepStatus status = StepStatus::Selected;

    long span() const noexcept { return frame_end - frame_start + 1; }
};

// Frame-weighted mean PSNR and bitrate, total encoding time. Time is the
// segment record prorated by the fraction of the segment a step covers.
struct Aggregate {
    double mean_psnr_db = 0;
    double total_enc_time_s = 0;
    double mean_bitrate_kbps = 0;
    long frames = 0;  // frames covered by a selection
};

struct SegmentTotals {
    std::string video_id;
    long frame_start = 0;
    long frame_end = 0;
    std::optional<Aggregate> totals;  // empty when no frame got a selection
};

struct SwitchTrace {
    std::vector<SwitchStep> steps;
    std::vector<SegmentTotals> segments;
    std::optional<Aggregate> overall;
};

class MissingFront : public Error {
public:
    explicit MissingFront(const std::string& video_id)
        : Error("switch_planner", "no Pareto front for video " + video_id) {}
};

using FrontMap = std::map<std::string, ParetoFront, std::less<>>;
FrontMap to_front_map(std::span<const VideoFront> fronts);

// Walks each segment GOP by GOP: selects from the segment's front, advances
// by the selected configuration's GOP size (the last step of a segment is
// truncated to its boundary). `catalog` maps config ids to GOP modes and
// defaults to the extended 216-configuration set.
SwitchTrace plan(const SwitchSchedule& schedule, const FrontMap& fronts);
SwitchTrace plan(const SwitchSchedule& schedule, const FrontMap& fronts,
                 std::span<const GopConfiguration> catalog);

// A single configuration used for the whole schedule.
struct StaticCandidate {
    std::string config_id;
    std::vector<Aggregate> per_segment;
    Aggregate overall;
};

struct ComparisonReport {
    SwitchTrace dynamic;
    // Configurations present on every segment's front and feasible for every
    // segment's request, in natural id order.
    std::vector<StaticCandidate> feasible_static;
    std::optional<std::size_t> best_quality;  // index into feasible_static
    std::optional<std::size_t> best_time;
    std::optional<std::size_t> best_bitrate;
};

ComparisonReport compare_static(const SwitchSchedule& schedule, const FrontMap& fronts);
ComparisonReport compare_static(const SwitchSchedule& schedule, const FrontMap& fronts,
                                 std::span<const GopConfiguration> catalog);

// Columnar trace: video_id,frame_start,frame_end,config_id,psnr_db,
// enc_time_s,bitrate_kbps,status,request.
std::string format_trace(const SwitchTrace& trace);
// Human-readable per-segment summary table.
std::string format_trace_summary(const SwitchTrace& trace);
std::string format_report(const ComparisonReport& report);

} // namespace drastic
