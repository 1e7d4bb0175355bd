// SPDX-License-Identifier: Apache-2.0
#include "drastic/switch_planner.hpp"

#include "drastic/request_io.hpp"
#include "drastic/table_io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

namespace drastic {

namespace {

constexpr std::string_view kModule = "switch_planner";

const std::vector<GopConfiguration>& default_catalog() {
    static const auto catalog = enumerate_extended();
    return catalog;
}

const ObjectivePoint* find_member(const ParetoFront& front, std::string_view id) {
    for (const auto& p : front.members)
        if (p.config_id == id) return &p;
    return nullptr;
}

const ParetoFront& front_for(const FrontMap& fronts, const std::string& video_id) {
    auto it = fronts.find(video_id);
    if (it == fronts.end()) throw MissingFront(video_id);
    return it->second;
}

int gop_of(std::span<const GopConfiguration> catalog, std::string_view id) {
    const auto* c = find_configuration(catalog, id);
    if (!c) throw Error(std::string(kModule), "configuration " + std::string(id) + " not in catalog");
    return gop_size(c->mode);
}

Measurement record_of(const ObjectivePoint& p, const std::string& video_id) {
    return {p.config_id, video_id, p.q, p.t, p.r};
}

// Accumulates frame-weighted means and prorated time. Frames are pooled per
// record first so a long run of short steps does not pile up rounding error.
class Accumulator {
public:
    void add(const Measurement& m, long span, long segment_frames) {
        for (auto& r : runs_)
            if (r.m.config_id == m.config_id && r.m.video_id == m.video_id &&
                r.segment_frames == segment_frames) {
                r.span += span;
                return;
            }
        runs_.push_back({m, span, segment_frames});
    }
    void add(const Aggregate& a) {
        if (a.frames > 0) parts_.push_back(a);
    }
    std::optional<Aggregate> result() const {
        long frames = 0;
        double psnr = 0, time = 0, bitrate = 0;
        for (const auto& r : runs_) {
            const auto span = static_cast<double>(r.span);
            frames += r.span;
            psnr += r.m.psnr_db * span;
            bitrate += r.m.bitrate_kbps * span;
            time += r.span == r.segment_frames
                        ? r.m.enc_time_s
                        : r.m.enc_time_s * span / static_cast<double>(r.segment_frames);
        }
        for (const auto& a : parts_) {
            const auto f = static_cast<double>(a.frames);
            frames += a.frames;
            psnr += a.mean_psnr_db * f;
            bitrate += a.mean_bitrate_kbps * f;
            time += a.total_enc_time_s;
        }
        if (frames == 0) return std::nullopt;
        const auto f = static_cast<double>(frames);
        return Aggregate{psnr / f, time, bitrate / f, frames};
    }

private:
    struct Run {
        Measurement m;
        long span;
        long segment_frames;
    };
    std::vector<Run> runs_;
    std::vector<Aggregate> parts_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

std::string_view to_string(InfeasiblePolicy policy) noexcept {
    switch (policy) {
    case InfeasiblePolicy::Abort: return "abort";
    case InfeasiblePolicy::Skip: return "skip";
    case InfeasiblePolicy::RelaxNone: return "relax_none";
    }
    return "?";
}

std::optional<InfeasiblePolicy> parse_policy(std::string_view text) {
    auto t = table_io::to_lower(table_io::trim(text));
    std::replace(t.begin(), t.end(), '-', '_');
    if (t == "abort") return InfeasiblePolicy::Abort;
    if (t == "skip") return InfeasiblePolicy::Skip;
    if (t == "relax_none") return InfeasiblePolicy::RelaxNone;
    return std::nullopt;
}

std::string_view to_string(StepStatus status) noexcept {
    switch (status) {
    case StepStatus::Selected: return "selected";
    case StepStatus::Skipped: return "infeasible-skipped";
    case StepStatus::Held: return "infeasible-held";
    }
    return "?";
}

void validate(const SwitchSchedule& schedule) {
    const ScheduleEntry* prev = nullptr;
    for (const auto& e : schedule.entries) {
        validate(e.segment);
        validate(e.request);
        if (prev && e.segment.start_frame != prev->segment.end_frame + 1)
            throw InvalidArgument(std::string(kModule),
                                  "segment " + e.segment.video_id + " starts at frame " +
                                      std::to_string(e.segment.start_frame) + ", expected " +
                                      std::to_string(prev->segment.end_frame + 1));
        prev = &e;
    }
}

SwitchSchedule parse_schedule(std::string_view text) {
    SwitchSchedule schedule;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = table_io::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.starts_with("on_infeasible=")) {
            auto p = parse_policy(line.substr(14));
            if (!p) throw ParseError(std::string(kModule), "unknown on_infeasible policy", line_no);
            schedule.on_infeasible = *p;
            continue;
        }
        std::array<std::string_view, 3> head;
        auto rest = line;
        for (auto& field : head) {
            const auto comma = rest.find(',');
            if (comma == std::string_view::npos)
                throw ParseError(std::string(kModule),
                                 "expected video_id,start_frame,end_frame,<request>", line_no);
            field = table_io::trim(rest.substr(0, comma));
            rest = rest.substr(comma + 1);
        }
        ScheduleEntry entry;
        entry.segment = {std::string(head[0]), "SV001", 416, 240, 30.0,
                         static_cast<long>(table_io::parse_int(head[1], kModule, line_no, "start_frame")),
                         static_cast<long>(table_io::parse_int(head[2], kModule, line_no, "end_frame"))};
        try {
            entry.request = parse_request(rest);
        } catch (const ParseError& e) {
            throw ParseError(std::string(kModule), e.what(), line_no);
        }
        schedule.entries.push_back(std::move(entry));
    }
    try {
        validate(schedule);
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string(kModule), e.what());
    }
    return schedule;
}

std::string format_schedule(const SwitchSchedule& schedule) {
    std::string out = "on_infeasible=" + std::string(to_string(schedule.on_infeasible)) + "\n";
    for (const auto& e : schedule.entries)
        out += e.segment.video_id + "," + std::to_string(e.segment.start_frame) + "," +
               std::to_string(e.segment.end_frame) + "," + format_request(e.request) + "\n";
    return out;
}

FrontMap to_front_map(std::span<const VideoFront> fronts) {
    FrontMap map;
    for (const auto& vf : fronts) map.insert_or_assign(vf.video_id, vf.front);
    return map;
}

SwitchTrace plan(const SwitchSchedule& schedule, const FrontMap& fronts) {
    return plan(schedule, fronts, default_catalog());
}

SwitchTrace plan(const SwitchSchedule& schedule, const FrontMap& fronts,
                 std::span<const GopConfiguration> catalog) {
    validate(schedule);
    SwitchTrace trace;
    Accumulator overall;
    std::optional<Measurement> previous;

    for (const auto& entry : schedule.entries) {
        const auto& seg = entry.segment;
        const auto& front = front_for(fronts, seg.video_id);
        const long seg_frames = seg.frame_count();
        Accumulator seg_acc;

        long frame = seg.start_frame;
        while (frame <= seg.end_frame) {
            SwitchStep step;
            step.video_id = seg.video_id;
            step.frame_start = frame;
            step.request = entry.request;

            try {
                const auto sel = solve_on_front(entry.request, front);
                step.config_id = sel.config_id;
                step.measurement = record_of(sel.point, seg.video_id);
            } catch (const Infeasible&) {
                const bool hold = schedule.on_infeasible == InfeasiblePolicy::RelaxNone && previous;
                if (schedule.on_infeasible == InfeasiblePolicy::Abort) throw;
                if (!hold) {
                    step.status = StepStatus::Skipped;
                    step.frame_end = seg.end_frame;
                    trace.steps.push_back(std::move(step));
                    break;
                }
                step.status = StepStatus::Held;
                step.config_id = previous->config_id;
                const auto* member = find_member(front, previous->config_id);
                step.measurement = member ? record_of(*member, seg.video_id) : *previous;
            }

            const long gop = gop_of(catalog, step.config_id);
            step.frame_end = std::min(seg.end_frame, frame + gop - 1);
            seg_acc.add(*step.measurement, step.span(), seg_frames);
            overall.add(*step.measurement, step.span(), seg_frames);
            previous = step.measurement;
            frame = step.frame_end + 1;
            trace.steps.push_back(std::move(step));
        }
        trace.segments.push_back({seg.video_id, seg.start_frame, seg.end_frame, seg_acc.result()});
    }
    trace.overall = overall.result();
    return trace;
}

ComparisonReport compare_static(const SwitchSchedule& schedule, const FrontMap& fronts) {
    return compare_static(schedule, fronts, default_catalog());
}

ComparisonReport compare_static(const SwitchSchedule& schedule, const FrontMap& fronts,
                                 std::span<const GopConfiguration> catalog) {
    ComparisonReport report;
    report.dynamic = plan(schedule, fronts, catalog);
    if (schedule.entries.empty()) return report;

    // ids present on the first segment's front, filtered by every segment
    const auto& first = front_for(fronts, schedule.entries.front().segment.video_id);
    for (const auto& candidate : first.members) {
        StaticCandidate sc{candidate.config_id, {}, {}};
        Accumulator overall;
        bool feasible = true;
        for (const auto& entry : schedule.entries) {
            const auto* p = find_member(front_for(fronts, entry.segment.video_id), candidate.config_id);
            if (!p || !satisfies(entry.request, *p)) {
                feasible = false;
                break;
            }
            Accumulator seg;
            seg.add(record_of(*p, entry.segment.video_id), entry.segment.frame_count(),
                    entry.segment.frame_count());
            sc.per_segment.push_back(*seg.result());
            overall.add(sc.per_segment.back());
        }
        if (!feasible) continue;
        sc.overall = *overall.result();
        report.feasible_static.push_back(std::move(sc));
    }

    // Same tie order as the solver: primary, then q desc, t asc, r asc; the
    // candidate list is already in id order.
    auto pick = [&](Mode primary) -> std::optional<std::size_t> {
        if (report.feasible_static.empty()) return std::nullopt;
        auto key = [&](const Aggregate& a) {
            const std::array<double, 3> v{-a.mean_psnr_db, a.total_enc_time_s, a.mean_bitrate_kbps};
            const std::size_t first = primary == Mode::MaxQuality ? 0 : primary == Mode::MinTime ? 1 : 2;
            std::array<double, 3> k{v[first], 0, 0};
            std::size_t n = 1;
            for (std::size_t i = 0; i < 3; ++i)
                if (i != first) k[n++] = v[i];
            return k;
        };
        std::size_t best = 0;
        for (std::size_t i = 1; i < report.feasible_static.size(); ++i)
            if (key(report.feasible_static[i].overall) < key(report.feasible_static[best].overall)) best = i;
        return best;
    };
    report.best_quality = pick(Mode::MaxQuality);
    report.best_time = pick(Mode::MinTime);
    report.best_bitrate = pick(Mode::MinBitrate);
    return report;
}

std::string format_trace(const SwitchTrace& trace) {
    table_io::Table t;
    t.header = {"video_id", "frame_start", "frame_end", "config_id", "psnr_db",
                "enc_time_s", "bitrate_kbps", "status", "request"};
    for (const auto& s : trace.steps) {
        table_io::Row row{s.video_id, std::to_string(s.frame_start), std::to_string(s.frame_end),
                          s.config_id};
        if (s.measurement) {
            row.push_back(table_io::format_number(s.measurement->psnr_db));
            row.push_back(table_io::format_number(s.measurement->enc_time_s));
            row.push_back(table_io::format_number(s.measurement->bitrate_kbps));
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        row.push_back(std::string(to_string(s.status)));
        row.push_back(format_request(s.request));
        t.rows.push_back(std::move(row));
    }
    return table_io::format(t);
}

std::string format_trace_summary(const SwitchTrace& trace) {
    std::ostringstream o;
    o << "segment  frames      configs          mean PSNR dB  total time s  mean kbps\n";
    for (const auto& seg : trace.segments) {
        std::vector<std::string> ids;
        for (const auto& s : trace.steps)
            if (s.video_id == seg.video_id && s.frame_start >= seg.frame_start &&
                s.frame_end <= seg.frame_end && !s.config_id.empty() &&
                std::find(ids.begin(), ids.end(), s.config_id) == ids.end())
                ids.push_back(s.config_id);
        std::string id_list;
        for (const auto& id : ids) id_list += (id_list.empty() ? "" : "+") + id;
        if (id_list.empty()) id_list = "(none)";

        char buf[256];
        const auto range = std::to_string(seg.frame_start) + "-" + std::to_string(seg.frame_end);
        if (seg.totals)
            std::snprintf(buf, sizeof buf, "%-8s %-11s %-16s %12s %13s %10s\n", seg.video_id.c_str(),
                          range.c_str(), id_list.c_str(), fmt(seg.totals->mean_psnr_db).c_str(),
                          fmt(seg.totals->total_enc_time_s).c_str(),
                          fmt(seg.totals->mean_bitrate_kbps).c_str());
        else
            std::snprintf(buf, sizeof buf, "%-8s %-11s %-16s %12s %13s %10s\n", seg.video_id.c_str(),
                          range.c_str(), id_list.c_str(), "-", "-", "-");
        o << buf;
    }
    if (trace.overall)
        o << "overall: mean PSNR " << fmt(trace.overall->mean_psnr_db) << " dB, total time "
          << fmt(trace.overall->total_enc_time_s) << " s, mean bitrate "
          << fmt(trace.overall->mean_bitrate_kbps) << " kbps over " << trace.overall->frames
          << " frames\n";
    return o.str();
}

std::string format_report(const ComparisonReport& report) {
    std::ostringstream o;
    o << "strategy,config_id,mean_psnr_db,total_enc_time_s,mean_bitrate_kbps\n";
    if (report.dynamic.overall) {
        const auto& a = *report.dynamic.overall;
        o << "dynamic,," << table_io::format_number(a.mean_psnr_db) << ','
          << table_io::format_number(a.total_enc_time_s) << ','
          << table_io::format_number(a.mean_bitrate_kbps) << '\n';
    } else {
        o << "dynamic,none selected,,,\n";
    }
    auto line = [&](const char* label, const std::optional<std::size_t>& idx) {
        if (!idx) {
            o << label << ",none feasible,,,\n";
            return;
        }
        const auto& c = report.feasible_static[*idx];
        o << label << ',' << c.config_id << ',' << table_io::format_number(c.overall.mean_psnr_db)
          << ',' << table_io::format_number(c.overall.total_enc_time_s) << ','
          << table_io::format_number(c.overall.mean_bitrate_kbps) << '\n';
    };
    line("static-best-quality", report.best_quality);
    line("static-best-time", report.best_time);
    line("static-best-bitrate", report.best_bitrate);
    return o.str();
}

} // namespace drastic
