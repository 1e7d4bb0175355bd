// SPDX-License-Identifier: Apache-2.0
#include "drastic/pareto.hpp"

#include "drastic/table_io.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace drastic {

namespace {

constexpr std::string_view kModule = "pareto_core";

void check_unique_ids(std::span<const ObjectivePoint> points) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(points.size());
    for (const auto& p : points)
        if (!seen.insert(p.config_id).second) throw DuplicateId(p.config_id);
}

bool same_objectives(const ObjectivePoint& a, const ObjectivePoint& b) noexcept {
    return a.q == b.q && a.t == b.t && a.r == b.r;
}

// j knocks i off the front: it dominates i, or duplicates it with a lower id.
bool eliminates(const ObjectivePoint& j, const ObjectivePoint& i) {
    if (dominates(j, i)) return true;
    return same_objectives(j, i) && table_io::natural_less(j.config_id, i.config_id);
}

bool survives(std::span<const ObjectivePoint> points, std::size_t i) {
    for (std::size_t j = 0; j < points.size(); ++j)
        if (j != i && eliminates(points[j], points[i])) return false;
    return true;
}

ParetoFront collect(std::span<const ObjectivePoint> points, const std::vector<char>& keep) {
    ParetoFront front;
    front.source_size = points.size();
    for (std::size_t i = 0; i < points.size(); ++i)
        if (keep[i]) front.members.push_back(points[i]);
    std::sort(front.members.begin(), front.members.end(),
              [](const ObjectivePoint& a, const ObjectivePoint& b) {
                  return table_io::natural_less(a.config_id, b.config_id);
              });
    return front;
}

} // namespace

ObjectivePoint to_point(const Measurement& m) {
    return {m.config_id, m.psnr_db, m.enc_time_s, m.bitrate_kbps};
}

std::vector<ObjectivePoint> to_points(std::span<const Measurement> rows) {
    std::vector<ObjectivePoint> out;
    out.reserve(rows.size());
    for (const auto& m : rows) out.push_back(to_point(m));
    return out;
}

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept {
    if (a.q < b.q || a.t > b.t || a.r > b.r) return false;
    return a.q > b.q || a.t < b.t || a.r < b.r;
}

ParetoFront pareto_front(std::span<const ObjectivePoint> points) {
    check_unique_ids(points);
    const auto n = static_cast<long>(points.size());
    std::vector<char> keep(points.size(), 0);

#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = survives(points, static_cast<std::size_t>(i));

    return collect(points, keep);
}

ParetoFront pareto_front_serial(std::span<const ObjectivePoint> points) {
    check_unique_ids(points);
    std::vector<char> keep(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) keep[i] = survives(points, i);
    return collect(points, keep);
}

bool is_front(std::span<const ObjectivePoint> points, std::span<const ObjectivePoint> candidate) {
    const auto reference = pareto_front_serial(points);
    if (reference.members.size() != candidate.size()) return false;
    std::vector<std::string_view> ids;
    ids.reserve(candidate.size());
    for (const auto& c : candidate) ids.push_back(c.config_id);
    std::sort(ids.begin(), ids.end(), table_io::natural_less);
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) return false;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] != reference.members[i].config_id) return false;
    return true;
}

std::vector<VideoFront> fronts_by_video(std::span<const Measurement> rows) {
    std::map<std::string, std::vector<ObjectivePoint>> grouped;
    for (const auto& m : rows) grouped[m.video_id].push_back(to_point(m));
    std::vector<VideoFront> out;
    for (auto& [video, points] : grouped) out.push_back({video, pareto_front(points)});
    return out;
}

std::string format_front_file(std::span<const Measurement> rows,
                              std::span<const VideoFront> fronts, bool all_rows) {
    std::map<std::string, std::unordered_set<std::string>, std::less<>> members;
    for (const auto& vf : fronts)
        for (const auto& p : vf.front.members) members[vf.video_id].insert(p.config_id);

    table_io::Table t;
    t.header = {"config_id", "video_id", "psnr_db", "enc_time_s", "bitrate_kbps", "pareto"};
    auto emit = [&](const Measurement& m, bool member) {
        t.rows.push_back({m.config_id, m.video_id, table_io::format_number(m.psnr_db),
                          table_io::format_number(m.enc_time_s),
                          table_io::format_number(m.bitrate_kbps), member ? "1" : "0"});
    };
    if (all_rows) {
        for (const auto& m : rows) {
            auto it = members.find(m.video_id);
            emit(m, it != members.end() && it->second.count(m.config_id));
        }
    } else {
        for (const auto& vf : fronts)
            for (const auto& p : vf.front.members)
                emit({p.config_id, vf.video_id, p.q, p.t, p.r}, true);
    }
    return table_io::format(t);
}

std::vector<VideoFront> parse_front_file(std::string_view text) {
    auto table = table_io::parse(text, kModule);
    const auto rows = parse_measurements(text);
    const auto flag_col = std::find(table.header.begin(), table.header.end(), "pareto");
    const bool has_flag = flag_col != table.header.end();
    const auto flag_index = static_cast<std::size_t>(flag_col - table.header.begin());

    std::map<std::string, VideoFront> grouped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& vf = grouped[rows[i].video_id];
        vf.video_id = rows[i].video_id;
        ++vf.front.source_size;
        if (has_flag) {
            const auto flag = table_io::trim(table.rows[i][flag_index]);
            if (flag == "0") continue;
            if (flag != "1")
                throw ParseError(std::string(kModule), "pareto flag must be 0 or 1", table.lines[i]);
        }
        vf.front.members.push_back(to_point(rows[i]));
    }
    std::vector<VideoFront> out;
    for (auto& [video, vf] : grouped) {
        check_unique_ids(vf.front.members);
        std::sort(vf.front.members.begin(), vf.front.members.end(),
                  [](const ObjectivePoint& a, const ObjectivePoint& b) {
                      return table_io::natural_less(a.config_id, b.config_id);
                  });
        out.push_back(std::move(vf));
    }
    return out;
}

} // namespace drastic
