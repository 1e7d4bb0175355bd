// SPDX-License-Identifier: Apache-2.0
#include "drastic/measurement.hpp"

#include "drastic/error.hpp"
#include "drastic/table_io.hpp"

#include <algorithm>
#include <cmath>

namespace drastic {

namespace {

constexpr std::string_view kModule = "encoder_backend";

const table_io::Row kMeasurementHeader{"config_id", "video_id", "psnr_db", "enc_time_s",
                                       "bitrate_kbps"};
const table_io::Row kSegmentHeader{"video_id", "source_id", "width", "height",
                                   "framerate", "start_frame", "end_frame"};

bool positive(double v) { return std::isfinite(v) && v > 0; }

} // namespace

void validate(const VideoSegment& s) {
    if (s.video_id.empty()) throw InvalidArgument(std::string(kModule), "segment without video_id");
    if (s.start_frame > s.end_frame)
        throw InvalidArgument(std::string(kModule), "segment " + s.video_id + ": start_frame > end_frame");
    if (s.width <= 0 || s.height <= 0 || !positive(s.framerate))
        throw InvalidArgument(std::string(kModule),
                              "segment " + s.video_id + ": width, height and framerate must be positive");
}

std::vector<VideoSegment> reference_segments() {
    return {
        {"V001", "SV001", 416, 240, 30.0, 1, 100},
        {"V002", "SV001", 416, 240, 30.0, 101, 200},
    };
}

void validate(const Measurement& m) {
    if (!positive(m.psnr_db) || !positive(m.enc_time_s) || !positive(m.bitrate_kbps))
        throw InvalidArgument(std::string(kModule), "measurement (" + m.config_id + ", " +
                                                        m.video_id +
                                                        ") has a non-positive objective");
}

double bits_per_sample(const Measurement& m, const VideoSegment& segment) {
    const double samples_per_second =
        static_cast<double>(segment.width) * segment.height * segment.framerate;
    return m.bitrate_kbps * 1000.0 / samples_per_second;
}

std::vector<Measurement> parse_measurements(std::string_view text) {
    auto t = table_io::parse(text, kModule);
    if (t.header.size() < kMeasurementHeader.size() ||
        !std::equal(kMeasurementHeader.begin(), kMeasurementHeader.end(), t.header.begin()))
        throw ParseError(std::string(kModule), "unexpected measurement header", 1);

    std::vector<Measurement> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const auto line = t.lines[i];
        Measurement m{std::string(table_io::trim(r[0])), std::string(table_io::trim(r[1])),
                      table_io::parse_double(r[2], kModule, line, "psnr_db"),
                      table_io::parse_double(r[3], kModule, line, "enc_time_s"),
                      table_io::parse_double(r[4], kModule, line, "bitrate_kbps")};
        if (m.config_id.empty() || m.video_id.empty())
            throw ParseError(std::string(kModule), "empty identifier", line);
        if (!positive(m.psnr_db) || !positive(m.enc_time_s) || !positive(m.bitrate_kbps))
            throw ParseError(std::string(kModule), "objectives must be positive and finite", line);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Measurement> load_fixture(const std::filesystem::path& path) {
    return parse_measurements(table_io::read_text(path, kModule));
}

std::string format_measurements(std::span<const Measurement> rows) {
    table_io::Table t;
    t.header = kMeasurementHeader;
    for (const auto& m : rows)
        t.rows.push_back({m.config_id, m.video_id, table_io::format_number(m.psnr_db),
                          table_io::format_number(m.enc_time_s),
                          table_io::format_number(m.bitrate_kbps)});
    return table_io::format(t);
}

std::vector<VideoSegment> parse_segments(std::string_view text) {
    auto t = table_io::parse(text, kModule);
    if (t.header != kSegmentHeader)
        throw ParseError(std::string(kModule), "unexpected segment header", 1);
    std::vector<VideoSegment> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const auto line = t.lines[i];
        VideoSegment s{std::string(table_io::trim(r[0])), std::string(table_io::trim(r[1])),
                       static_cast<int>(table_io::parse_int(r[2], kModule, line, "width")),
                       static_cast<int>(table_io::parse_int(r[3], kModule, line, "height")),
                       table_io::parse_double(r[4], kModule, line, "framerate"),
                       static_cast<long>(table_io::parse_int(r[5], kModule, line, "start_frame")),
                       static_cast<long>(table_io::parse_int(r[6], kModule, line, "end_frame"))};
        try {
            validate(s);
        } catch (const InvalidArgument& e) {
            throw ParseError(std::string(kModule), e.what(), line);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string format_segments(std::span<const VideoSegment> segments) {
    table_io::Table t;
    t.header = kSegmentHeader;
    for (const auto& s : segments)
        t.rows.push_back({s.video_id, s.source_id, std::to_string(s.width),
                          std::to_string(s.height), table_io::format_number(s.framerate),
                          std::to_string(s.start_frame), std::to_string(s.end_frame)});
    return table_io::format(t);
}

} // namespace drastic
