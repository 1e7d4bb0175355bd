// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drastic {

struct VideoSegment {
    std::string video_id;
    std::string source_id;
    int width = 0;
    int height = 0;
    double framerate = 0;
    long start_frame = 1;
    long end_frame = 1;

    long frame_count() const noexcept { return end_frame - start_frame + 1; }

    friend bool operator==(const VideoSegment&, const VideoSegment&) = default;
};

// Throws InvalidArgument unless start <= end and width, height, framerate > 0.
void validate(const VideoSegment& segment);

// The two 100-frame segments of the 416x240@30 evaluation clip (V001, V002).
std::vector<VideoSegment> reference_segments();

struct Measurement {
    std::string config_id;
    std::string video_id;
    double psnr_db = 0;
    double enc_time_s = 0;
    double bitrate_kbps = 0;

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

// Throws InvalidArgument when an objective is not strictly positive and finite.
void validate(const Measurement& m);

// bitrate_kbps * 1000 / (width * height * framerate).
double bits_per_sample(const Measurement& m, const VideoSegment& segment);

// Measurement file: config_id,video_id,psnr_db,enc_time_s,bitrate_kbps.
// Extra trailing columns (the front file's pareto flag) are ignored on load.
std::vector<Measurement> parse_measurements(std::string_view text);
std::vector<Measurement> load_fixture(const std::filesystem::path& path);
std::string format_measurements(std::span<const Measurement> rows);

// Segment file: video_id,source_id,width,height,framerate,start_frame,end_frame.
std::vector<VideoSegment> parse_segments(std::string_view text);
std::string format_segments(std::span<const VideoSegment> segments);

} // namespace drastic
