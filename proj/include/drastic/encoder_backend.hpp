// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drastic/config_space.hpp"
#include "drastic/error.hpp"
#include "drastic/measurement.hpp"

#include <condition_variable>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace drastic {

class AdapterFailure : public Error {
public:
    AdapterFailure(const std::string& message, std::string captured_output, int exit_code = -1)
        : Error("encoder_backend", message), output_(std::move(captured_output)),
          exit_code_(exit_code) {}

    const std::string& captured_output() const noexcept { return output_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string output_;
    int exit_code_;
};

class FixtureMiss : public Error {
public:
    FixtureMiss(const std::string& config_id, const std::string& video_id)
        : Error("encoder_backend", "no fixture row for (" + config_id + ", " + video_id + ")") {}
};

// A source of Measurements for (configuration, segment) pairs. measure() may be
// called concurrently.
class MeasurementBackend {
public:
    virtual ~MeasurementBackend() = default;
    virtual Measurement measure(const GopConfiguration& config,
                                const VideoSegment& segment) const = 0;
};

// Closed-form rate/quality/time model, a deterministic function of
// (config, segment). Calibrated to the 416x240 QP=22 measurements.
class SyntheticBackend final : public MeasurementBackend {
public:
    Measurement measure(const GopConfiguration& config,
                        const VideoSegment& segment) const override;

    // Content factor in [-1, 1] derived from a stable hash of the video id.
    static double segment_factor(std::string_view video_id) noexcept;
};

// Serves rows of a measurement file keyed by (config_id, video_id).
class FixtureBackend final : public MeasurementBackend {
public:
    explicit FixtureBackend(std::vector<Measurement> rows);
    static FixtureBackend from_file(const std::filesystem::path& path);

    Measurement measure(const GopConfiguration& config,
                        const VideoSegment& segment) const override;

    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::map<std::pair<std::string, std::string>, Measurement> rows_;
};

struct EncoderAdapterSpec {
    // Whitespace-separated argv; {cfg}, {input} and {frames} must each appear
    // exactly once. {skip} (frames to skip before start_frame) is optional.
    std::string command_template;
    // ECMAScript regex applied line by line; the first matching line wins.
    // The default matches the HM summary row "<frames> a <bitrate> <Y-PSNR> ...".
    std::string summary_pattern = R"(^\s*\d+\s+a\s+([0-9]+(?:\.[0-9]+)?)\s+([0-9]+(?:\.[0-9]+)?))";
    int bitrate_group = 1;
    int psnr_group = 2;

    // Throws InvalidArgument on missing or repeated placeholders, or an
    // invalid pattern.
    void validate() const;

    // The template from DRASTIC_ENCODER_CMD when set, otherwise `fallback`.
    static EncoderAdapterSpec from_environment(std::string fallback);
};

struct ProcessResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr, interleaved
    double wall_seconds = 0;
};

// Runs argv[0] (PATH lookup) and captures its output. Throws AdapterFailure
// when the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

// Splits a command template into argv; single and double quotes group words.
std::vector<std::string> split_command(std::string_view command);

// Runs an external encoder per measurement: writes the cfg text, substitutes
// the placeholders, times the child wall clock and parses the summary line.
class ExternalEncoderBackend final : public MeasurementBackend {
public:
    ExternalEncoderBackend(EncoderAdapterSpec spec, std::filesystem::path input_path,
                           std::filesystem::path work_dir, std::size_t pool_size = 1,
                           GopTemplates templates = GopTemplates::builtin());

    Measurement measure(const GopConfiguration& config,
                        const VideoSegment& segment) const override;

private:
    class Slot;

    EncoderAdapterSpec spec_;
    std::filesystem::path input_path_;
    std::filesystem::path work_dir_;
    GopTemplates templates_;
    std::size_t pool_size_;
    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    mutable std::size_t running_ = 0;
};

// Measures every configuration on every segment, segment-major. Runs
// concurrently when `parallel` is set; the output order is fixed either way.
std::vector<Measurement> measure_all(const MeasurementBackend& backend,
                                     std::span<const GopConfiguration> configs,
                                     std::span<const VideoSegment> segments,
                                     bool parallel = false);

} // namespace drastic
