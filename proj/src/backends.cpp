// SPDX-License-Identifier: Apache-2.0
#include "drastic/encoder_backend.hpp"

#include <cmath>
#include <cstdint>
#include <exception>

namespace drastic {

namespace {

// bitrate = kBaseBitrate * 2^((kReferenceQp - qp) / 6) * mode * refresh
constexpr double kBaseBitrate = 1000.0;
constexpr int kReferenceQp = 22;
// psnr = kBasePsnr - kPsnrSlope * qp + mode offset + refresh offset + filter bonus
constexpr double kPsnrSlope = 0.62;
constexpr double kBasePsnr = 43.0 + kPsnrSlope * kReferenceQp;
constexpr double kDeblockPsnrBonus = 0.07;
// time = kBaseTime * factor(mode, refresh) * (1 + dbl cost + sao cost)
constexpr double kBaseTime = 100.0;

struct TimeModel {
    double factor;
    double dbl_cost;
    double sao_cost;
};

// Minimax fit against the QP=22 rows of the AI/RA8/LD4 measurements. The
// AI SAO cost is negative: the measured AI on/off row is the slow one.
constexpr TimeModel kTimeAi{1.187, 0.17, -0.22};
constexpr TimeModel kTimeLd4Cra{6.96, 0.09, 0.338};
constexpr TimeModel kTimeLd4Idr{10.96, 0.0, 0.005};
constexpr TimeModel kTimeRa8Cra{3.50, 0.18, 0.26};
constexpr TimeModel kTimeRa8Idr{3.31, 0.59, 0.20};
constexpr double kRa4TimeScale = 0.85;
constexpr double kLd6TimeScale = 1.08;

TimeModel time_model(GopMode mode, RefreshType refresh) {
    const bool cra = refresh == RefreshType::CRA;
    auto scaled = [](TimeModel m, double s) { return TimeModel{m.factor * s, m.dbl_cost, m.sao_cost}; };
    switch (mode) {
    case GopMode::AI: return kTimeAi;
    case GopMode::RA8: return cra ? kTimeRa8Cra : kTimeRa8Idr;
    case GopMode::RA4: return scaled(cra ? kTimeRa8Cra : kTimeRa8Idr, kRa4TimeScale);
    case GopMode::LD4: return cra ? kTimeLd4Cra : kTimeLd4Idr;
    case GopMode::LD6: return scaled(cra ? kTimeLd4Cra : kTimeLd4Idr, kLd6TimeScale);
    }
    return kTimeAi;
}

double bitrate_factor(GopMode mode) {
    switch (mode) {
    case GopMode::AI: return 4.92;
    case GopMode::RA8: return 1.098;
    case GopMode::RA4: return 1.098 * 1.04;
    case GopMode::LD4: return 1.1275;
    case GopMode::LD6: return 1.1275 * 0.98;
    }
    return 1.0;
}

double refresh_bitrate_factor(RefreshType r) {
    switch (r) {
    case RefreshType::CRA: return 0.989;
    case RefreshType::IDR: return 1.011;
    case RefreshType::None: return 1.0;
    }
    return 1.0;
}

double psnr_offset(GopMode mode) {
    switch (mode) {
    case GopMode::AI: return 0.0;
    case GopMode::RA8: return -1.68;
    case GopMode::RA4: return -1.75;
    case GopMode::LD4: return -1.94;
    case GopMode::LD6: return -1.90;
    }
    return 0.0;
}

double refresh_psnr_offset(RefreshType r) { return r == RefreshType::IDR ? -0.1 : 0.0; }

} // namespace

double SyntheticBackend::segment_factor(std::string_view video_id) noexcept {
    // FNV-1a, stable across platforms and runs
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : video_id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return static_cast<double>(h % 2001) / 1000.0 - 1.0;
}

Measurement SyntheticBackend::measure(const GopConfiguration& config,
                                      const VideoSegment& segment) const {
    const double c = segment_factor(segment.video_id);
    const bool inter = config.mode != GopMode::AI;

    const double psnr = kBasePsnr - kPsnrSlope * config.qp + psnr_offset(config.mode) +
                        refresh_psnr_offset(config.refresh) +
                        (config.dbl ? kDeblockPsnrBonus : 0.0) + (inter ? 0.3 : 0.1) * c;

    const double bitrate = kBaseBitrate * std::exp2((kReferenceQp - config.qp) / 6.0) *
                           bitrate_factor(config.mode) * refresh_bitrate_factor(config.refresh) *
                           (1.0 + (inter ? 0.10 : 0.03) * c);

    const auto tm = time_model(config.mode, config.refresh);
    const double time = kBaseTime * tm.factor *
                        (1.0 + (config.dbl ? tm.dbl_cost : 0.0) + (config.sao ? tm.sao_cost : 0.0)) *
                        (1.0 + (inter ? 0.03 : 0.0) * c);

    return {config.id, segment.video_id, psnr, time, bitrate};
}

FixtureBackend::FixtureBackend(std::vector<Measurement> rows) {
    for (auto& m : rows) {
        auto key = std::make_pair(m.config_id, m.video_id);
        rows_.insert_or_assign(std::move(key), std::move(m));
    }
}

FixtureBackend FixtureBackend::from_file(const std::filesystem::path& path) {
    return FixtureBackend(load_fixture(path));
}

Measurement FixtureBackend::measure(const GopConfiguration& config,
                                    const VideoSegment& segment) const {
    auto it = rows_.find({config.id, segment.video_id});
    if (it == rows_.end()) throw FixtureMiss(config.id, segment.video_id);
    return it->second;
}

std::vector<Measurement> measure_all(const MeasurementBackend& backend,
                                     std::span<const GopConfiguration> configs,
                                     std::span<const VideoSegment> segments, bool parallel) {
    const auto n = static_cast<long>(configs.size() * segments.size());
    std::vector<Measurement> out(static_cast<std::size_t>(n));
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long k = 0; k < n; ++k) {
        const auto s = static_cast<std::size_t>(k) / configs.size();
        const auto c = static_cast<std::size_t>(k) % configs.size();
        try {
            out[static_cast<std::size_t>(k)] = backend.measure(configs[c], segments[s]);
        } catch (...) {
#pragma omp critical(drastic_measure_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace drastic
