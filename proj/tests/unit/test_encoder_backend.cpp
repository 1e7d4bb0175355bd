// SPDX-License-Identifier: Apache-2.0
#include "drastic/encoder_backend.hpp"
#include "drastic/table_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <thread>

using namespace drastic;
using testing_support::data_path;
using testing_support::TempDir;

namespace {

const VideoSegment& v001() {
    static const auto segs = reference_segments();
    return segs[0];
}

GopConfiguration cfg(GopMode m, int qp, bool dbl, bool sao, RefreshType r) {
    return make_configuration("x", m, qp, dbl, sao, r);
}

// The 20 measured QP=22 rows, independent of the fixture file.
struct TableRow {
    GopMode mode;
    bool dbl, sao;
    RefreshType refresh;
    double q, t, r;
};
const std::vector<TableRow> kTable = {
    {GopMode::AI, true, true, RefreshType::None, 43.0909, 101.921, 4866.88},
    {GopMode::AI, true, false, RefreshType::None, 43.0451, 156.127, 4846.14},
    {GopMode::AI, false, true, RefreshType::None, 42.952, 104.054, 5111.496},
    {GopMode::AI, false, false, RefreshType::None, 43.0909, 107.032, 4866.88},
    {GopMode::LD4, true, true, RefreshType::CRA, 41.1358, 965.423, 1127.692},
    {GopMode::LD4, true, false, RefreshType::CRA, 41.1358, 781.953, 1127.692},
    {GopMode::LD4, false, true, RefreshType::CRA, 41.0569, 959.735, 1127.256},
    {GopMode::LD4, false, false, RefreshType::CRA, 41.0569, 675.844, 1127.256},
    {GopMode::RA8, true, true, RefreshType::CRA, 41.407, 477.995, 1089.156},
    {GopMode::RA8, true, false, RefreshType::CRA, 41.407, 436.604, 1089.156},
    {GopMode::RA8, false, true, RefreshType::CRA, 41.3507, 465.97, 1085.06},
    {GopMode::RA8, false, false, RefreshType::CRA, 41.3507, 332.199, 1085.06},
    {GopMode::LD4, true, true, RefreshType::IDR, 41.1358, 1101.94, 1127.692},
    {GopMode::LD4, true, false, RefreshType::IDR, 41.1358, 1094.985, 1127.692},
    {GopMode::LD4, false, true, RefreshType::IDR, 41.0569, 1101.344, 1127.256},
    {GopMode::LD4, false, false, RefreshType::IDR, 41.0569, 1096.454, 1127.256},
    {GopMode::RA8, true, true, RefreshType::IDR, 41.2959, 586.055, 1114.18},
    {GopMode::RA8, true, false, RefreshType::IDR, 41.2403, 532.51, 1110.384},
    {GopMode::RA8, false, true, RefreshType::IDR, 41.2959, 402.753, 1114.18},
    {GopMode::RA8, false, false, RefreshType::IDR, 41.2403, 326.694, 1110.384},
};

std::string fake(const std::string& extra = "") {
    return std::string(DRASTIC_FAKE_ENCODER) + " {cfg} {input} {frames}" + extra;
}

} // namespace

TEST(Fixture, ServesMeasuredRows) {
    const auto backend = FixtureBackend::from_file(data_path("fixtures/reference.csv"));
    EXPECT_EQ(backend.size(), 240u);
    const auto std_set = enumerate_standard();
    const auto m = backend.measure(std_set[0], v001());
    EXPECT_EQ(m, (Measurement{"S1", "V001", 43.0909, 101.921, 4866.88}));
    const auto* s32 = find_configuration(std_set, "S32");
    ASSERT_NE(s32, nullptr);
    EXPECT_EQ(s32->mode, GopMode::RA8);
    EXPECT_EQ(s32->refresh, RefreshType::CRA);
    EXPECT_EQ(backend.measure(*s32, v001()), (Measurement{"S32", "V001", 41.3507, 332.199, 1085.06}));
    EXPECT_THROW(backend.measure(make_configuration("S999", GopMode::AI, 22, true, true, RefreshType::None), v001()),
                 FixtureMiss);
}

TEST(Fixture, ContainsEveryTableRow) {
    const auto rows = load_fixture(data_path("fixtures/reference.csv"));
    const auto set = enumerate_standard();
    for (const auto& row : kTable) {
        bool found = false;
        for (const auto& m : rows) {
            if (m.video_id != "V001") continue;
            const auto* c = find_configuration(set, m.config_id);
            ASSERT_NE(c, nullptr);
            if (c->mode == row.mode && c->qp == 22 && c->dbl == row.dbl && c->sao == row.sao &&
                c->refresh == row.refresh) {
                EXPECT_EQ(m.psnr_db, row.q);
                EXPECT_EQ(m.enc_time_s, row.t);
                EXPECT_EQ(m.bitrate_kbps, row.r);
                found = true;
            }
        }
        EXPECT_TRUE(found);
    }
}

TEST(Fixture, LoadErrorsCarryRowNumbers) {
    EXPECT_TRUE(parse_measurements("config_id,video_id,psnr_db,enc_time_s,bitrate_kbps\n").empty());
    try {
        parse_measurements("config_id,video_id,psnr_db,enc_time_s,bitrate_kbps\nS1,V001,40,1,2\nS2,V001,40,-1,2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
    }
    try {
        parse_measurements("config_id,video_id,psnr_db,enc_time_s,bitrate_kbps\nS1,V001,abc,1,2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
    EXPECT_THROW(parse_measurements("config,video\nS1,V1\n"), ParseError);
}

TEST(Fixture, ExportLoadIsIdentity) {
    const auto rows = load_fixture(data_path("fixtures/reference.csv"));
    const auto text = format_measurements(rows);
    EXPECT_EQ(parse_measurements(text), rows);
    EXPECT_EQ(text, table_io::read_text(data_path("fixtures/reference.csv"), "t"));
}

TEST(Measurement, BitsPerSample) {
    Measurement m{"S1", "V001", 43.0909, 101.921, 4866.88};
    EXPECT_NEAR(bits_per_sample(m, v001()), 4866880.0 / 2995200.0, 1e-12);
    EXPECT_NEAR(bits_per_sample(m, v001()), 1.6249, 1e-4);
    auto fast = v001();
    fast.framerate *= 2;
    EXPECT_DOUBLE_EQ(bits_per_sample(m, fast) * 2, bits_per_sample(m, v001()));
    m.bitrate_kbps = 1e-9;
    EXPECT_NEAR(bits_per_sample(m, v001()), 1e-9 * 1000 / 2995200.0, 1e-24);
}

TEST(Measurement, SegmentsValidateAndRoundTrip) {
    const auto segs = reference_segments();
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_EQ(segs[1].start_frame, 101);
    EXPECT_EQ(segs[1].frame_count(), 100);
    EXPECT_EQ(parse_segments(format_segments(segs)), segs);
    auto bad = segs[0];
    bad.end_frame = 0;
    EXPECT_THROW(validate(bad), InvalidArgument);
    bad = segs[0];
    bad.width = 0;
    EXPECT_THROW(validate(bad), InvalidArgument);
}

TEST(Synthetic, DeterministicAndPositive) {
    SyntheticBackend b;
    for (const auto& c : enumerate_extended())
        for (const auto& s : reference_segments()) {
            const auto m = b.measure(c, s);
            EXPECT_EQ(m, b.measure(c, s));
            EXPECT_NO_THROW(validate(m));
            EXPECT_EQ(m.config_id, c.id);
            EXPECT_EQ(m.video_id, s.video_id);
        }
    const double f1 = SyntheticBackend::segment_factor("V001");
    const double f2 = SyntheticBackend::segment_factor("V002");
    EXPECT_NE(f1, f2);
    EXPECT_GE(f1, -1.0);
    EXPECT_LE(f1, 1.0);
}

TEST(Synthetic, DecreasingInQp) {
    SyntheticBackend b;
    for (auto mode : {GopMode::AI, GopMode::RA8, GopMode::RA4, GopMode::LD4, GopMode::LD6})
        for (bool dbl : {true, false})
            for (bool sao : {true, false})
                for (auto ref : {RefreshType::IDR, RefreshType::CRA}) {
                    const auto r = mode == GopMode::AI ? RefreshType::None : ref;
                    for (std::size_t i = 1; i < kEnumeratedQps.size(); ++i) {
                        const auto lo = b.measure(cfg(mode, kEnumeratedQps[i - 1], dbl, sao, r), v001());
                        const auto hi = b.measure(cfg(mode, kEnumeratedQps[i], dbl, sao, r), v001());
                        EXPECT_GT(lo.bitrate_kbps, hi.bitrate_kbps);
                        EXPECT_GT(lo.psnr_db, hi.psnr_db);
                    }
                }
}

TEST(Synthetic, ModeOrderingAtEqualQp) {
    SyntheticBackend b;
    for (const auto& seg : reference_segments())
        for (int qp : kEnumeratedQps)
            for (bool dbl : {true, false})
                for (bool sao : {true, false})
                    for (auto ref : {RefreshType::IDR, RefreshType::CRA}) {
                        const auto ai = b.measure(cfg(GopMode::AI, qp, dbl, sao, RefreshType::None), seg);
                        const auto ra = b.measure(cfg(GopMode::RA8, qp, dbl, sao, ref), seg);
                        const auto ld = b.measure(cfg(GopMode::LD4, qp, dbl, sao, ref), seg);
                        EXPECT_GT(ai.bitrate_kbps, ld.bitrate_kbps);
                        EXPECT_GT(ld.bitrate_kbps, ra.bitrate_kbps);
                        EXPECT_LT(ai.enc_time_s, ra.enc_time_s);
                        EXPECT_LT(ra.enc_time_s, ld.enc_time_s);
                    }
}

TEST(Synthetic, CalibratedToMeasuredRows) {
    SyntheticBackend b;
    for (const auto& row : kTable) {
        const auto m = b.measure(cfg(row.mode, 22, row.dbl, row.sao, row.refresh), v001());
        EXPECT_LE(std::abs(m.psnr_db / row.q - 1), 0.20);
        EXPECT_LE(std::abs(m.enc_time_s / row.t - 1), 0.20);
        EXPECT_LE(std::abs(m.bitrate_kbps / row.r - 1), 0.20);
    }
}

TEST(MeasureAll, ParallelMatchesSerialOrder) {
    SyntheticBackend b;
    const auto configs = enumerate_extended();
    const auto segs = reference_segments();
    const auto serial = measure_all(b, configs, segs, false);
    ASSERT_EQ(serial.size(), 432u);
    EXPECT_EQ(serial[0].video_id, "V001");
    EXPECT_EQ(serial[216].video_id, "V002");
    EXPECT_EQ(serial[1].config_id, configs[1].id);
    EXPECT_EQ(measure_all(b, configs, segs, true), serial);
}

TEST(MeasureAll, PropagatesBackendErrors) {
    FixtureBackend b({{"S1", "V001", 40, 1, 2}});
    const auto configs = enumerate_standard();
    EXPECT_THROW(measure_all(b, std::span(configs).first(2), reference_segments(), true), FixtureMiss);
}

TEST(Adapter, SpecValidation) {
    EncoderAdapterSpec spec;
    spec.command_template = "enc -c {cfg} -i {input} -f {frames}";
    EXPECT_NO_THROW(spec.validate());
    spec.command_template = "enc -c {cfg} -i {input}";
    EXPECT_THROW(spec.validate(), InvalidArgument);
    spec.command_template = "enc -c {cfg} {cfg} -i {input} -f {frames}";
    EXPECT_THROW(spec.validate(), InvalidArgument);
    spec.command_template = "enc -c {cfg} -i {input} -f {frames}";
    spec.summary_pattern = "([0-9]+)";
    EXPECT_THROW(spec.validate(), InvalidArgument);
    spec.summary_pattern = "(";
    EXPECT_THROW(spec.validate(), InvalidArgument);
}

TEST(Adapter, SplitsCommands) {
    EXPECT_EQ(split_command("a  'b c' \"d\"e"), (std::vector<std::string>{"a", "b c", "de"}));
    EXPECT_EQ(split_command("''"), (std::vector<std::string>{""}));
    EXPECT_THROW(split_command("a 'b"), InvalidArgument);
}

TEST(Adapter, EnvironmentOverridesTemplate) {
    ::unsetenv("DRASTIC_ENCODER_CMD");
    EXPECT_EQ(EncoderAdapterSpec::from_environment("x {cfg}").command_template, "x {cfg}");
    ::setenv("DRASTIC_ENCODER_CMD", "y {cfg} {input} {frames}", 1);
    EXPECT_EQ(EncoderAdapterSpec::from_environment("x {cfg}").command_template, "y {cfg} {input} {frames}");
    ::unsetenv("DRASTIC_ENCODER_CMD");
}

TEST(Adapter, ParsesSummaryAndTimesChild) {
    TempDir dir;
    table_io::write_file(dir / "in.yuv", "yuv");
    EncoderAdapterSpec spec;
    spec.command_template = fake();
    ExternalEncoderBackend backend(spec, dir / "in.yuv", dir / "work");
    const auto c = make_configuration("S7", GopMode::RA8, 27, true, false, RefreshType::CRA);
    const auto m = backend.measure(c, v001());
    EXPECT_EQ(m.config_id, "S7");
    EXPECT_EQ(m.video_id, "V001");
    EXPECT_DOUBLE_EQ(m.bitrate_kbps, 1027.0);
    EXPECT_DOUBLE_EQ(m.psnr_db, 40.5);
    EXPECT_GT(m.enc_time_s, 0.0);
    const auto cfg_text = table_io::read_text(dir / "work" / "S7_V001.cfg", "t");
    EXPECT_EQ(cfg_text, emit_cfg_text(c));
}

TEST(Adapter, FailuresCarryOutput) {
    TempDir dir;
    table_io::write_file(dir / "in.yuv", "yuv");
    const auto c = enumerate_standard()[0];
    auto run = [&](const std::string& behaviour) {
        EncoderAdapterSpec spec;
        spec.command_template = fake(" " + behaviour);
        ExternalEncoderBackend backend(spec, dir / "in.yuv", dir / "work");
        return backend.measure(c, v001());
    };
    try {
        run("fail");
        FAIL();
    } catch (const AdapterFailure& e) {
        EXPECT_EQ(e.exit_code(), 3);
        EXPECT_NE(e.captured_output().find("crashed on frame 7"), std::string::npos);
        EXPECT_EQ(e.module(), "encoder_backend");
    }
    try {
        run("garbage");
        FAIL();
    } catch (const AdapterFailure& e) {
        EXPECT_EQ(e.exit_code(), 0);
        EXPECT_NE(e.captured_output().find("no summary here"), std::string::npos);
    }
    EXPECT_THROW(run("zero"), AdapterFailure);

    EncoderAdapterSpec spec;
    spec.command_template = "/nonexistent/encoder {cfg} {input} {frames}";
    ExternalEncoderBackend missing(spec, dir / "in.yuv", dir / "work");
    EXPECT_THROW(missing.measure(c, v001()), AdapterFailure);

    spec.command_template = fake();
    ExternalEncoderBackend no_input(spec, dir / "absent.yuv", dir / "work");
    EXPECT_THROW(no_input.measure(c, v001()), AdapterFailure);
}

TEST(Adapter, PoolRunsConcurrentMeasurements) {
    TempDir dir;
    table_io::write_file(dir / "in.yuv", "yuv");
    EncoderAdapterSpec spec;
    spec.command_template = fake();
    ExternalEncoderBackend backend(spec, dir / "in.yuv", dir / "work", 2);
    const auto configs = enumerate_standard();
    const auto rows = measure_all(backend, std::span(configs).first(6), reference_segments(), true);
    ASSERT_EQ(rows.size(), 12u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].config_id, configs[i % 6].id);
        EXPECT_DOUBLE_EQ(rows[i].bitrate_kbps, 1000.0 + configs[i % 6].qp);
    }
}
