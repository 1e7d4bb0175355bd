// SPDX-License-Identifier: Apache-2.0
// drastic: command-line front end for configuration enumeration, measurement,
// front extraction, mode selection, switch planning and the video database.

#include "drastic/config_space.hpp"
#include "drastic/encoder_backend.hpp"
#include "drastic/measurement.hpp"
#include "drastic/mode_solver.hpp"
#include "drastic/pareto.hpp"
#include "drastic/rvd_store.hpp"
#include "drastic/switch_planner.hpp"
#include "drastic/table_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace drastic;

namespace {

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        table_io::write_file(path, text);
    }
}

std::vector<GopConfiguration> config_set(const std::string& name, const std::string& file) {
    if (!file.empty()) return parse_config_space(table_io::read_text(file, "config_space"));
    if (name == "standard") return enumerate_standard();
    if (name == "extended") return enumerate_extended();
    throw InvalidArgument("config_space", "unknown configuration set '" + name + "'");
}

// Front members per video. Front files and raw measurement files are both
// accepted: a front is recomputed over the listed members, which leaves an
// actual front unchanged.
std::vector<VideoFront> load_fronts(const std::string& path) {
    auto parsed = parse_front_file(table_io::read_text(path, "pareto_core"));
    for (auto& vf : parsed) {
        const auto n = vf.front.source_size;
        vf.front = pareto_front(vf.front.members);
        vf.front.source_size = n;
    }
    return parsed;
}

const VideoFront& find_front(const std::vector<VideoFront>& fronts, const std::string& video) {
    if (video.empty()) {
        if (fronts.size() == 1) return fronts.front();
        throw InvalidArgument("mode_solver", "file holds several videos; pass --video");
    }
    for (const auto& vf : fronts)
        if (vf.video_id == video) return vf;
    throw MissingFront(video);
}

std::string pareto_row(const rvd::Paretofront& p) {
    return "Pareto_Id,SW_Id,Video_Id,Enc_video_id,PSNR,Enctime,Bitrate\n" +
           table_io::format_row({p.pareto_id, p.sw_id, p.video_id, p.enc_video_id,
                                 table_io::format_number(p.psnr), table_io::format_number(p.enctime),
                                 table_io::format_number(p.bitrate)}) +
           "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pareto-optimal GOP configuration selection and switching for HEVC encoding"};
    app.require_subcommand(1);

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "List the configuration space, optionally emitting cfg files");
    std::string enum_set = "standard", enum_out, cfg_dir, templates_dir;
    enumerate->add_option("--set", enum_set, "standard (120) or extended (216)")
        ->check(CLI::IsMember({"standard", "extended"}));
    enumerate->add_option("--out", enum_out, "Config-space file (default stdout)");
    enumerate->add_option("--cfg-dir", cfg_dir, "Write one <id>.cfg per configuration here");
    enumerate->add_option("--templates", templates_dir, "Directory with ra8/ra4/ld4/ld6 GOP templates")
        ->check(CLI::ExistingDirectory);

    // measure
    auto* measure = app.add_subcommand("measure", "Measure configurations on video segments");
    std::string fixture, encoder_cmd, segments_file, meas_set = "standard", configs_file, input,
                                                     work_dir = "drastic-work", meas_out,
                                                     summary_pattern;
    bool synthetic = false, parallel = false;
    std::size_t pool = 1;
    auto* src_fixture = measure->add_option("--fixture", fixture, "Serve measurements from this file")
                            ->check(CLI::ExistingFile);
    auto* src_synth = measure->add_flag("--synthetic", synthetic, "Use the closed-form synthetic model");
    auto* src_ext = measure->add_option(
        "--encoder-cmd", encoder_cmd,
        "Run an external encoder; template with {cfg}, {input}, {frames} and optional {skip} "
        "(DRASTIC_ENCODER_CMD overrides it)");
    src_fixture->excludes(src_synth)->excludes(src_ext);
    src_synth->excludes(src_ext);
    measure->add_option("--summary-pattern", summary_pattern, "Regex for the encoder summary line");
    measure->add_option("--input", input, "Raw input video for the external encoder");
    measure->add_option("--work-dir", work_dir, "Where cfg files for the encoder are written");
    measure->add_option("--pool", pool, "Concurrent encoder processes")->check(CLI::PositiveNumber);
    measure->add_option("--segments", segments_file, "Segment file (default: V001, V002)")
        ->check(CLI::ExistingFile);
    measure->add_option("--set", meas_set, "standard or extended")
        ->check(CLI::IsMember({"standard", "extended"}));
    measure->add_option("--configs", configs_file, "Config-space file overriding --set")
        ->check(CLI::ExistingFile);
    measure->add_flag("--parallel", parallel, "Measure concurrently");
    measure->add_option("--out", meas_out, "Measurement file (default stdout)");

    // front
    auto* front = app.add_subcommand("front", "Extract the Pareto front of each video");
    std::string front_in, front_out, seed_db, front_segments;
    bool front_all = false;
    front->add_option("--in", front_in, "Measurement file")->required()->check(CLI::ExistingFile);
    front->add_option("--out", front_out, "Front file (default stdout)");
    front->add_flag("--all", front_all, "Keep every row, flagging members in the pareto column");
    front->add_option("--seed-db", seed_db, "Also write a database seeded with the fronts here");
    front->add_option("--segments", front_segments, "Segment file for --seed-db (default: V001, V002)")
        ->check(CLI::ExistingFile);

    // select
    auto* select = app.add_subcommand("select", "Pick one configuration for a mode and constraints");
    std::string sel_mode, sel_front, sel_video;
    std::optional<double> qmin, tmax, rmax, alpha, beta, gamma;
    bool sel_scan = false;
    select->add_option("--mode", sel_mode, "min-bitrate, max-quality, min-time or typical")->required();
    select->add_option("--qmin", qmin, "PSNR lower bound (dB, strict)");
    select->add_option("--tmax", tmax, "Encoding time upper bound (s, strict)");
    select->add_option("--rmax", rmax, "Bitrate upper bound (kbps, strict)");
    select->add_option("--alpha", alpha, "Typical-mode weight on quality");
    select->add_option("--beta", beta, "Typical-mode weight on bitrate");
    select->add_option("--gamma", gamma, "Typical-mode weight on time");
    select->add_option("--front", sel_front, "Front or measurement file")->required()->check(CLI::ExistingFile);
    select->add_option("--video", sel_video, "Video id (needed when the file holds several)");
    select->add_flag("--scan", sel_scan, "Search every listed row rather than the front");

    // plan / compare
    auto* plan_cmd = app.add_subcommand("plan", "Switch configurations across segments");
    auto* compare = app.add_subcommand("compare", "Compare switching with single static configurations");
    std::string schedule_file, fronts_file, plan_out, on_infeasible;
    for (auto* sub : {plan_cmd, compare}) {
        sub->add_option("--schedule", schedule_file, "Schedule file")->required()->check(CLI::ExistingFile);
        sub->add_option("--fronts", fronts_file, "Front file covering every segment")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", plan_out, "Write the step trace here");
        sub->add_option("--on-infeasible", on_infeasible, "abort, skip or relax_none");
    }

    // rvd
    auto* rvd_cmd = app.add_subcommand("rvd", "Relational video database");
    rvd_cmd->require_subcommand(1);
    std::string db = "rvd-db", rvd_from, rvd_to, rvd_video, rvd_device, rvd_profile, rvd_mode, rvd_table,
        rvd_values, rvd_fronts, rvd_segments, rvd_show;
    double rvd_qmin = 0, rvd_tmax = 0, rvd_rmax = 0;
    auto* rvd_import = rvd_cmd->add_subcommand("import", "Validate tables and store them as the database");
    rvd_import->add_option("dir", rvd_from, "Directory with manifest.txt")->required();
    rvd_import->add_option("--db", db, "Database directory");
    auto* rvd_export = rvd_cmd->add_subcommand("export", "Write the database tables elsewhere");
    rvd_export->add_option("dir", rvd_to, "Target directory")->required();
    rvd_export->add_option("--db", db, "Database directory");
    auto* rvd_seed = rvd_cmd->add_subcommand("seed", "Create a database from front files");
    rvd_seed->add_option("--fronts", rvd_fronts, "Front file")->required()->check(CLI::ExistingFile);
    rvd_seed->add_option("--segments", rvd_segments, "Segment file (default: V001, V002)")
        ->check(CLI::ExistingFile);
    rvd_seed->add_option("--db", db, "Database directory");
    auto* rvd_insert = rvd_cmd->add_subcommand("insert", "Insert one row");
    rvd_insert->add_option("--db", db, "Database directory");
    rvd_insert->add_option("--table", rvd_table, "Table name")->required();
    rvd_insert->add_option("--values", rvd_values, "Comma-separated fields in column order")->required();
    auto* rvd_show_cmd = rvd_cmd->add_subcommand("show", "Print one table");
    rvd_show_cmd->add_option("--db", db, "Database directory");
    rvd_show_cmd->add_option("--table", rvd_show, "Table name")->required();
    auto* rvd_query = rvd_cmd->add_subcommand("query", "Query the Paretofront table");
    rvd_query->require_subcommand(1);
    auto* q_max = rvd_query->add_subcommand("max-quality", "Highest PSNR within bitrate and time limits");
    q_max->add_option("--db", db, "Database directory");
    q_max->add_option("--video", rvd_video, "Video id")->required();
    q_max->add_option("--rmax", rvd_rmax, "Bitrate limit (kbps, inclusive)")->required();
    q_max->add_option("--tmax", rvd_tmax, "Encoding time limit (s, inclusive)")->required();
    auto* q_min = rvd_query->add_subcommand("min-bitrate", "Lowest bitrate within PSNR and time limits");
    q_min->add_option("--db", db, "Database directory");
    q_min->add_option("--video", rvd_video, "Video id")->required();
    q_min->add_option("--qmin", rvd_qmin, "PSNR floor (dB, inclusive)")->required();
    q_min->add_option("--tmax", rvd_tmax, "Encoding time limit (s, inclusive)")->required();
    auto* rvd_select = rvd_cmd->add_subcommand("select", "Select using a device profile's thresholds");
    rvd_select->add_option("--db", db, "Database directory");
    rvd_select->add_option("--device", rvd_device, "Dev_Id")->required();
    rvd_select->add_option("--profile", rvd_profile, "low, medium or high")->required();
    rvd_select->add_option("--mode", rvd_mode, "max-quality or min-bitrate")->required();
    rvd_select->add_option("--video", rvd_video, "Video id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*enumerate) {
            const auto configs = config_set(enum_set, "");
            write_output(enum_out, format_config_space(configs));
            if (!cfg_dir.empty()) {
                const auto templates =
                    templates_dir.empty() ? GopTemplates::builtin() : GopTemplates::load(templates_dir);
                fs::create_directories(cfg_dir);
                for (const auto& c : configs)
                    table_io::write_file(fs::path(cfg_dir) / (c.id + ".cfg"), emit_cfg_text(c, templates));
            }
        } else if (*measure) {
            const auto configs = config_set(meas_set, configs_file);
            const auto segments = segments_file.empty()
                                      ? reference_segments()
                                      : parse_segments(table_io::read_text(segments_file, "encoder_backend"));
            std::unique_ptr<MeasurementBackend> backend;
            if (!fixture.empty()) {
                backend = std::make_unique<FixtureBackend>(FixtureBackend::from_file(fixture));
            } else if (synthetic) {
                backend = std::make_unique<SyntheticBackend>();
            } else if (*src_ext) {
                auto spec = EncoderAdapterSpec::from_environment(encoder_cmd);
                if (!summary_pattern.empty()) spec.summary_pattern = summary_pattern;
                if (input.empty()) throw InvalidArgument("encoder_backend", "--encoder-cmd needs --input");
                backend = std::make_unique<ExternalEncoderBackend>(spec, input, work_dir, pool);
                parallel = parallel || pool > 1;
            } else {
                throw InvalidArgument("encoder_backend",
                                      "choose one of --fixture, --synthetic or --encoder-cmd");
            }
            write_output(meas_out, format_measurements(measure_all(*backend, configs, segments, parallel)));
        } else if (*front) {
            const auto rows = load_fixture(front_in);
            const auto fronts = fronts_by_video(rows);
            for (const auto& vf : fronts)
                std::cerr << vf.video_id << ": kept " << vf.front.members.size() << " of "
                          << vf.front.source_size << "\n";
            write_output(front_out, format_front_file(rows, fronts, front_all));
            if (!seed_db.empty()) {
                const auto segments =
                    front_segments.empty()
                        ? reference_segments()
                        : parse_segments(table_io::read_text(front_segments, "rvd_store"));
                const auto configs = enumerate_extended();
                rvd::export_tables(rvd::seed_database(segments, configs, fronts).tables(), seed_db);
            }
        } else if (*select) {
            auto mode = parse_mode(sel_mode);
            if (!mode) throw InvalidArgument("mode_solver", "unknown mode '" + sel_mode + "'");
            ModeRequest req{*mode, qmin, tmax, rmax, std::nullopt};
            if (alpha || beta || gamma) {
                if (!(alpha && beta && gamma))
                    throw InvalidArgument("mode_solver", "--alpha, --beta and --gamma go together");
                req.weights = Weights{*alpha, *beta, *gamma};
            }
            Selection s;
            if (sel_scan) {
                const auto rows = load_fixture(sel_front);
                std::vector<ObjectivePoint> points;
                std::string video = sel_video;
                if (video.empty() && !rows.empty()) video = rows.front().video_id;
                for (const auto& m : rows)
                    if (m.video_id == video) points.push_back(to_point(m));
                s = solve(req, points);
            } else {
                const auto fronts = load_fronts(sel_front);
                s = solve_on_front(req, find_front(fronts, sel_video).front);
            }
            std::cout << "config_id,psnr_db,enc_time_s,bitrate_kbps,objective,feasible\n"
                      << s.config_id << "," << table_io::format_number(s.point.q) << ","
                      << table_io::format_number(s.point.t) << ","
                      << table_io::format_number(s.point.r) << ","
                      << table_io::format_number(s.objective_value) << "," << s.feasible_count << "\n";
            std::cerr << to_string(req.mode) << ": " << s.config_id << " (" << s.point.q << " dB, "
                      << s.point.t << " s, " << s.point.r << " kbps), " << s.feasible_count
                      << " feasible\n";
        } else if (*plan_cmd || *compare) {
            auto schedule = parse_schedule(table_io::read_text(schedule_file, "switch_planner"));
            if (!on_infeasible.empty()) {
                auto p = parse_policy(on_infeasible);
                if (!p) throw InvalidArgument("switch_planner", "unknown policy '" + on_infeasible + "'");
                schedule.on_infeasible = *p;
            }
            const auto fronts = to_front_map(load_fronts(fronts_file));
            if (*plan_cmd) {
                const auto trace = plan(schedule, fronts);
                if (!plan_out.empty()) table_io::write_file(plan_out, format_trace(trace));
                std::cout << format_trace_summary(trace);
            } else {
                const auto report = compare_static(schedule, fronts);
                if (!plan_out.empty()) table_io::write_file(plan_out, format_trace(report.dynamic));
                std::cout << format_report(report);
            }
        } else if (*rvd_cmd) {
            if (*rvd_import) {
                rvd::export_tables(rvd::import_tables(rvd_from), db);
            } else if (*rvd_export) {
                rvd::export_tables(rvd::import_tables(db), rvd_to);
            } else if (*rvd_seed) {
                const auto segments = rvd_segments.empty()
                                          ? reference_segments()
                                          : parse_segments(table_io::read_text(rvd_segments, "rvd_store"));
                const auto fronts = load_fronts(rvd_fronts);
                rvd::export_tables(rvd::seed_database(segments, enumerate_extended(), fronts).tables(), db);
            } else if (*rvd_insert) {
                auto store = rvd::RvdStore::from_tables(rvd::import_tables(db));
                const auto parsed = table_io::parse("x\n" + rvd_values + "\n", "rvd_store", true);
                std::cout << store.insert(rvd_table, parsed.rows.at(0)) << "\n";
                rvd::export_tables(store.tables(), db);
            } else if (*rvd_show_cmd) {
                std::cout << rvd::format_table(rvd::import_tables(db), rvd_show);
            } else {
                const auto store = rvd::RvdStore::from_tables(rvd::import_tables(db));
                rvd::Paretofront row;
                if (*q_max) {
                    row = store.query_max_quality(rvd_video, rvd_rmax, rvd_tmax);
                } else if (*q_min) {
                    row = store.query_min_bitrate(rvd_video, rvd_qmin, rvd_tmax);
                } else {
                    const auto profile = rvd::parse_profile(rvd_profile);
                    if (!profile) throw InvalidArgument("rvd_store", "unknown profile '" + rvd_profile + "'");
                    const auto mode = parse_mode(rvd_mode);
                    if (!mode) throw InvalidArgument("rvd_store", "unknown mode '" + rvd_mode + "'");
                    row = store.device_constrained_select(rvd_device, *profile, *mode, rvd_video);
                }
                std::cout << pareto_row(row);
            }
        }
    } catch (const EmptyResult& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AdapterFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!e.captured_output().empty()) std::cerr << "--- encoder output ---\n" << e.captured_output();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
