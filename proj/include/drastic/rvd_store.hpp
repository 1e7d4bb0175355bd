// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drastic/config_space.hpp"
#include "drastic/error.hpp"
#include "drastic/measurement.hpp"
#include "drastic/mode_solver.hpp"
#include "drastic/pareto.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace drastic::rvd {

// Relational video database: seven tables linking source videos, segments,
// encoder configurations, Pareto-optimal encodings, devices, networks and
// user profiles. Column names follow the published schema verbatim.

struct Videosource {
    std::string source_id;  // PK
    std::string resolution;
    double framerate = 0;
    std::string uncvideoformat;
    friend bool operator==(const Videosource&, const Videosource&) = default;
};

struct Videoseg {
    std::string video_id;  // PK
    std::string resolution;
    long start_frame = 0;
    long end_frame = 0;
    std::string source_id;  // FK Videosource
    friend bool operator==(const Videoseg&, const Videoseg&) = default;
};

struct Softwareconfig {
    std::string sw_id;  // PK
    int qp = 0;
    std::string gop_config;  // "AI", "RA8-CRA", "LD4-IDR", ...
    bool dbl = false;
    bool sao = false;
    friend bool operator==(const Softwareconfig&, const Softwareconfig&) = default;
};

struct Paretofront {
    std::string pareto_id;  // PK
    std::string sw_id;      // FK Softwareconfig
    std::string video_id;   // FK Videoseg
    std::string enc_video_id;
    double psnr = 0;
    double enctime = 0;
    double bitrate = 0;
    friend bool operator==(const Paretofront&, const Paretofront&) = default;
};

struct Deviceconfig {
    std::string dev_id;  // PK
    std::string displayresolution;
    double maxplaybackframerate = 0;
    double maxencodeframerate = 0;
    std::string device_type;
    std::string networktypes;
    friend bool operator==(const Deviceconfig&, const Deviceconfig&) = default;
};

// Rates in kbps; empty is the table's "null".
struct Network {
    std::string networktype;  // PK
    std::optional<double> theor_dl_kbps;
    std::optional<double> theor_ul_kbps;
    std::optional<double> typ_dl_kbps;
    std::optional<double> typ_ul_kbps;
    friend bool operator==(const Network&, const Network&) = default;
};

enum class Profile { Low, Medium, High };
std::string_view to_string(Profile p) noexcept;
std::optional<Profile> parse_profile(std::string_view text);  // case-insensitive

struct Userconfig {
    std::string user_dev_prof;  // PK
    std::string dev_id;         // FK Deviceconfig
    Profile profile = Profile::Low;
    double psnr = 0;
    double enctime = 0;
    double bitrate = 0;
    friend bool operator==(const Userconfig&, const Userconfig&) = default;
};

struct RvdTables {
    std::vector<Videosource> videosource;
    std::vector<Videoseg> videoseg;
    std::vector<Softwareconfig> softwareconfig;
    std::vector<Paretofront> paretofront;
    std::vector<Deviceconfig> deviceconfig;
    std::vector<Network> network;
    std::vector<Userconfig> userconfig;
    friend bool operator==(const RvdTables&, const RvdTables&) = default;
};

// Table names in dependency order (referenced tables first).
inline constexpr std::array<std::string_view, 7> kTableNames{
    "Videosource", "Videoseg", "Softwareconfig", "Paretofront",
    "Deviceconfig", "Network", "Userconfig"};

class DuplicateKey : public Error {
public:
    explicit DuplicateKey(const std::string& m) : Error("rvd_store", m) {}
};
class DanglingReference : public Error {
public:
    explicit DanglingReference(const std::string& m) : Error("rvd_store", m) {}
};
class SchemaMismatch : public Error {
public:
    explicit SchemaMismatch(const std::string& m) : Error("rvd_store", m) {}
};

enum class QueryStage { ProfileLookup, FrontQuery };

class NoRows : public EmptyResult {
public:
    NoRows(QueryStage stage, const std::string& m)
        : EmptyResult("rvd_store", m), stage_(stage) {}
    QueryStage stage() const noexcept { return stage_; }

private:
    QueryStage stage_;
};

struct ProfileThresholds {
    double psnr_db = 0;
    double enc_time_s = 0;
    double bitrate_kbps = 0;
};

// In-memory tables with primary-key and foreign-key indices. Every insert is
// checked before anything is written, so a rejected insert leaves the store
// unchanged. One writer at a time; readers share a lock.
class RvdStore {
public:
    RvdStore() = default;
    RvdStore(RvdStore&& other) noexcept;
    RvdStore& operator=(RvdStore&& other) noexcept;
    RvdStore(const RvdStore&) = delete;
    RvdStore& operator=(const RvdStore&) = delete;

    // Inserts every row in dependency order; throws on the first violation.
    static RvdStore from_tables(const RvdTables& tables);

    std::string insert(const Videosource& row);
    std::string insert(const Videoseg& row);
    std::string insert(const Softwareconfig& row);
    std::string insert(const Paretofront& row);
    std::string insert(const Deviceconfig& row);
    std::string insert(const Network& row);
    std::string insert(const Userconfig& row);

    // Untyped insert: `record` holds the table's columns in header order as
    // text. Throws SchemaMismatch for unknown tables or malformed fields.
    std::string insert(std::string_view table_name, const std::vector<std::string>& record);

    RvdTables tables() const;
    std::size_t size(std::string_view table_name) const;

    // MAX(PSNR) over Video_Id rows with Bitrate <= r_max and Enctime <= t_max;
    // ties go to the lowest Pareto_Id.
    Paretofront query_max_quality(std::string_view video_id, double r_max_kbps,
                                  double t_max_s) const;
    // MIN(Bitrate) over Video_Id rows with PSNR >= q_min and Enctime <= t_max.
    Paretofront query_min_bitrate(std::string_view video_id, double q_min_db,
                                  double t_max_s) const;

    ProfileThresholds lookup_profile(std::string_view device_id, Profile profile) const;

    // Binds the profile's thresholds as query bounds: max-quality takes
    // Bitrate as r_max and Enctime as t_max; min-bitrate takes PSNR as q_min
    // and Enctime as t_max. Other modes are rejected.
    Paretofront device_constrained_select(std::string_view device_id, Profile profile,
                                          Mode mode, std::string_view video_id) const;

private:
    template <class Pred, class Better>
    Paretofront best_row(std::string_view video_id, Pred pred, Better better,
                         const std::string& what) const;

    mutable std::shared_mutex mutex_;
    RvdTables t_;
    std::unordered_map<std::string, std::size_t> source_idx_, seg_idx_, sw_idx_, pareto_idx_,
        dev_idx_, net_idx_, user_idx_;
    std::set<std::pair<std::string, std::string>> sw_video_;
};

// One canonical CSV file per table (<Name>.csv) plus manifest.txt listing
// them. import_tables validates keys and references.
RvdTables import_tables(const std::filesystem::path& dir);
void export_tables(const RvdTables& tables, const std::filesystem::path& dir);

std::string format_table(const RvdTables& tables, std::string_view table_name);

// "14.4 kbps", "2 Mbps", "1 Gbps", bare numbers (kbps) or "null".
std::optional<double> parse_rate_kbps(std::string_view text);

// GOPconfig label folding in the refresh type: "AI", "RA8-CRA", "LD6-IDR".
std::string gop_config_label(const GopConfiguration& config);

// Device, network and user-profile reference rows.
void insert_reference_profiles(RvdStore& store);

// Builds a database whose Paretofront table holds exactly the members of
// `fronts`, with Softwareconfig from `configs` and Videoseg/Videosource from
// `segments`. Pareto_Id / Enc_video_id are numbered P0001/EV0001 in front
// order. Reference device/network/user rows are added.
RvdStore seed_database(std::span<const VideoSegment> segments,
                       std::span<const GopConfiguration> configs,
                       std::span<const VideoFront> fronts);

} // namespace drastic::rvd
