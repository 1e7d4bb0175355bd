// SPDX-License-Identifier: Apache-2.0
#include "drastic/rvd_store.hpp"

#include "drastic/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace drastic::rvd {

namespace {

constexpr std::string_view kModule = "rvd_store";
constexpr std::string_view kManifest = "manifest.txt";

using table_io::format_number;
using table_io::Row;

const std::array<Row, 7> kHeaders{{
    {"Source_Id", "Resolution", "framerate", "uncvideoformat"},
    {"Video_Id", "Resolution", "start_frame", "end_frame", "Source_Id"},
    {"SW_Id", "QPvalue", "GOPconfig", "DBL", "SAO"},
    {"Pareto_Id", "SW_Id", "Video_Id", "Enc_video_id", "PSNR", "Enctime", "Bitrate"},
    {"Dev_Id", "Displayresolution", "Maxplaybackframerate", "Maxencodeframerate", "Device_type",
     "Networktypes"},
    {"Networktype", "TheorDL", "TheorUL", "TypDL", "TypUL"},
    {"UserDevProf", "Dev_Id", "Profile", "PSNR", "Enctime", "Bitrate"},
}};

std::size_t table_index(std::string_view name) {
    for (std::size_t i = 0; i < kTableNames.size(); ++i)
        if (kTableNames[i] == name) return i;
    throw SchemaMismatch("unknown table '" + std::string(name) + "'");
}

// Field parsing for untyped records and imported files.
struct FieldReader {
    std::string_view table;
    const Row& header;
    const Row& record;
    std::size_t line;

    [[noreturn]] void fail(std::size_t col, const std::string& why) const {
        std::string msg = std::string(table) + "." + header[col] + ": " + why;
        if (line) msg = "row " + std::to_string(line) + ": " + msg;
        throw SchemaMismatch(msg);
    }
    std::string text(std::size_t col) const {
        auto v = std::string(table_io::trim(record[col]));
        if (v.empty()) fail(col, "empty value");
        return v;
    }
    double number(std::size_t col) const {
        try {
            const double v = table_io::parse_double(record[col], kModule, 0, header[col]);
            if (!std::isfinite(v)) fail(col, "must be finite");
            return v;
        } catch (const ParseError&) {
            fail(col, "not a number: '" + record[col] + "'");
        }
    }
    long integer(std::size_t col) const {
        try {
            return static_cast<long>(table_io::parse_int(record[col], kModule, 0, header[col]));
        } catch (const ParseError&) {
            fail(col, "not an integer: '" + record[col] + "'");
        }
    }
    bool flag(std::size_t col) const {
        const auto v = table_io::to_lower(table_io::trim(record[col]));
        if (v == "on" || v == "1" || v == "true") return true;
        if (v == "off" || v == "0" || v == "false") return false;
        fail(col, "expected on/off, got '" + record[col] + "'");
    }
    std::optional<double> rate(std::size_t col) const {
        try {
            return parse_rate_kbps(record[col]);
        } catch (const InvalidArgument& e) {
            fail(col, e.what());
        }
    }
};

std::string rate_text(const std::optional<double>& v) { return v ? format_number(*v) : "null"; }

Row to_row(const Videosource& r) {
    return {r.source_id, r.resolution, format_number(r.framerate), r.uncvideoformat};
}
Row to_row(const Videoseg& r) {
    return {r.video_id, r.resolution, std::to_string(r.start_frame), std::to_string(r.end_frame),
            r.source_id};
}
Row to_row(const Softwareconfig& r) {
    return {r.sw_id, std::to_string(r.qp), r.gop_config, r.dbl ? "on" : "off", r.sao ? "on" : "off"};
}
Row to_row(const Paretofront& r) {
    return {r.pareto_id, r.sw_id, r.video_id, r.enc_video_id,
            format_number(r.psnr), format_number(r.enctime), format_number(r.bitrate)};
}
Row to_row(const Deviceconfig& r) {
    return {r.dev_id, r.displayresolution, format_number(r.maxplaybackframerate),
            format_number(r.maxencodeframerate), r.device_type, r.networktypes};
}
Row to_row(const Network& r) {
    return {r.networktype, rate_text(r.theor_dl_kbps), rate_text(r.theor_ul_kbps),
            rate_text(r.typ_dl_kbps), rate_text(r.typ_ul_kbps)};
}
Row to_row(const Userconfig& r) {
    return {r.user_dev_prof, r.dev_id, std::string(to_string(r.profile)),
            format_number(r.psnr), format_number(r.enctime), format_number(r.bitrate)};
}

template <class T>
void append_rows(table_io::Table& t, const std::vector<T>& rows) {
    for (const auto& r : rows) t.rows.push_back(to_row(r));
}

void require_key(const std::string& key, std::string_view table, std::string_view column) {
    if (table_io::trim(key).empty() || table_io::trim(key).size() != key.size())
        throw SchemaMismatch(std::string(table) + "." + std::string(column) +
                             ": key must be non-empty without surrounding spaces");
}

void require_positive(double v, std::string_view table, std::string_view column) {
    if (!(std::isfinite(v) && v > 0))
        throw SchemaMismatch(std::string(table) + "." + std::string(column) +
                             " must be positive and finite");
}

template <class Index>
void require_unique(const Index& idx, const std::string& key, std::string_view table) {
    if (idx.count(key))
        throw DuplicateKey(std::string(table) + " already has key '" + key + "'");
}

template <class Index>
void require_reference(const Index& idx, const std::string& key, std::string_view from,
                       std::string_view to) {
    if (!idx.count(key))
        throw DanglingReference(std::string(from) + " references missing " + std::string(to) +
                                " '" + key + "'");
}

} // namespace

std::string_view to_string(Profile p) noexcept {
    switch (p) {
    case Profile::Low: return "low";
    case Profile::Medium: return "medium";
    case Profile::High: return "high";
    }
    return "?";
}

std::optional<Profile> parse_profile(std::string_view text) {
    const auto t = table_io::to_lower(table_io::trim(text));
    if (t == "low") return Profile::Low;
    if (t == "medium") return Profile::Medium;
    if (t == "high") return Profile::High;
    return std::nullopt;
}

std::optional<double> parse_rate_kbps(std::string_view text) {
    auto t = table_io::trim(text);
    if (table_io::to_lower(t) == "null") return std::nullopt;
    std::size_t split = t.size();
    while (split > 0 && std::isalpha(static_cast<unsigned char>(t[split - 1]))) --split;
    const auto unit = table_io::to_lower(t.substr(split));
    const auto digits = table_io::trim(t.substr(0, split));
    double scale = 1;
    if (unit.empty() || unit == "kbps") {
        scale = 1;
    } else if (unit == "bps") {
        scale = 1e-3;
    } else if (unit == "mbps") {
        scale = 1e3;
    } else if (unit == "gbps") {
        scale = 1e6;
    } else {
        throw InvalidArgument(std::string(kModule), "unknown rate unit '" + unit + "'");
    }
    double v = 0;
    try {
        v = table_io::parse_double(digits, kModule, 0, "rate");
    } catch (const ParseError&) {
        throw InvalidArgument(std::string(kModule), "bad rate '" + std::string(text) + "'");
    }
    if (!(std::isfinite(v) && v >= 0))
        throw InvalidArgument(std::string(kModule), "rate must be finite and non-negative");
    return v * scale;
}

std::string gop_config_label(const GopConfiguration& config) {
    std::string s(to_string(config.mode));
    if (config.refresh != RefreshType::None) s += "-" + std::string(to_string(config.refresh));
    return s;
}

RvdStore::RvdStore(RvdStore&& other) noexcept {
    std::unique_lock lock(other.mutex_);
    t_ = std::move(other.t_);
    source_idx_ = std::move(other.source_idx_);
    seg_idx_ = std::move(other.seg_idx_);
    sw_idx_ = std::move(other.sw_idx_);
    pareto_idx_ = std::move(other.pareto_idx_);
    dev_idx_ = std::move(other.dev_idx_);
    net_idx_ = std::move(other.net_idx_);
    user_idx_ = std::move(other.user_idx_);
    sw_video_ = std::move(other.sw_video_);
}

RvdStore& RvdStore::operator=(RvdStore&& other) noexcept {
    if (this == &other) return *this;
    std::scoped_lock lock(mutex_, other.mutex_);
    t_ = std::move(other.t_);
    source_idx_ = std::move(other.source_idx_);
    seg_idx_ = std::move(other.seg_idx_);
    sw_idx_ = std::move(other.sw_idx_);
    pareto_idx_ = std::move(other.pareto_idx_);
    dev_idx_ = std::move(other.dev_idx_);
    net_idx_ = std::move(other.net_idx_);
    user_idx_ = std::move(other.user_idx_);
    sw_video_ = std::move(other.sw_video_);
    return *this;
}

RvdStore RvdStore::from_tables(const RvdTables& tables) {
    RvdStore store;
    for (const auto& r : tables.videosource) store.insert(r);
    for (const auto& r : tables.videoseg) store.insert(r);
    for (const auto& r : tables.softwareconfig) store.insert(r);
    for (const auto& r : tables.paretofront) store.insert(r);
    for (const auto& r : tables.deviceconfig) store.insert(r);
    for (const auto& r : tables.network) store.insert(r);
    for (const auto& r : tables.userconfig) store.insert(r);
    return store;
}

std::string RvdStore::insert(const Videosource& row) {
    require_key(row.source_id, "Videosource", "Source_Id");
    require_positive(row.framerate, "Videosource", "framerate");
    std::unique_lock lock(mutex_);
    require_unique(source_idx_, row.source_id, "Videosource");
    t_.videosource.push_back(row);
    source_idx_.emplace(row.source_id, t_.videosource.size() - 1);
    return row.source_id;
}

std::string RvdStore::insert(const Videoseg& row) {
    require_key(row.video_id, "Videoseg", "Video_Id");
    if (row.start_frame < 1 || row.end_frame < row.start_frame)
        throw SchemaMismatch("Videoseg frame range must satisfy 1 <= start_frame <= end_frame");
    std::unique_lock lock(mutex_);
    require_unique(seg_idx_, row.video_id, "Videoseg");
    require_reference(source_idx_, row.source_id, "Videoseg", "Source_Id");
    t_.videoseg.push_back(row);
    seg_idx_.emplace(row.video_id, t_.videoseg.size() - 1);
    return row.video_id;
}

std::string RvdStore::insert(const Softwareconfig& row) {
    require_key(row.sw_id, "Softwareconfig", "SW_Id");
    if (row.qp < 0 || row.qp > 51) throw SchemaMismatch("Softwareconfig.QPvalue out of range 0..51");
    if (row.gop_config.empty()) throw SchemaMismatch("Softwareconfig.GOPconfig is empty");
    std::unique_lock lock(mutex_);
    require_unique(sw_idx_, row.sw_id, "Softwareconfig");
    t_.softwareconfig.push_back(row);
    sw_idx_.emplace(row.sw_id, t_.softwareconfig.size() - 1);
    return row.sw_id;
}

std::string RvdStore::insert(const Paretofront& row) {
    require_key(row.pareto_id, "Paretofront", "Pareto_Id");
    require_positive(row.psnr, "Paretofront", "PSNR");
    require_positive(row.enctime, "Paretofront", "Enctime");
    require_positive(row.bitrate, "Paretofront", "Bitrate");
    std::unique_lock lock(mutex_);
    require_unique(pareto_idx_, row.pareto_id, "Paretofront");
    require_reference(sw_idx_, row.sw_id, "Paretofront", "SW_Id");
    require_reference(seg_idx_, row.video_id, "Paretofront", "Video_Id");
    if (sw_video_.count({row.sw_id, row.video_id}))
        throw DuplicateKey("Paretofront already has a row for (" + row.sw_id + ", " + row.video_id +
                           ")");
    t_.paretofront.push_back(row);
    pareto_idx_.emplace(row.pareto_id, t_.paretofront.size() - 1);
    sw_video_.emplace(row.sw_id, row.video_id);
    return row.pareto_id;
}

std::string RvdStore::insert(const Deviceconfig& row) {
    require_key(row.dev_id, "Deviceconfig", "Dev_Id");
    require_positive(row.maxplaybackframerate, "Deviceconfig", "Maxplaybackframerate");
    require_positive(row.maxencodeframerate, "Deviceconfig", "Maxencodeframerate");
    std::unique_lock lock(mutex_);
    require_unique(dev_idx_, row.dev_id, "Deviceconfig");
    t_.deviceconfig.push_back(row);
    dev_idx_.emplace(row.dev_id, t_.deviceconfig.size() - 1);
    return row.dev_id;
}

std::string RvdStore::insert(const Network& row) {
    require_key(row.networktype, "Network", "Networktype");
    for (const auto* v : {&row.theor_dl_kbps, &row.theor_ul_kbps, &row.typ_dl_kbps, &row.typ_ul_kbps})
        if (*v && !(std::isfinite(**v) && **v >= 0))
            throw SchemaMismatch("Network rates must be finite and non-negative");
    std::unique_lock lock(mutex_);
    require_unique(net_idx_, row.networktype, "Network");
    t_.network.push_back(row);
    net_idx_.emplace(row.networktype, t_.network.size() - 1);
    return row.networktype;
}

std::string RvdStore::insert(const Userconfig& row) {
    require_key(row.user_dev_prof, "Userconfig", "UserDevProf");
    require_positive(row.psnr, "Userconfig", "PSNR");
    require_positive(row.enctime, "Userconfig", "Enctime");
    require_positive(row.bitrate, "Userconfig", "Bitrate");
    std::unique_lock lock(mutex_);
    require_unique(user_idx_, row.user_dev_prof, "Userconfig");
    require_reference(dev_idx_, row.dev_id, "Userconfig", "Dev_Id");
    for (const auto& u : t_.userconfig)
        if (u.dev_id == row.dev_id && u.profile == row.profile)
            throw DuplicateKey("Userconfig already has profile '" + std::string(to_string(row.profile)) +
                               "' for device '" + row.dev_id + "'");
    t_.userconfig.push_back(row);
    user_idx_.emplace(row.user_dev_prof, t_.userconfig.size() - 1);
    return row.user_dev_prof;
}

namespace {

template <class T>
T decode(const FieldReader& f);

template <> Videosource decode(const FieldReader& f) {
    return {f.text(0), f.text(1), f.number(2), f.text(3)};
}
template <> Videoseg decode(const FieldReader& f) {
    return {f.text(0), f.text(1), f.integer(2), f.integer(3), f.text(4)};
}
template <> Softwareconfig decode(const FieldReader& f) {
    return {f.text(0), static_cast<int>(f.integer(1)), f.text(2), f.flag(3), f.flag(4)};
}
template <> Paretofront decode(const FieldReader& f) {
    return {f.text(0), f.text(1), f.text(2), f.text(3), f.number(4), f.number(5), f.number(6)};
}
template <> Deviceconfig decode(const FieldReader& f) {
    return {f.text(0), f.text(1), f.number(2), f.number(3), f.text(4), f.text(5)};
}
template <> Network decode(const FieldReader& f) {
    return {f.text(0), f.rate(1), f.rate(2), f.rate(3), f.rate(4)};
}
template <> Userconfig decode(const FieldReader& f) {
    auto profile = parse_profile(f.record[2]);
    if (!profile) f.fail(2, "expected low, medium or high, got '" + f.record[2] + "'");
    return {f.text(0), f.text(1), *profile, f.number(3), f.number(4), f.number(5)};
}

void check_width(std::string_view table, const Row& header, const Row& record, std::size_t line) {
    if (record.size() != header.size()) {
        std::string msg = std::string(table) + " expects " + std::to_string(header.size()) +
                          " fields, got " + std::to_string(record.size());
        if (line) msg = "row " + std::to_string(line) + ": " + msg;
        throw SchemaMismatch(msg);
    }
}

template <class T>
void decode_into(std::vector<T>& out, std::string_view table, const table_io::Table& t) {
    const auto& header = kHeaders[table_index(table)];
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        check_width(table, header, t.rows[i], t.lines[i]);
        out.push_back(decode<T>(FieldReader{table, header, t.rows[i], t.lines[i]}));
    }
}

} // namespace

std::string RvdStore::insert(std::string_view table_name, const std::vector<std::string>& record) {
    const auto idx = table_index(table_name);
    const auto& header = kHeaders[idx];
    check_width(table_name, header, record, 0);
    const FieldReader f{table_name, header, record, 0};
    switch (idx) {
    case 0: return insert(decode<Videosource>(f));
    case 1: return insert(decode<Videoseg>(f));
    case 2: return insert(decode<Softwareconfig>(f));
    case 3: return insert(decode<Paretofront>(f));
    case 4: return insert(decode<Deviceconfig>(f));
    case 5: return insert(decode<Network>(f));
    default: return insert(decode<Userconfig>(f));
    }
}

RvdTables RvdStore::tables() const {
    std::shared_lock lock(mutex_);
    return t_;
}

std::size_t RvdStore::size(std::string_view table_name) const {
    const auto idx = table_index(table_name);
    std::shared_lock lock(mutex_);
    switch (idx) {
    case 0: return t_.videosource.size();
    case 1: return t_.videoseg.size();
    case 2: return t_.softwareconfig.size();
    case 3: return t_.paretofront.size();
    case 4: return t_.deviceconfig.size();
    case 5: return t_.network.size();
    default: return t_.userconfig.size();
    }
}

template <class Pred, class Better>
Paretofront RvdStore::best_row(std::string_view video_id, Pred pred, Better better,
                               const std::string& what) const {
    std::shared_lock lock(mutex_);
    const Paretofront* best = nullptr;
    for (const auto& row : t_.paretofront) {
        if (row.video_id != video_id || !pred(row)) continue;
        if (!best || better(row, *best) ||
            (!better(*best, row) && table_io::natural_less(row.pareto_id, best->pareto_id)))
            best = &row;
    }
    if (!best)
        throw NoRows(QueryStage::FrontQuery,
                     "no Paretofront row for '" + std::string(video_id) + "' with " + what);
    return *best;
}

Paretofront RvdStore::query_max_quality(std::string_view video_id, double r_max_kbps,
                                        double t_max_s) const {
    return best_row(
        video_id,
        [&](const Paretofront& r) { return r.bitrate <= r_max_kbps && r.enctime <= t_max_s; },
        [](const Paretofront& a, const Paretofront& b) { return a.psnr > b.psnr; },
        "Bitrate <= " + format_number(r_max_kbps) + " and Enctime <= " + format_number(t_max_s));
}

Paretofront RvdStore::query_min_bitrate(std::string_view video_id, double q_min_db,
                                        double t_max_s) const {
    return best_row(
        video_id,
        [&](const Paretofront& r) { return r.psnr >= q_min_db && r.enctime <= t_max_s; },
        [](const Paretofront& a, const Paretofront& b) { return a.bitrate < b.bitrate; },
        "PSNR >= " + format_number(q_min_db) + " and Enctime <= " + format_number(t_max_s));
}

ProfileThresholds RvdStore::lookup_profile(std::string_view device_id, Profile profile) const {
    std::shared_lock lock(mutex_);
    const auto dev_key = table_io::to_lower(device_id);
    for (const auto& u : t_.userconfig)
        if (u.profile == profile && table_io::to_lower(u.dev_id) == dev_key)
            return {u.psnr, u.enctime, u.bitrate};
    throw NoRows(QueryStage::ProfileLookup, "no Userconfig row for device '" +
                                                std::string(device_id) + "' profile '" +
                                                std::string(to_string(profile)) + "'");
}

Paretofront RvdStore::device_constrained_select(std::string_view device_id, Profile profile,
                                                Mode mode, std::string_view video_id) const {
    const auto th = lookup_profile(device_id, profile);
    switch (mode) {
    case Mode::MaxQuality: return query_max_quality(video_id, th.bitrate_kbps, th.enc_time_s);
    case Mode::MinBitrate: return query_min_bitrate(video_id, th.psnr_db, th.enc_time_s);
    default:
        throw InvalidArgument(std::string(kModule),
                              "device selection supports max-quality and min-bitrate, not " +
                                  std::string(to_string(mode)));
    }
}

std::string format_table(const RvdTables& tables, std::string_view table_name) {
    const auto idx = table_index(table_name);
    table_io::Table t;
    t.header = kHeaders[idx];
    switch (idx) {
    case 0: append_rows(t, tables.videosource); break;
    case 1: append_rows(t, tables.videoseg); break;
    case 2: append_rows(t, tables.softwareconfig); break;
    case 3: append_rows(t, tables.paretofront); break;
    case 4: append_rows(t, tables.deviceconfig); break;
    case 5: append_rows(t, tables.network); break;
    default: append_rows(t, tables.userconfig); break;
    }
    return table_io::format(t);
}

void export_tables(const RvdTables& tables, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::string manifest;
    for (auto name : kTableNames) {
        const auto file = std::string(name) + ".csv";
        table_io::write_file(dir / file, format_table(tables, name));
        manifest += file + "\n";
    }
    table_io::write_file(dir / kManifest, manifest);
}

RvdTables import_tables(const std::filesystem::path& dir) {
    const auto manifest_path = dir / kManifest;
    if (!std::filesystem::exists(manifest_path))
        throw SchemaMismatch("missing " + manifest_path.string());
    const auto manifest = table_io::read_text(manifest_path, kModule);

    std::vector<std::string> listed;
    std::size_t pos = 0;
    while (pos < manifest.size()) {
        auto end = manifest.find('\n', pos);
        if (end == std::string::npos) end = manifest.size();
        const auto line = table_io::trim(std::string_view(manifest).substr(pos, end - pos));
        if (!line.empty()) listed.emplace_back(line);
        pos = end + 1;
    }

    RvdTables out;
    for (auto name : kTableNames) {
        const auto file = std::string(name) + ".csv";
        if (std::find(listed.begin(), listed.end(), file) == listed.end())
            throw SchemaMismatch("manifest does not list " + file);
        auto t = table_io::read_file(dir / file, kModule);
        if (t.header != kHeaders[table_index(name)]) {
            std::string got;
            for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
            throw SchemaMismatch(file + " has unexpected header '" + got + "'");
        }
        switch (table_index(name)) {
        case 0: decode_into(out.videosource, name, t); break;
        case 1: decode_into(out.videoseg, name, t); break;
        case 2: decode_into(out.softwareconfig, name, t); break;
        case 3: decode_into(out.paretofront, name, t); break;
        case 4: decode_into(out.deviceconfig, name, t); break;
        case 5: decode_into(out.network, name, t); break;
        default: decode_into(out.userconfig, name, t); break;
        }
    }
    if (listed.size() != kTableNames.size())
        throw SchemaMismatch("manifest lists " + std::to_string(listed.size()) + " files, expected " +
                             std::to_string(kTableNames.size()));
    // Key and reference checks.
    (void)RvdStore::from_tables(out);
    return out;
}

} // namespace drastic::rvd
