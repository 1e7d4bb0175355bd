// SPDX-License-Identifier: Apache-2.0
#include "drastic/config_space.hpp"

#include "drastic/error.hpp"
#include "drastic/table_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace drastic {

namespace {

constexpr std::string_view kModule = "config_space";

void append_group(std::vector<GopConfiguration>& out, GopMode mode, int& next_id) {
    const bool intra = mode == GopMode::AI;
    for (int qp : kEnumeratedQps)
        for (bool dbl : {true, false})
            for (bool sao : {true, false}) {
                if (intra) {
                    out.push_back({"S" + std::to_string(next_id++), mode, qp, dbl, sao,
                                   RefreshType::None});
                    continue;
                }
                for (RefreshType refresh : {RefreshType::IDR, RefreshType::CRA})
                    out.push_back({"S" + std::to_string(next_id++), mode, qp, dbl, sao, refresh});
            }
}

int intra_period(GopMode mode) {
    switch (mode) {
    case GopMode::AI: return 1;
    case GopMode::RA8:
    case GopMode::RA4: return 32;
    case GopMode::LD4:
    case GopMode::LD6: return -1;
    }
    return 1;
}

int decoding_refresh_type(const GopConfiguration& c) {
    if (!is_random_access(c.mode)) return 0;
    return c.refresh == RefreshType::CRA ? 1 : 2;
}

std::string on_off(bool v) { return v ? "on" : "off"; }

} // namespace

int gop_size(GopMode mode) noexcept {
    switch (mode) {
    case GopMode::AI: return 1;
    case GopMode::RA8: return 8;
    case GopMode::RA4: return 4;
    case GopMode::LD4: return 4;
    case GopMode::LD6: return 6;
    }
    return 1;
}

bool is_random_access(GopMode mode) noexcept {
    return mode == GopMode::RA8 || mode == GopMode::RA4;
}

bool is_low_delay(GopMode mode) noexcept {
    return mode == GopMode::LD4 || mode == GopMode::LD6;
}

std::string_view to_string(GopMode mode) noexcept {
    switch (mode) {
    case GopMode::AI: return "AI";
    case GopMode::RA8: return "RA8";
    case GopMode::RA4: return "RA4";
    case GopMode::LD4: return "LD4";
    case GopMode::LD6: return "LD6";
    }
    return "?";
}

std::string_view to_string(RefreshType refresh) noexcept {
    switch (refresh) {
    case RefreshType::IDR: return "IDR";
    case RefreshType::CRA: return "CRA";
    case RefreshType::None: return "None";
    }
    return "?";
}

std::optional<GopMode> parse_gop_mode(std::string_view text) {
    auto t = table_io::to_lower(table_io::trim(text));
    if (t == "ai") return GopMode::AI;
    if (t == "ra8") return GopMode::RA8;
    if (t == "ra4") return GopMode::RA4;
    if (t == "ld4") return GopMode::LD4;
    if (t == "ld6") return GopMode::LD6;
    return std::nullopt;
}

std::optional<RefreshType> parse_refresh(std::string_view text) {
    auto t = table_io::to_lower(table_io::trim(text));
    if (t == "idr") return RefreshType::IDR;
    // older HM tables write CRA as "CDR"
    if (t == "cra" || t == "cdr") return RefreshType::CRA;
    if (t == "none" || t == "-" || t.empty()) return RefreshType::None;
    return std::nullopt;
}

GopConfiguration make_configuration(std::string id, GopMode mode, int qp, bool dbl, bool sao,
                                    RefreshType refresh) {
    if (qp < 0 || qp > 51)
        throw InvalidArgument(std::string(kModule), "qp " + std::to_string(qp) + " outside 0..51");
    if ((mode == GopMode::AI) != (refresh == RefreshType::None))
        throw InvalidArgument(std::string(kModule),
                              "refresh must be None exactly for AI configurations");
    if (id.empty()) throw InvalidArgument(std::string(kModule), "empty configuration id");
    return {std::move(id), mode, qp, dbl, sao, refresh};
}

std::vector<GopConfiguration> enumerate_standard() {
    std::vector<GopConfiguration> out;
    out.reserve(120);
    int next = 1;
    append_group(out, GopMode::AI, next);
    append_group(out, GopMode::RA8, next);
    append_group(out, GopMode::LD4, next);
    return out;
}

std::vector<GopConfiguration> enumerate_extended() {
    auto standard = enumerate_standard();
    std::vector<GopConfiguration> ra4, ld6;
    int next = static_cast<int>(standard.size()) + 1;
    append_group(ra4, GopMode::RA4, next);
    append_group(ld6, GopMode::LD6, next);

    std::vector<GopConfiguration> out;
    out.reserve(216);
    auto copy_mode = [&](const std::vector<GopConfiguration>& src, GopMode mode) {
        std::copy_if(src.begin(), src.end(), std::back_inserter(out),
                     [mode](const GopConfiguration& c) { return c.mode == mode; });
    };
    copy_mode(standard, GopMode::AI);
    copy_mode(standard, GopMode::RA8);
    copy_mode(ra4, GopMode::RA4);
    copy_mode(standard, GopMode::LD4);
    copy_mode(ld6, GopMode::LD6);
    return out;
}

const GopConfiguration* find_configuration(std::span<const GopConfiguration> set,
                                           std::string_view id) {
    auto it = std::find_if(set.begin(), set.end(),
                           [id](const GopConfiguration& c) { return c.id == id; });
    return it == set.end() ? nullptr : &*it;
}

const std::string& GopTemplates::for_mode(GopMode mode) const {
    static const std::string empty;
    switch (mode) {
    case GopMode::RA8: return ra8;
    case GopMode::RA4: return ra4;
    case GopMode::LD4: return ld4;
    case GopMode::LD6: return ld6;
    case GopMode::AI: return empty;
    }
    return empty;
}

GopTemplates GopTemplates::load(const std::filesystem::path& dir) {
    GopTemplates t = builtin();
    auto read_if = [&](const char* name, std::string& slot) {
        auto path = dir / name;
        if (std::filesystem::exists(path)) slot = table_io::read_text(path, kModule);
    };
    read_if("ra8.txt", t.ra8);
    read_if("ra4.txt", t.ra4);
    read_if("ld4.txt", t.ld4);
    read_if("ld6.txt", t.ld6);
    return t;
}

std::string emit_cfg_text(const GopConfiguration& c, const GopTemplates& templates) {
    std::ostringstream o;
    o << "# Configuration " << c.id << ' ' << to_string(c.mode) << " qp=" << c.qp
      << " dbl=" << on_off(c.dbl) << " sao=" << on_off(c.sao)
      << " refresh=" << to_string(c.refresh) << '\n'
      << "#======== File I/O =====================\n"
      << "BitstreamFile : str.bin\n"
      << "ReconFile : rec.yuv\n\n"
      << "#======== Profile ================\n"
      << "Profile : main\n\n"
      << "#======== Unit definition ================\n"
      << "MaxCUWidth : 64 # Maximum coding unit width in pixel\n"
      << "MaxCUHeight : 64 # Maximum coding unit height in pixel\n"
      << "MaxPartitionDepth : 4 # Maximum coding unit depth\n"
      << "QuadtreeTULog2MaxSize : 5 # Log2 of maximum transform size for quadtree-based TU coding (2...6)\n"
      << "QuadtreeTULog2MinSize : 2 # Log2 of minimum transform size for quadtree-based TU coding (2...6)\n"
      << "QuadtreeTUMaxDepthInter : 3\n"
      << "QuadtreeTUMaxDepthIntra : 3\n\n"
      << "#======== Coding Structure =============\n"
      << "IntraPeriod : " << intra_period(c.mode) << " # Period of I-Frame (-1 = only first)\n"
      << "DecodingRefreshType : " << decoding_refresh_type(c)
      << " # Random Access 0:none, 1:CRA, 2:IDR\n"
      << "GOPSize : " << gop_size(c.mode) << " # GOP Size (number of B slice = GOPSize-1)\n"
      << "#        Type POC QPoffset QPfactor tcOffsetDiv2 betaOffsetDiv2 temporal_id "
         "#ref_pics_active #ref_pics reference pictures predict deltaRPS #ref_idcs reference idcs\n";
    const auto& frames = templates.for_mode(c.mode);
    o << frames;
    if (!frames.empty() && frames.back() != '\n') o << '\n';
    o << '\n'
      << "#=========== Motion Search =============\n"
      << "FastSearch : 1 # 0:Full search 1:TZ search\n"
      << "SearchRange : 64 # (0: Search range is a Full frame)\n"
      << "BipredSearchRange : 4 # Search range for bi-prediction refinement\n"
      << "HadamardME : 1 # Use of hadamard measure for fractional ME\n"
      << "FEN : 1 # Fast encoder decision\n"
      << "FDM : 1 # Fast Decision for Merge RD cost\n\n"
      << "#======== Quantization =============\n"
      << "QP : " << c.qp << " # Quantization parameter(0-51)\n"
      << "MaxDeltaQP : 0 # CU-based multi-QP optimization\n"
      << "MaxCuDQPDepth : 0 # Max depth of a minimum CuDQP for sub-LCU-level delta QP\n"
      << "DeltaQpRD : 0 # Slice-based multi-QP optimization\n"
      << "RDOQ : 1 # RDOQ\n"
      << "RDOQTS : 1 # RDOQ for transform skip\n\n"
      << "#=========== Deblock Filter ============\n"
      << "DeblockingFilterControlPresent : 0 # Dbl control params present (0=not present, 1=present)\n"
      << "LoopFilterOffsetInPPS : 0 # Dbl params: 0=varying params in SliceHeader, 1=constant params in PPS\n"
      << "LoopFilterDisable : " << (c.dbl ? 0 : 1)
      << " # Disable deblocking filter (0=Filter, 1=No Filter)\n"
      << "LoopFilterBetaOffset_div2 : 0 # base_param: -6 ~ 6\n"
      << "LoopFilterTcOffset_div2 : 0 # base_param: -6 ~ 6\n"
      << "DeblockingFilterMetric : 0 # blockiness metric\n\n"
      << "#=========== Misc. ============\n"
      << "InternalBitDepth : 8 # codec operating bit-depth\n\n"
      << "#=========== Coding Tools =================\n"
      << "SAO : " << (c.sao ? 1 : 0) << " # Sample adaptive offset  (0: OFF, 1: ON)\n";
    return o.str();
}

std::string format_config_space(std::span<const GopConfiguration> configs) {
    table_io::Table t;
    t.header = {"id", "mode", "qp", "dbl", "sao", "refresh"};
    for (const auto& c : configs)
        t.rows.push_back({c.id, std::string(to_string(c.mode)), std::to_string(c.qp),
                          on_off(c.dbl), on_off(c.sao), std::string(to_string(c.refresh))});
    return table_io::format(t);
}

std::vector<GopConfiguration> parse_config_space(std::string_view text) {
    auto t = table_io::parse(text, kModule);
    const table_io::Row expected{"id", "mode", "qp", "dbl", "sao", "refresh"};
    if (t.header != expected)
        throw ParseError(std::string(kModule), "unexpected config-space header", 1);

    auto parse_flag = [&](const std::string& f, std::size_t line, const char* col) {
        auto v = table_io::to_lower(table_io::trim(f));
        if (v == "on" || v == "1") return true;
        if (v == "off" || v == "0") return false;
        throw ParseError(std::string(kModule), std::string(col) + ": expected on/off", line);
    };

    std::vector<GopConfiguration> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const auto line = t.lines[i];
        auto mode = parse_gop_mode(r[1]);
        if (!mode) throw ParseError(std::string(kModule), "unknown mode '" + r[1] + "'", line);
        auto refresh = parse_refresh(r[5]);
        if (!refresh)
            throw ParseError(std::string(kModule), "unknown refresh '" + r[5] + "'", line);
        auto qp = table_io::parse_int(r[2], kModule, line, "qp");
        try {
            out.push_back(make_configuration(std::string(table_io::trim(r[0])), *mode,
                                             static_cast<int>(qp), parse_flag(r[3], line, "dbl"),
                                             parse_flag(r[4], line, "sao"), *refresh));
        } catch (const InvalidArgument& e) {
            throw ParseError(std::string(kModule), e.what(), line);
        }
    }
    return out;
}

} // namespace drastic
