// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drastic {

enum class GopMode { AI, RA8, RA4, LD4, LD6 };
enum class RefreshType { IDR, CRA, None };

// Frames covered by one GOP of the mode: AI 1, RA8 8, RA4 4, LD4 4, LD6 6.
int gop_size(GopMode mode) noexcept;
bool is_random_access(GopMode mode) noexcept;
bool is_low_delay(GopMode mode) noexcept;

std::string_view to_string(GopMode mode) noexcept;
std::string_view to_string(RefreshType refresh) noexcept;
std::optional<GopMode> parse_gop_mode(std::string_view text);
std::optional<RefreshType> parse_refresh(std::string_view text);

// The six QP values swept by the enumerated sets.
inline constexpr std::array<int, 6> kEnumeratedQps{22, 27, 31, 32, 33, 37};

struct GopConfiguration {
    std::string id;
    GopMode mode = GopMode::AI;
    int qp = 32;
    bool dbl = true;
    bool sao = true;
    RefreshType refresh = RefreshType::None;

    friend bool operator==(const GopConfiguration&, const GopConfiguration&) = default;
};

// Builds a validated configuration: qp in 0..51 and refresh == None exactly
// when mode == AI. Throws InvalidArgument otherwise.
GopConfiguration make_configuration(std::string id, GopMode mode, int qp, bool dbl, bool sao,
                                    RefreshType refresh);

// 120 configurations (AI 24, RA8 48, LD4 48), ids S1..S120 in list order.
std::vector<GopConfiguration> enumerate_standard();

// 216 configurations listed AI, RA8, RA4, LD4, LD6. The standard ones keep
// S1..S120; RA4 takes S121..S168 and LD6 S169..S216.
std::vector<GopConfiguration> enumerate_extended();

const GopConfiguration* find_configuration(std::span<const GopConfiguration> set,
                                           std::string_view id);

// Per-frame GOP structure lines ("Frame1: ...") for the inter modes.
struct GopTemplates {
    std::string ra8;
    std::string ra4;
    std::string ld4;
    std::string ld6;

    const std::string& for_mode(GopMode mode) const;

    // Compiled-in copies of data/gop_templates/*.txt.
    static const GopTemplates& builtin();
    // Reads ra8.txt, ra4.txt, ld4.txt, ld6.txt from `dir`; a missing file
    // falls back to the builtin template.
    static GopTemplates load(const std::filesystem::path& dir);
};

// HM-style "Key : value" configuration text.
std::string emit_cfg_text(const GopConfiguration& config,
                          const GopTemplates& templates = GopTemplates::builtin());

// Config-space export: id,mode,qp,dbl,sao,refresh with a header row.
std::string format_config_space(std::span<const GopConfiguration> configs);
std::vector<GopConfiguration> parse_config_space(std::string_view text);

} // namespace drastic
