// SPDX-License-Identifier: Apache-2.0
#include "drastic/request_io.hpp"

#include "drastic/table_io.hpp"

#include <vector>

namespace drastic {

namespace {

constexpr std::string_view kModule = "mode_solver";

std::vector<std::string_view> split_pairs(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
        const auto start = i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != ',') ++i;
        if (i > start) out.push_back(text.substr(start, i - start));
    }
    return out;
}

} // namespace

ModeRequest parse_request(std::string_view text) {
    ModeRequest req;
    bool have_mode = false;
    std::optional<double> alpha, beta, gamma;

    for (auto pair : split_pairs(text)) {
        const auto eq = pair.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(std::string(kModule), "expected key=value, got '" + std::string(pair) + "'");
        const auto key = table_io::to_lower(pair.substr(0, eq));
        const auto value = pair.substr(eq + 1);
        auto number = [&] { return table_io::parse_double(value, kModule, 0, key); };

        if (key == "mode") {
            auto m = parse_mode(value);
            if (!m) throw ParseError(std::string(kModule), "unknown mode '" + std::string(value) + "'");
            req.mode = *m;
            have_mode = true;
        } else if (key == "qmin") {
            req.q_min = number();
        } else if (key == "tmax") {
            req.t_max = number();
        } else if (key == "rmax") {
            req.r_max = number();
        } else if (key == "alpha") {
            alpha = number();
        } else if (key == "beta") {
            beta = number();
        } else if (key == "gamma") {
            gamma = number();
        } else {
            throw ParseError(std::string(kModule), "unknown request key '" + key + "'");
        }
    }
    if (!have_mode) throw ParseError(std::string(kModule), "request without mode");
    if (alpha || beta || gamma) {
        if (!(alpha && beta && gamma))
            throw ParseError(std::string(kModule), "alpha, beta and gamma must be given together");
        req.weights = Weights{*alpha, *beta, *gamma};
    }
    return req;
}

std::string format_request(const ModeRequest& req) {
    std::string s = "mode=" + std::string(to_string(req.mode));
    if (req.q_min) s += " qmin=" + table_io::format_number(*req.q_min);
    if (req.t_max) s += " tmax=" + table_io::format_number(*req.t_max);
    if (req.r_max) s += " rmax=" + table_io::format_number(*req.r_max);
    if (req.weights) {
        s += " alpha=" + table_io::format_number(req.weights->alpha);
        s += " beta=" + table_io::format_number(req.weights->beta);
        s += " gamma=" + table_io::format_number(req.weights->gamma);
    }
    return s;
}

} // namespace drastic
