// SPDX-License-Identifier: Apache-2.0
#include "drastic/mode_solver.hpp"

#include "drastic/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace drastic {

namespace {

constexpr std::string_view kModule = "mode_solver";

struct AxisRange {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double normalize(double v) const { return hi == lo ? 0.5 : (v - lo) / (hi - lo); }
};

struct Scored {
    const ObjectivePoint* point;
    double value;
};

// true when a is preferred over b
bool better(Mode mode, const Scored& a, const Scored& b) {
    const auto& p = *a.point;
    const auto& o = *b.point;
    switch (mode) {
    case Mode::MinBitrate:
        if (p.r != o.r) return p.r < o.r;
        break;
    case Mode::MaxQuality:
        if (p.q != o.q) return p.q > o.q;
        break;
    case Mode::MinTime:
        if (p.t != o.t) return p.t < o.t;
        break;
    case Mode::Typical:
        if (a.value != b.value) return a.value > b.value;
        break;
    }
    if (mode != Mode::MaxQuality && p.q != o.q) return p.q > o.q;
    if (mode != Mode::MinTime && p.t != o.t) return p.t < o.t;
    if (mode != Mode::MinBitrate && p.r != o.r) return p.r < o.r;
    return table_io::natural_less(p.config_id, o.config_id);
}

double primary_value(Mode mode, const ObjectivePoint& p) {
    switch (mode) {
    case Mode::MinBitrate: return p.r;
    case Mode::MaxQuality: return p.q;
    case Mode::MinTime: return p.t;
    case Mode::Typical: break;
    }
    return 0;
}

InfeasibleDiagnostics diagnose(const ModeRequest& request,
                               std::span<const ObjectivePoint> points) {
    InfeasibleDiagnostics d;
    auto without = [&](auto clear) {
        ModeRequest relaxed = request;
        clear(relaxed);
        return relaxed;
    };
    if (request.q_min) {
        const auto relaxed = without([](ModeRequest& r) { r.q_min.reset(); });
        for (const auto& p : points)
            if (satisfies(relaxed, p) && (!d.q_min_below || p.q > *d.q_min_below)) d.q_min_below = p.q;
    }
    if (request.t_max) {
        const auto relaxed = without([](ModeRequest& r) { r.t_max.reset(); });
        for (const auto& p : points)
            if (satisfies(relaxed, p) && (!d.t_max_above || p.t < *d.t_max_above)) d.t_max_above = p.t;
    }
    if (request.r_max) {
        const auto relaxed = without([](ModeRequest& r) { r.r_max.reset(); });
        for (const auto& p : points)
            if (satisfies(relaxed, p) && (!d.r_max_above || p.r < *d.r_max_above)) d.r_max_above = p.r;
    }
    return d;
}

std::string describe(const InfeasibleDiagnostics& d) {
    std::string s;
    auto add = [&](const std::string& part) {
        s += s.empty() ? "; nearest miss: " : ", ";
        s += part;
    };
    if (d.q_min_below) add("qmin < " + table_io::format_number(*d.q_min_below));
    if (d.t_max_above) add("tmax > " + table_io::format_number(*d.t_max_above));
    if (d.r_max_above) add("rmax > " + table_io::format_number(*d.r_max_above));
    return s;
}

} // namespace

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::MinBitrate: return "min-bitrate";
    case Mode::MaxQuality: return "max-quality";
    case Mode::MinTime: return "min-time";
    case Mode::Typical: return "typical";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
    auto t = table_io::to_lower(table_io::trim(text));
    std::replace(t.begin(), t.end(), '_', '-');
    if (t == "min-bitrate") return Mode::MinBitrate;
    if (t == "max-quality") return Mode::MaxQuality;
    if (t == "min-time" || t == "min-energy") return Mode::MinTime;
    if (t == "typical") return Mode::Typical;
    return std::nullopt;
}

void validate(const ModeRequest& req) {
    auto require = [&](const std::optional<double>& v, const char* name) {
        if (!v)
            throw InvalidArgument(std::string(kModule),
                                  std::string(to_string(req.mode)) + " requires " + name);
        if (std::isnan(*v)) throw InvalidArgument(std::string(kModule), std::string(name) + " is NaN");
    };
    switch (req.mode) {
    case Mode::MinBitrate:
        require(req.q_min, "qmin");
        require(req.t_max, "tmax");
        break;
    case Mode::MaxQuality:
        require(req.r_max, "rmax");
        require(req.t_max, "tmax");
        break;
    case Mode::MinTime:
        require(req.q_min, "qmin");
        require(req.r_max, "rmax");
        break;
    case Mode::Typical:
        require(req.q_min, "qmin");
        require(req.t_max, "tmax");
        require(req.r_max, "rmax");
        break;
    }
    for (const auto* v : {&req.q_min, &req.t_max, &req.r_max})
        if (*v && std::isnan(**v)) throw InvalidArgument(std::string(kModule), "bound is NaN");

    if (req.mode == Mode::Typical) {
        if (!req.weights) throw InvalidArgument(std::string(kModule), "typical requires alpha, beta, gamma");
        const auto& w = *req.weights;
        if (!(w.alpha >= 0 && w.beta >= 0 && w.gamma >= 0))
            throw InvalidArgument(std::string(kModule), "weights must be non-negative");
        if (std::abs(w.alpha + w.beta + w.gamma - 1.0) > 1e-9)
            throw InvalidArgument(std::string(kModule), "weights must sum to 1");
    } else if (req.weights) {
        throw InvalidArgument(std::string(kModule), "weights apply only to typical mode");
    }
}

bool satisfies(const ModeRequest& req, const ObjectivePoint& p) noexcept {
    if (req.q_min && !(p.q > *req.q_min)) return false;
    if (req.t_max && !(p.t < *req.t_max)) return false;
    if (req.r_max && !(p.r < *req.r_max)) return false;
    return true;
}

Selection solve(const ModeRequest& request, std::span<const ObjectivePoint> points) {
    validate(request);

    std::vector<ObjectivePoint> feasible;
    for (const auto& p : points)
        if (satisfies(request, p)) feasible.push_back(p);

    if (feasible.empty()) {
        auto d = diagnose(request, points);
        throw Infeasible("no configuration satisfies " + std::string(to_string(request.mode)) +
                             " constraints among " + std::to_string(points.size()) + " points" +
                             describe(d),
                         d);
    }

    std::vector<Scored> scored;
    scored.reserve(feasible.size());
    if (request.mode == Mode::Typical) {
        AxisRange qr, tr, rr;
        for (const auto& p : pareto_front(feasible).members) {
            qr.add(p.q);
            tr.add(p.t);
            rr.add(p.r);
        }
        const auto& w = *request.weights;
        for (const auto& p : feasible)
            scored.push_back({&p, w.alpha * qr.normalize(p.q) - w.beta * rr.normalize(p.r) -
                                      w.gamma * tr.normalize(p.t)});
    } else {
        for (const auto& p : feasible) scored.push_back({&p, primary_value(request.mode, p)});
    }

    const auto best = std::min_element(scored.begin(), scored.end(),
                                       [&](const Scored& a, const Scored& b) {
                                           return better(request.mode, a, b);
                                       });
    return {best->point->config_id, *best->point, best->value, feasible.size()};
}

Selection solve_on_front(const ModeRequest& request, const ParetoFront& front) {
    return solve(request, front.members);
}

} // namespace drastic
