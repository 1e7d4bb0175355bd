// SPDX-License-Identifier: Apache-2.0
#include "drastic/rvd_store.hpp"

#include <cstdio>
#include <map>

namespace drastic::rvd {

namespace {

std::string numbered(const char* prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04zu", prefix, n);
    return buf;
}

std::string resolution(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

} // namespace

void insert_reference_profiles(RvdStore& store) {
    store.insert(Network{"GSM", 14.4, 14.4, 10, 10});
    store.insert(Network{"2G", 9.6, 115, 10, 10});
    store.insert(Network{"3G", 144, 2000, 220, 384});
    store.insert(Network{"4G LTE", 1000000, 100000, std::nullopt, std::nullopt});

    store.insert(Deviceconfig{"Nexus 5", "1920x1080", 30, 30, "Smartphone", "GSM/2G/3G/4G LTE"});
    store.insert(Deviceconfig{"iPhone 5S Model A153", "1136x640", 30, 30, "Smartphone",
                              "GSM/EDGE/LTE/HSDPA"});

    store.insert(Userconfig{"1-1-1", "Nexus 5", Profile::Low, 30, 60.56, 100});
    store.insert(Userconfig{"1-1-2", "Nexus 5", Profile::Medium, 35, 125.46, 180});
    store.insert(Userconfig{"1-1-3", "Nexus 5", Profile::High, 40, 232.65, 450});
    store.insert(Userconfig{"1-2-1", "iPhone 5S Model A153", Profile::Low, 29, 77.4, 95.2});
    store.insert(Userconfig{"1-2-2", "iPhone 5S Model A153", Profile::Medium, 34.68, 165.3, 201.65});
    store.insert(Userconfig{"1-2-3", "iPhone 5S Model A153", Profile::High, 39.45, 288.62, 567.65});
}

RvdStore seed_database(std::span<const VideoSegment> segments,
                       std::span<const GopConfiguration> configs,
                       std::span<const VideoFront> fronts) {
    RvdStore store;

    std::map<std::string, const VideoSegment*> sources;
    for (const auto& s : segments) sources.try_emplace(s.source_id, &s);
    for (const auto& [id, s] : sources)
        store.insert(Videosource{id, resolution(s->width, s->height), s->framerate, "YUV"});
    for (const auto& s : segments)
        store.insert(Videoseg{s.video_id, resolution(s.width, s.height), s.start_frame, s.end_frame,
                              s.source_id});

    for (const auto& c : configs)
        store.insert(Softwareconfig{c.id, c.qp, gop_config_label(c), c.dbl, c.sao});

    std::size_t n = 0;
    for (const auto& vf : fronts)
        for (const auto& p : vf.front.members) {
            ++n;
            store.insert(Paretofront{numbered("P", n), p.config_id, vf.video_id, numbered("EV", n),
                                     p.q, p.t, p.r});
        }

    insert_reference_profiles(store);
    return store;
}

} // namespace drastic::rvd
