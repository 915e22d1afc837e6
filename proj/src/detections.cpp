/********************************************************************************
* Copyright 2026 The UTiV Toolkit Authors. All Rights Reserved.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/


#include "utiv/detections.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "text_util.hpp"
#include "utiv/log.hpp"
#include "utiv/rng.hpp"

namespace utiv {

std::string_view to_string(Label label)
{
    switch (label) {
    case Label::Text:
        return "text";
    case Label::Urdu:
        return "urdu";
    case Label::English:
        return "english";
    }
    return "?";
}

std::optional<Label> parse_label(std::string_view text)
{
    if (text == "text") {
        return Label::Text;
    }
    if (text == "urdu") {
        return Label::Urdu;
    }
    if (text == "english") {
        return Label::English;
    }
    return std::nullopt;
}

Label label_for(Script script)
{
    return script == Script::Urdu ? Label::Urdu : Label::English;
}

std::optional<Script> script_of(Label label)
{
    switch (label) {
    case Label::Urdu:
        return Script::Urdu;
    case Label::English:
        return Script::English;
    case Label::Text:
        break;
    }
    return std::nullopt;
}

std::string_view to_string(DetectionMode mode)
{
    switch (mode) {
    case DetectionMode::Unset:
        return "unset";
    case DetectionMode::DetectOnly:
        return "detect-only";
    case DetectionMode::Hybrid:
        return "hybrid";
    }
    return "?";
}

DetectionFormatError::DetectionFormatError(const std::string& message, std::size_t line)
    : Error(line ? fmt::format("line {}: {}", line, message) : message), line_(line)
{
}

std::size_t DetectionSet::size() const
{
    std::size_t n = 0;
    for (const auto& [key, dets] : frames) {
        n += dets.size();
    }
    return n;
}

const std::vector<Detection>& DetectionSet::at(const FrameKey& key) const
{
    static const std::vector<Detection> none;
    auto it = frames.find(key);
    return it == frames.end() ? none : it->second;
}

void DetectionSet::add(const FrameKey& key, const Detection& detection)
{
    const auto wanted = detection.label == Label::Text ? DetectionMode::DetectOnly : DetectionMode::Hybrid;
    if (mode == DetectionMode::Unset) {
        mode = wanted;
    } else if (mode != wanted) {
        throw MixedModeError(fmt::format("label '{}' does not belong in a {} detection set", to_string(detection.label),
                                         to_string(mode)),
                             0);
    }
    frames[key].push_back(detection);
}

DetectionSet parse_detections(std::string_view text)
{
    DetectionSet set;
    std::size_t line_no = 0;
    for (auto line : detail::split(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }

        const auto fields = detail::split(line, ' ');
        if (fields.size() != 8) {
            throw MalformedLineError(
                fmt::format("expected 8 single-space separated fields, found {}", fields.size()), line_no);
        }
        if (fields[0].empty()) {
            throw MalformedLineError("empty video id", line_no);
        }
        auto frame_number = detail::parse_int<std::int64_t>(fields[1]);
        if (!frame_number || *frame_number < 0) {
            throw MalformedLineError(fmt::format("bad frame number '{}'", fields[1]), line_no);
        }
        auto label = parse_label(fields[2]);
        if (!label) {
            throw UnknownLabelError(fmt::format("unknown label '{}'", fields[2]), line_no);
        }
        auto score = detail::parse_double(fields[3]);
        if (!score) {
            throw MalformedLineError(fmt::format("bad score '{}'", fields[3]), line_no);
        }
        if (*score < 0.0 || *score > 1.0) {
            throw ScoreRangeError(fmt::format("score {} is outside [0, 1]", *score), line_no);
        }
        int coords[4];
        for (int i = 0; i < 4; ++i) {
            auto v = detail::parse_int<int>(fields[4 + i]);
            if (!v) {
                throw MalformedLineError(fmt::format("bad box coordinate '{}'", fields[4 + i]), line_no);
            }
            coords[i] = *v;
        }
        const Rect box{coords[0], coords[1], coords[2], coords[3]};
        if (box.empty()) {
            throw DegenerateDetectionError(
                fmt::format("box ({}, {}, {}, {}) has no area", box.x, box.y, box.width, box.height), line_no);
        }

        try {
            set.add({std::string(fields[0]), *frame_number}, {box, *label, *score});
        } catch (const MixedModeError& e) {
            throw MixedModeError(e.what(), line_no);
        }
    }
    return set;
}

DetectionSet read_detections_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot read detections {}", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_detections(buffer.str());
}

std::string write_detections(const DetectionSet& set)
{
    std::string out;
    for (const auto& [key, dets] : set.frames) {
        for (const auto& d : dets) {
            out += fmt::format("{} {} {} {} {} {} {} {}\n", key.video_id, key.frame_number, to_string(d.label),
                               d.score, d.box.x, d.box.y, d.box.width, d.box.height);
        }
    }
    return out;
}

std::string_view to_string(PerturbMode mode)
{
    switch (mode) {
    case PerturbMode::Exact:
        return "exact";
    case PerturbMode::Dilate:
        return "dilate";
    case PerturbMode::Erode:
        return "erode";
    case PerturbMode::Shift:
        return "shift";
    case PerturbMode::Drop:
        return "drop";
    case PerturbMode::Spurious:
        return "spurious";
    }
    return "?";
}

std::optional<PerturbMode> parse_perturb_mode(std::string_view text)
{
    for (auto mode : {PerturbMode::Exact, PerturbMode::Dilate, PerturbMode::Erode, PerturbMode::Shift,
                      PerturbMode::Drop, PerturbMode::Spurious}) {
        if (to_string(mode) == text) {
            return mode;
        }
    }
    return std::nullopt;
}

namespace {

constexpr int kSpuriousAttempts = 200;

void check_magnitude(PerturbMode mode, double magnitude)
{
    if (!std::isfinite(magnitude) || magnitude < 0.0) {
        throw ConfigError(fmt::format("{} magnitude {} must be a non-negative number", to_string(mode), magnitude));
    }
    if (mode == PerturbMode::Drop) {
        if (magnitude > 1.0) {
            throw ConfigError(fmt::format("drop probability {} exceeds 1", magnitude));
        }
    } else if (mode != PerturbMode::Exact && magnitude != std::floor(magnitude)) {
        throw ConfigError(fmt::format("{} magnitude {} must be a whole number", to_string(mode), magnitude));
    }
}

std::optional<Rect> place_spurious(const FrameAnnotation& frame, const RectRegion& gt, Rng& rng)
{
    const int max_w = std::max(1, frame.width / 4);
    const int max_h = std::max(1, frame.height / 10);
    const int min_w = std::min(16, max_w);
    const int min_h = std::min(8, max_h);
    for (int attempt = 0; attempt < kSpuriousAttempts; ++attempt) {
        const int w = static_cast<int>(rng.between(min_w, max_w));
        const int h = static_cast<int>(rng.between(min_h, max_h));
        const Rect r{static_cast<int>(rng.between(0, frame.width - w)), static_cast<int>(rng.between(0, frame.height - h)),
                     w, h};
        const bool overlaps = std::any_of(gt.begin(), gt.end(), [&](const Rect& g) { return intersect_area(r, g) > 0; });
        if (!overlaps) {
            return r;
        }
    }
    return std::nullopt;
}

}   // namespace

PerturbResult perturb_ground_truth(const Dataset& ds, PerturbMode mode, double magnitude, std::uint64_t seed,
                                   bool hybrid)
{
    check_magnitude(mode, magnitude);
    const int pixels = static_cast<int>(magnitude);

    PerturbResult result;
    auto& out = result.detections;
    out.mode = hybrid ? DetectionMode::Hybrid : DetectionMode::DetectOnly;
    Rng rng(seed);

    for (const auto& frame : ds.frames) {
        const auto key = frame.key();
        auto& dets = out.frames[key];
        const Rect bounds = frame.bounds();

        for (std::size_t i = 0; i < frame.lines.size(); ++i) {
            const auto& line = frame.lines[i];
            const Label label = hybrid ? label_for(line.script) : Label::Text;
            Rect box = line.box;

            switch (mode) {
            case PerturbMode::Exact:
                break;
            case PerturbMode::Dilate:
                box = intersection(Rect{box.x - pixels, box.y - pixels, box.width + 2 * pixels, box.height + 2 * pixels},
                                   bounds);
                break;
            case PerturbMode::Erode:
                box = {box.x + pixels, box.y + pixels, box.width - 2 * pixels, box.height - 2 * pixels};
                if (box.empty()) {
                    result.warnings.push_back(fmt::format("{} line {}: erosion by {} px leaves nothing, box dropped",
                                                          to_string(key), i, pixels));
                    log::warn("{}", result.warnings.back());
                    continue;
                }
                break;
            case PerturbMode::Shift: {
                const int dx = static_cast<int>(rng.between(-pixels, pixels));
                const int dy = static_cast<int>(rng.between(-pixels, pixels));
                box = intersection(Rect{box.x + dx, box.y + dy, box.width, box.height}, bounds);
                if (box.empty()) {
                    continue;
                }
                break;
            }
            case PerturbMode::Drop:
                if (rng.bernoulli(magnitude)) {
                    continue;
                }
                break;
            case PerturbMode::Spurious:
                break;
            }
            dets.push_back({box, label, 1.0});
        }

        if (mode == PerturbMode::Spurious) {
            const auto gt = boxes_of(frame);
            for (int n = 0; n < pixels; ++n) {
                auto box = place_spurious(frame, gt, rng);
                if (!box) {
                    result.warnings.push_back(
                        fmt::format("{}: no text-free spot found for spurious box {}", to_string(key), n));
                    continue;
                }
                Label label = Label::Text;
                if (hybrid) {
                    label = rng.bernoulli(0.5) ? Label::Urdu : Label::English;
                }
                dets.push_back({*box, label, 1.0});
            }
        }
    }
    return result;
}

}   // namespace utiv
