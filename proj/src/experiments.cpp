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


#include "utiv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "text_util.hpp"
#include "utiv/rng.hpp"

namespace utiv {

std::string to_string(const Resolution& r)
{
    return fmt::format("{}x{}", r.width, r.height);
}

Resolution parse_resolution(std::string_view text)
{
    const auto x = text.find('x');
    if (x != std::string_view::npos) {
        auto w = detail::parse_int<int>(text.substr(0, x));
        auto h = detail::parse_int<int>(text.substr(x + 1));
        if (w && h && *w > 0 && *h > 0) {
            return {*w, *h};
        }
    }
    throw ConfigError(fmt::format("bad resolution '{}', expected WIDTHxHEIGHT", text));
}

namespace {

int scale_edge(int edge, int from, int to)
{
    return static_cast<int>(std::floor(static_cast<double>(edge) * to / from + 0.5));
}

}   // namespace

Rect rescale_box(const Rect& box, const Resolution& from, const Resolution& to)
{
    const int left = scale_edge(box.x, from.width, to.width);
    const int top = scale_edge(box.y, from.height, to.height);
    const int right = scale_edge(box.right(), from.width, to.width);
    const int bottom = scale_edge(box.bottom(), from.height, to.height);
    if (right <= left || bottom <= top) {
        return {left, top, 0, 0};
    }
    return {left, top, right - left, bottom - top};
}

RectF rescale_box(const RectF& box, const Resolution& from, const Resolution& to)
{
    const double sx = static_cast<double>(to.width) / from.width;
    const double sy = static_cast<double>(to.height) / from.height;
    return {box.x * sx, box.y * sy, box.width * sx, box.height * sy};
}

Dataset rescale_dataset(const Dataset& ds, const Resolution& target)
{
    Dataset out;
    out.root_path = ds.root_path;
    out.frames.reserve(ds.frames.size());
    for (const auto& frame : ds.frames) {
        const Resolution base{frame.width, frame.height};
        FrameAnnotation scaled = frame;
        scaled.width = target.width;
        scaled.height = target.height;
        scaled.lines.clear();
        for (const auto& line : frame.lines) {
            auto box = rescale_box(line.box, base, target);
            if (!box.empty()) {
                scaled.lines.push_back({box, line.script, line.transcription});
            }
        }
        out.frames.push_back(std::move(scaled));
    }
    return out;
}

DetectionSet rescale_detections(const DetectionSet& dets, const Dataset& base, const Resolution& target)
{
    std::map<FrameKey, Resolution> sizes;
    for (const auto& frame : base.frames) {
        sizes.emplace(frame.key(), Resolution{frame.width, frame.height});
    }

    DetectionSet out;
    out.mode = dets.mode;
    for (const auto& [key, boxes] : dets.frames) {
        auto size = sizes.find(key);
        if (size == sizes.end()) {
            throw UnknownFrameError(
                fmt::format("detections reference frame {} missing from the dataset", to_string(key)));
        }
        const Resolution from = size->second;
        auto& scaled = out.frames[key];
        for (const auto& d : boxes) {
            auto box = rescale_box(d.box, from, target);
            if (!box.empty()) {
                scaled.push_back({box, d.label, d.score});
            }
        }
    }
    return out;
}

namespace {

PRFScore evaluate_continuous(const DetectionSet& dets, const Dataset& ds,
                             const std::function<RectF(const RectF&, const FrameAnnotation&)>& transform)
{
    std::vector<AreaTallyF> tallies;
    tallies.reserve(ds.frames.size());
    for (const auto& frame : ds.frames) {
        RectRegionF gt;
        for (const auto& line : frame.lines) {
            gt.push_back(transform(to_continuous(line.box), frame));
        }
        RectRegionF found;
        for (const auto& d : dets.at(frame.key())) {
            found.push_back(transform(to_continuous(d.box), frame));
        }
        tallies.push_back(frame_tally(found, gt));
    }
    return aggregate(tallies);
}

void sort_points(std::vector<SweepPoint>& points)
{
    std::stable_sort(points.begin(), points.end(),
                     [](const SweepPoint& a, const SweepPoint& b) { return a.value < b.value; });
}

}   // namespace

std::vector<SweepPoint> resolution_sweep(const Dataset& ds, const DetectionSet& dets,
                                         std::span<const Resolution> resolutions, const SweepOptions& options)
{
    std::vector<SweepPoint> points;
    for (const auto& target : resolutions) {
        if (target.width <= 0 || target.height <= 0) {
            throw ConfigError(fmt::format("resolution {} must be positive", to_string(target)));
        }
        SweepPoint point{to_string(target), static_cast<double>(target.width) * target.height, {}};
        if (options.continuous) {
            detection_tallies(dets, ds);   // rejects unknown frames
            point.score = evaluate_continuous(dets, ds, [&](const RectF& box, const FrameAnnotation& frame) {
                return rescale_box(box, {frame.width, frame.height}, target);
            });
        } else {
            point.score = evaluate_detection(rescale_detections(dets, ds, target), rescale_dataset(ds, target));
        }
        points.push_back(std::move(point));
    }
    sort_points(points);
    return points;
}

std::vector<SweepPoint> resolution_sweep(const Dataset& ds, std::span<const ResolutionRun> runs)
{
    std::vector<SweepPoint> points;
    for (const auto& run : runs) {
        SweepPoint point{to_string(run.resolution),
                         static_cast<double>(run.resolution.width) * run.resolution.height, {}};
        point.score = evaluate_detection(run.detections, rescale_dataset(ds, run.resolution));
        points.push_back(std::move(point));
    }
    sort_points(points);
    return points;
}

PRFScore evaluate_scaled_continuous(const DetectionSet& dets, const Dataset& ds, double factor)
{
    return evaluate_continuous(dets, ds, [factor](const RectF& box, const FrameAnnotation&) {
        return RectF{box.x * factor, box.y * factor, box.width * factor, box.height * factor};
    });
}

BudgetError::BudgetError(const std::string& message, std::int64_t available)
    : Error(message), available_(available)
{
}

std::vector<std::vector<FrameKey>> training_subsets(const Dataset& ds, std::span<const std::int64_t> line_counts,
                                                    std::uint64_t seed)
{
    std::int64_t total = 0;
    for (const auto& frame : ds.frames) {
        total += static_cast<std::int64_t>(frame.lines.size());
    }
    for (std::size_t i = 0; i < line_counts.size(); ++i) {
        if (line_counts[i] < 0 || (i > 0 && line_counts[i] < line_counts[i - 1])) {
            throw ConfigError("line counts must be non-negative and ascending");
        }
        if (line_counts[i] > total) {
            throw BudgetError(fmt::format("line budget {} exceeds the {} lines available", line_counts[i], total),
                              total);
        }
    }

    std::vector<std::size_t> order(ds.frames.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span(order));

    std::vector<std::vector<FrameKey>> subsets;
    std::vector<std::size_t> taken;
    std::int64_t lines = 0;
    std::size_t next = 0;
    for (auto budget : line_counts) {
        // A budget equal to the corpus takes every frame, including line-free ones.
        while ((lines < budget || budget == total) && next < order.size()) {
            taken.push_back(order[next]);
            lines += static_cast<std::int64_t>(ds.frames[order[next]].lines.size());
            ++next;
        }
        auto sorted = taken;
        std::sort(sorted.begin(), sorted.end());
        std::vector<FrameKey> subset;
        subset.reserve(sorted.size());
        for (auto i : sorted) {
            subset.push_back(ds.frames[i].key());
        }
        subsets.push_back(std::move(subset));
    }
    return subsets;
}

}   // namespace utiv
