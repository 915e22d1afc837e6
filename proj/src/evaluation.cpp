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


#include "utiv/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "utiv/log.hpp"

namespace utiv {

double f_measure(double precision, double recall)
{
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

PRFScore make_score(double precision, double recall)
{
    return {precision, recall, f_measure(precision, recall)};
}

AreaTally frame_tally(std::span<const Rect> detections, std::span<const Rect> ground_truth)
{
    return {region_intersection_area(detections, ground_truth), union_area(detections), union_area(ground_truth)};
}

AreaTallyF frame_tally(std::span<const RectF> detections, std::span<const RectF> ground_truth)
{
    return {region_intersection_area(detections, ground_truth), union_area(detections), union_area(ground_truth)};
}

namespace {

template <typename A>
PRFScore aggregate_impl(std::span<const BasicAreaTally<A>> tallies)
{
    BasicAreaTally<A> total;
    for (const auto& t : tallies) {
        total += t;
    }
    if (total.detected <= A{} && total.ground_truth <= A{}) {
        throw UndefinedScoreError("precision and recall are undefined: no detected and no ground-truth area");
    }

    PRFScore score;
    if (total.detected > A{}) {
        score.precision = static_cast<double>(total.intersection) / static_cast<double>(total.detected);
    } else {
        score.precision = 1.0;
        score.precision_by_convention = true;
    }
    if (total.ground_truth > A{}) {
        score.recall = static_cast<double>(total.intersection) / static_cast<double>(total.ground_truth);
    } else {
        score.recall = 1.0;
        score.recall_by_convention = true;
    }
    score.f_measure = f_measure(score.precision, score.recall);
    return score;
}

std::string list_unknown_frames(const DetectionSet& dets, const Dataset& ds)
{
    std::set<FrameKey> known;
    for (const auto& frame : ds.frames) {
        known.insert(frame.key());
    }
    std::vector<std::string> unknown;
    for (const auto& [key, boxes] : dets.frames) {
        if (!known.count(key)) {
            unknown.push_back(to_string(key));
        }
    }
    if (unknown.empty()) {
        return {};
    }
    constexpr std::size_t kShown = 10;
    std::string listed;
    for (std::size_t i = 0; i < std::min(kShown, unknown.size()); ++i) {
        listed += (i ? ", " : "") + unknown[i];
    }
    if (unknown.size() > kShown) {
        listed += fmt::format(" and {} more", unknown.size() - kShown);
    }
    return listed;
}

void require_known_frames(const DetectionSet& dets, const Dataset& ds)
{
    if (auto listed = list_unknown_frames(dets, ds); !listed.empty()) {
        throw UnknownFrameError("detections reference frames missing from the dataset: " + listed);
    }
}

RectRegion detection_boxes(const std::vector<Detection>& dets)
{
    RectRegion out;
    out.reserve(dets.size());
    for (const auto& d : dets) {
        out.push_back(d.box);
    }
    return out;
}

RectRegion detection_boxes(const std::vector<Detection>& dets, Label label)
{
    RectRegion out;
    for (const auto& d : dets) {
        if (d.label == label) {
            out.push_back(d.box);
        }
    }
    return out;
}

}   // namespace

PRFScore aggregate(std::span<const AreaTally> tallies)
{
    return aggregate_impl<Area>(tallies);
}

PRFScore aggregate(std::span<const AreaTallyF> tallies)
{
    return aggregate_impl<double>(tallies);
}

double round_to(double value, int digits, Rounding mode)
{
    const double scale = std::pow(10.0, digits);
    constexpr double kSlack = 1e-9;
    const double scaled = value * scale;
    const double rounded = mode == Rounding::HalfUp ? std::floor(scaled + 0.5 + kSlack) : std::trunc(scaled + kSlack);
    return rounded / scale;
}

std::vector<AreaTally> detection_tallies(const DetectionSet& dets, const Dataset& ds)
{
    require_known_frames(dets, ds);
    if (dets.mode == DetectionMode::Hybrid) {
        log::info("hybrid detections collapsed to the 'text' label for script-agnostic evaluation");
    }

    std::vector<AreaTally> tallies;
    tallies.reserve(ds.frames.size());
    for (const auto& frame : ds.frames) {
        tallies.push_back(frame_tally(detection_boxes(dets.at(frame.key())), boxes_of(frame)));
    }
    return tallies;
}

PRFScore evaluate_detection(const DetectionSet& dets, const Dataset& ds)
{
    return aggregate(detection_tallies(dets, ds));
}

HybridEvaluation evaluate_hybrid(const DetectionSet& dets, const Dataset& ds)
{
    if (dets.mode == DetectionMode::DetectOnly) {
        throw ConfigError("hybrid evaluation needs urdu/english labels, got a detect-only set");
    }
    require_known_frames(dets, ds);

    HybridEvaluation result;
    for (auto script : kScripts) {
        result.per_script_tally[script] = {};
    }
    for (const auto& frame : ds.frames) {
        const auto& frame_dets = dets.at(frame.key());
        for (auto script : kScripts) {
            result.per_script_tally[script] +=
                frame_tally(detection_boxes(frame_dets, label_for(script)), boxes_of(frame, script));
        }
        result.combined_tally += frame_tally(detection_boxes(frame_dets), boxes_of(frame));
    }

    for (const auto& [script, tally] : result.per_script_tally) {
        if (tally.detected > 0 || tally.ground_truth > 0) {
            result.per_script[script] = aggregate(tally);
        }
    }
    result.combined = aggregate(result.combined_tally);
    return result;
}

std::int64_t ConfusionMatrix::row_sum(Script truth) const
{
    const auto& row = counts[index(truth)];
    return row[0] + row[1];
}

std::int64_t ConfusionMatrix::column_sum(Script predicted) const
{
    return counts[0][index(predicted)] + counts[1][index(predicted)];
}

ConfusionMatrix confusion_matrix(std::span<const std::pair<Script, Script>> pairs)
{
    if (pairs.empty()) {
        throw std::invalid_argument("confusion matrix needs at least one (true, predicted) pair");
    }
    ConfusionMatrix m;
    for (const auto& [truth, predicted] : pairs) {
        ++m.at(truth, predicted);
    }
    return m;
}

std::map<Script, PRFScore> class_prf(const ConfusionMatrix& m)
{
    std::map<Script, PRFScore> out;
    for (auto script : kScripts) {
        const auto hits = m.at(script, script);
        const auto actual = m.row_sum(script);
        const auto predicted = m.column_sum(script);
        if (actual == 0) {
            throw UndefinedScoreError(fmt::format("class '{}' has no true instances", to_string(script)));
        }

        PRFScore score;
        score.recall = static_cast<double>(hits) / static_cast<double>(actual);
        if (predicted > 0) {
            score.precision = static_cast<double>(hits) / static_cast<double>(predicted);
        } else {
            score.precision = 1.0;
            score.precision_by_convention = true;
        }
        score.f_measure = f_measure(score.precision, score.recall);
        out[script] = score;
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_match(std::span<const Rect> gt,
                                                              std::span<const Rect> detections, double iou_threshold)
{
    struct Candidate
    {
        double iou;
        std::size_t gt;
        std::size_t det;
    };
    std::vector<Candidate> candidates;
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t d = 0; d < detections.size(); ++d) {
            const double v = iou(gt[g], detections[d]);
            if (v > 0.0 && v >= iou_threshold) {
                candidates.push_back({v, g, d});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) {
            return a.iou > b.iou;
        }
        return std::tie(a.gt, a.det) < std::tie(b.gt, b.det);
    });

    std::vector<bool> gt_used(gt.size(), false);
    std::vector<bool> det_used(detections.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    for (const auto& c : candidates) {
        if (!gt_used[c.gt] && !det_used[c.det]) {
            gt_used[c.gt] = det_used[c.det] = true;
            matches.emplace_back(c.gt, c.det);
        }
    }
    return matches;
}

LocalizationReport localization_diagnostics(const DetectionSet& dets, const Dataset& ds, double iou_match)
{
    require_known_frames(dets, ds);

    LocalizationReport report;
    report.iou_threshold = iou_match;
    double ratio_sum = 0.0;

    for (const auto& frame : ds.frames) {
        const auto gt = boxes_of(frame);
        const auto found = detection_boxes(dets.at(frame.key()));
        const auto matches = greedy_match(gt, found, iou_match);

        report.misses += gt.size() - matches.size();
        report.false_alarms += found.size() - matches.size();
        for (const auto& [g, d] : matches) {
            const double v = iou(gt[g], found[d]);
            const double ratio = static_cast<double>(found[d].area()) / static_cast<double>(gt[g].area());
            report.matches.push_back({frame.key(), g, d, v, ratio});
            ++report.iou_histogram[std::min<std::size_t>(9, static_cast<std::size_t>(v * 10.0))];
            if (ratio > 1.0) {
                ++report.oversize;
            } else if (ratio < 1.0) {
                ++report.undersize;
            }
            ratio_sum += ratio;
        }
    }
    if (!report.matches.empty()) {
        report.mean_size_ratio = ratio_sum / static_cast<double>(report.matches.size());
    }
    return report;
}

}   // namespace utiv
