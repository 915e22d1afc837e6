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


#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "utiv/annotation.hpp"
#include "utiv/dataset.hpp"
#include "utiv/detections.hpp"
#include "utiv/error.hpp"
#include "utiv/geometry.hpp"

namespace utiv {

/// Area sums behind precision and recall. Tallies add component-wise, so the
/// tally of a frame set is the sum of its frame tallies.
template <typename A>
struct BasicAreaTally
{
    A intersection{};
    A detected{};
    A ground_truth{};

    BasicAreaTally& operator+=(const BasicAreaTally& other)
    {
        intersection += other.intersection;
        detected += other.detected;
        ground_truth += other.ground_truth;
        return *this;
    }

    friend BasicAreaTally operator+(BasicAreaTally a, const BasicAreaTally& b) { return a += b; }
    friend bool operator==(const BasicAreaTally&, const BasicAreaTally&) = default;
};

using AreaTally = BasicAreaTally<Area>;
using AreaTallyF = BasicAreaTally<double>;

struct PRFScore
{
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    /// Precision was 0/0 (nothing detected) and set to 1 by convention.
    bool precision_by_convention = false;
    /// Recall was 0/0 (no ground truth) and set to 1 by convention.
    bool recall_by_convention = false;
};

/// 2PR / (P + R), or 0 when both are 0.
double f_measure(double precision, double recall);

PRFScore make_score(double precision, double recall);

/// Area sums for one frame. Both sides are unions, so overlapping boxes count once.
AreaTally frame_tally(std::span<const Rect> detections, std::span<const Rect> ground_truth);
AreaTallyF frame_tally(std::span<const RectF> detections, std::span<const RectF> ground_truth);

/// Micro-average: P = sum(intersection) / sum(detected), R = sum(intersection) / sum(gt).
/// Throws UndefinedScoreError when every tally is zero.
PRFScore aggregate(std::span<const AreaTally> tallies);
PRFScore aggregate(std::span<const AreaTallyF> tallies);

template <typename A>
PRFScore aggregate(const BasicAreaTally<A>& total)
{
    return aggregate(std::span<const BasicAreaTally<A>>(&total, 1));
}

enum class Rounding { HalfUp, TowardZero };

/// Decimal rounding for table output. Values within 1e-9 of a boundary are
/// treated as on it, so 0.125 rounds to 0.13 at two digits.
double round_to(double value, int digits, Rounding mode = Rounding::HalfUp);

/// Per-frame tallies over all text boxes, ignoring labels. Frames of `ds`
/// without detections count with an empty detection region.
/// Throws UnknownFrameError when detections name frames outside `ds`.
std::vector<AreaTally> detection_tallies(const DetectionSet& dets, const Dataset& ds);

/// Script-agnostic area evaluation. Hybrid detection sets are accepted and
/// collapsed to `text` with a notice in the log.
PRFScore evaluate_detection(const DetectionSet& dets, const Dataset& ds);

struct HybridEvaluation
{
    /// Only scripts with any ground truth or detections appear.
    std::map<Script, PRFScore> per_script;
    std::map<Script, AreaTally> per_script_tally;
    PRFScore combined;
    AreaTally combined_tally;
};

/// Each script is scored from detections carrying that label against gt lines
/// of that script; `combined` ignores labels. Requires a hybrid (or empty) set.
HybridEvaluation evaluate_hybrid(const DetectionSet& dets, const Dataset& ds);

/// Counts indexed [true script][predicted script], Urdu first.
struct ConfusionMatrix
{
    std::array<std::array<std::int64_t, 2>, 2> counts{};

    std::int64_t& at(Script truth, Script predicted) { return counts[index(truth)][index(predicted)]; }
    std::int64_t at(Script truth, Script predicted) const { return counts[index(truth)][index(predicted)]; }
    std::int64_t row_sum(Script truth) const;
    std::int64_t column_sum(Script predicted) const;

    static constexpr std::size_t index(Script s) { return s == Script::Urdu ? 0 : 1; }
};

ConfusionMatrix confusion_matrix(std::span<const std::pair<Script, Script>> pairs);

/// Precision is the diagonal over the predicted column, recall the diagonal over
/// the true row. Throws UndefinedScoreError naming a class with no true instances.
std::map<Script, PRFScore> class_prf(const ConfusionMatrix& m);

struct LocalizationMatch
{
    FrameKey frame;
    std::size_t gt_index{};
    std::size_t detection_index{};
    double iou{};
    /// Detected area over ground-truth area; > 1 is oversize, < 1 undersize.
    double size_ratio{};
};

struct LocalizationReport
{
    double iou_threshold = 0.5;
    std::vector<LocalizationMatch> matches;
    /// Matched IoUs in ten equal bins over [0, 1]; IoU 1.0 lands in the last bin.
    std::array<std::size_t, 10> iou_histogram{};
    std::size_t misses = 0;         // gt without a match
    std::size_t false_alarms = 0;   // detections without a match
    std::size_t oversize = 0;
    std::size_t undersize = 0;
    double mean_size_ratio = 0.0;
};

/// Greedy one-to-one pairing of one frame's boxes: candidate pairs with
/// IoU >= threshold are taken in descending IoU order (ties by gt, then
/// detection index) whenever both sides are still free.
std::vector<std::pair<std::size_t, std::size_t>> greedy_match(std::span<const Rect> gt,
                                                              std::span<const Rect> detections, double iou_threshold);

LocalizationReport localization_diagnostics(const DetectionSet& dets, const Dataset& ds, double iou_match = 0.5);

}   // namespace utiv
