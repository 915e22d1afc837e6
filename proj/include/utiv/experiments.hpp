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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "utiv/dataset.hpp"
#include "utiv/detections.hpp"
#include "utiv/evaluation.hpp"

namespace utiv {

struct Resolution
{
    int width{};
    int height{};

    friend auto operator<=>(const Resolution&, const Resolution&) = default;
};

std::string to_string(const Resolution& r);
/// Parses `WIDTHxHEIGHT`. Throws ConfigError.
Resolution parse_resolution(std::string_view text);

/// Frame sizes from 256x144 up to 1920x1080.
inline const std::vector<Resolution> kStandardResolutions{
    {256, 144}, {426, 240}, {640, 360}, {854, 480}, {900, 600}, {1280, 720}, {1920, 1080},
};

struct SweepPoint
{
    std::string parameter;   // e.g. "640x360" or a line count
    double value{};          // sort key: pixel count or line count
    PRFScore score;
};

/// Maps a box to a frame resized per axis from `from` to `to`. Left/top and
/// right/bottom edges are scaled and rounded half-up independently, so boxes
/// that touch stay touching. Returns an empty rect when the box collapses.
Rect rescale_box(const Rect& box, const Resolution& from, const Resolution& to);
RectF rescale_box(const RectF& box, const Resolution& from, const Resolution& to);

/// Rescales the dataset (and optionally the detections) to `target`.
Dataset rescale_dataset(const Dataset& ds, const Resolution& target);
DetectionSet rescale_detections(const DetectionSet& dets, const Dataset& base, const Resolution& target);

struct SweepOptions
{
    /// Evaluate in continuous coordinates instead of rounding to pixels.
    bool continuous = false;
};

/// Rescales gt and detections together to each resolution (non-uniformly when
/// the aspect ratio changes) and scores the result. The base resolution is
/// each frame's own size. Points come back ordered by pixel count.
std::vector<SweepPoint> resolution_sweep(const Dataset& ds, const DetectionSet& dets,
                                         std::span<const Resolution> resolutions, const SweepOptions& options = {});

/// Detections produced externally at a given resolution.
struct ResolutionRun
{
    Resolution resolution;
    DetectionSet detections;
};

/// Variant for detections already in target coordinates: only gt is rescaled.
std::vector<SweepPoint> resolution_sweep(const Dataset& ds, std::span<const ResolutionRun> runs);

/// Continuous-coordinate score with every box multiplied by `factor` on both axes.
PRFScore evaluate_scaled_continuous(const DetectionSet& dets, const Dataset& ds, double factor);

class BudgetError : public Error
{
public:
    BudgetError(const std::string& message, std::int64_t available);

    std::int64_t available() const noexcept { return available_; }

private:
    std::int64_t available_;
};

/// Nested frame subsets meeting ascending text-line budgets. Frames are visited
/// in one seeded random order; subset k is the shortest prefix holding at least
/// line_counts[k] lines. Each subset is returned in dataset order.
std::vector<std::vector<FrameKey>> training_subsets(const Dataset& ds, std::span<const std::int64_t> line_counts,
                                                    std::uint64_t seed);

}   // namespace utiv
