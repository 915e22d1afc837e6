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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "utiv/geometry.hpp"

namespace utiv {

enum class AnchorConvention {
    AreaPreserving,   // w*h = (base*scale)^2, h/w = aspect
    WidthScaled,      // w = base*scale, h = w*aspect
};

/// Anchor geometry. Aspect ratios are height/width, so text-line shapes are < 1.
struct AnchorConfig
{
    double base_size = 256.0;
    std::vector<double> scales{1.0, 2.0, 5.0};
    std::vector<double> aspect_ratios{0.125, 0.1875, 0.25, 0.375, 0.50};
    AnchorConvention convention = AnchorConvention::AreaPreserving;
    int stride = 16;
    bool clip_to_image = true;
};

/// Throws ConfigError on empty lists or non-positive values.
void validate(const AnchorConfig& config);

/// Reads `key = value` lines; `#` starts a comment. Lists are comma separated.
/// Keys: base_size, scales, aspect_ratios, convention, stride, clip_to_image.
AnchorConfig parse_anchor_config(std::string_view text);
AnchorConfig load_anchor_config(const std::filesystem::path& path);
std::string format_anchor_config(const AnchorConfig& config);

std::string_view to_string(AnchorConvention convention);

struct AnchorShape
{
    int width{};
    int height{};
    double scale{};
    double aspect_ratio{};

    friend bool operator==(const AnchorShape&, const AnchorShape&) = default;
};

/// One shape per (scale, aspect ratio) pair, scale-major. Sizes are rounded half-up.
std::vector<AnchorShape> generate_anchor_shapes(const AnchorConfig& config);

/// Places every shape at the centre of each stride cell, row-major then shape index.
/// With clip_to_image the rects are clipped to the frame and empty results dropped.
std::vector<Rect> tile_anchors(std::span<const AnchorShape> shapes, int image_width, int image_height,
                               const AnchorConfig& config);

enum class AnchorLabel { Positive, Negative, Ignore };

struct AnchorAssignment
{
    std::size_t anchor_index{};
    AnchorLabel label = AnchorLabel::Negative;
    std::optional<std::size_t> matched_gt;
    double iou{};
};

/// Labels anchors against ground truth boxes.
///
/// Each anchor takes its best gt (lowest gt index on ties). IoU >= positive_iou
/// is positive, IoU < negative_iou is negative, anything between is ignored.
/// Additionally, for every gt the highest-IoU anchor (lowest anchor index on
/// ties) is forced positive whenever that IoU is non-zero, so each gt that
/// overlaps any anchor owns at least one positive. matched_gt is set for
/// every non-negative anchor with a non-zero best IoU.
std::vector<AnchorAssignment> assign_anchors(std::span<const Rect> anchors, std::span<const Rect> gt,
                                             double positive_iou = 0.5, double negative_iou = 0.3);

struct RegressionTarget
{
    double tx{};
    double ty{};
    double tw{};
    double th{};
};

RegressionTarget encode_box(const RectF& anchor, const RectF& gt);
RegressionTarget encode_box(const Rect& anchor, const Rect& gt);

RectF decode_box_continuous(const RectF& anchor, const RegressionTarget& t);

/// Inverse of encode_box followed by half-up rounding of x, y, width and height.
/// Throws DecodeError on non-finite targets, on any coordinate whose magnitude
/// exceeds max_extent, or when the rounded box is empty.
Rect decode_box(const Rect& anchor, const RegressionTarget& t, double max_extent = 65536.0);

}   // namespace utiv
