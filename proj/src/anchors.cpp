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


#include "utiv/anchors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "text_util.hpp"
#include "utiv/error.hpp"

namespace utiv {

namespace {

int round_half_up(double v)
{
    return static_cast<int>(std::floor(v + 0.5));
}

std::vector<double> parse_list(std::string_view key, std::string_view value, int line)
{
    std::vector<double> out;
    for (auto item : detail::split(value, ',')) {
        auto parsed = detail::parse_double(detail::trim(item));
        if (!parsed) {
            throw ConfigError(fmt::format("anchor config line {}: '{}' has a non-numeric entry '{}'", line, key,
                                          detail::trim(item)));
        }
        out.push_back(*parsed);
    }
    return out;
}

std::string format_list(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += fmt::format("{}", values[i]);
    }
    return out;
}

}   // namespace

std::string_view to_string(AnchorConvention convention)
{
    switch (convention) {
    case AnchorConvention::AreaPreserving:
        return "area-preserving";
    case AnchorConvention::WidthScaled:
        return "width-scaled";
    }
    return "?";
}

void validate(const AnchorConfig& config)
{
    if (!(config.base_size > 0.0)) {
        throw ConfigError("anchor base_size must be positive");
    }
    if (config.scales.empty() || config.aspect_ratios.empty()) {
        throw ConfigError("anchor scales and aspect_ratios must be non-empty");
    }
    for (double s : config.scales) {
        if (!(s > 0.0)) {
            throw ConfigError(fmt::format("anchor scale {} is not positive", s));
        }
    }
    for (double r : config.aspect_ratios) {
        if (!(r > 0.0)) {
            throw ConfigError(fmt::format("anchor aspect ratio {} is not positive", r));
        }
    }
    if (config.stride <= 0) {
        throw ConfigError("anchor stride must be positive");
    }
}

AnchorConfig parse_anchor_config(std::string_view text)
{
    AnchorConfig config;
    int line_no = 0;
    for (auto raw : detail::split(text, '\n')) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("anchor config line {}: expected key = value", line_no));
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));

        if (key == "base_size") {
            auto v = detail::parse_double(value);
            if (!v) {
                throw ConfigError(fmt::format("anchor config line {}: bad base_size '{}'", line_no, value));
            }
            config.base_size = *v;
        } else if (key == "scales") {
            config.scales = parse_list(key, value, line_no);
        } else if (key == "aspect_ratios") {
            config.aspect_ratios = parse_list(key, value, line_no);
        } else if (key == "convention") {
            if (value == "area-preserving") {
                config.convention = AnchorConvention::AreaPreserving;
            } else if (value == "width-scaled") {
                config.convention = AnchorConvention::WidthScaled;
            } else {
                throw ConfigError(fmt::format("anchor config line {}: unknown convention '{}'", line_no, value));
            }
        } else if (key == "stride") {
            auto v = detail::parse_int<int>(value);
            if (!v) {
                throw ConfigError(fmt::format("anchor config line {}: bad stride '{}'", line_no, value));
            }
            config.stride = *v;
        } else if (key == "clip_to_image") {
            if (value == "true" || value == "1") {
                config.clip_to_image = true;
            } else if (value == "false" || value == "0") {
                config.clip_to_image = false;
            } else {
                throw ConfigError(fmt::format("anchor config line {}: bad boolean '{}'", line_no, value));
            }
        } else {
            throw ConfigError(fmt::format("anchor config line {}: unknown key '{}'", line_no, key));
        }
    }
    validate(config);
    return config;
}

AnchorConfig load_anchor_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(fmt::format("cannot read anchor config {}", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_anchor_config(buffer.str());
}

std::string format_anchor_config(const AnchorConfig& config)
{
    return fmt::format("base_size = {}\nscales = {}\naspect_ratios = {}\nconvention = {}\nstride = {}\n"
                       "clip_to_image = {}\n",
                       config.base_size, format_list(config.scales), format_list(config.aspect_ratios),
                       to_string(config.convention), config.stride, config.clip_to_image);
}

std::vector<AnchorShape> generate_anchor_shapes(const AnchorConfig& config)
{
    validate(config);

    std::vector<AnchorShape> shapes;
    shapes.reserve(config.scales.size() * config.aspect_ratios.size());
    for (double scale : config.scales) {
        const double side = config.base_size * scale;
        for (double ratio : config.aspect_ratios) {
            double w = side;
            double h = side * ratio;
            if (config.convention == AnchorConvention::AreaPreserving) {
                w = side / std::sqrt(ratio);
                h = side * std::sqrt(ratio);
            }
            shapes.push_back({std::max(1, round_half_up(w)), std::max(1, round_half_up(h)), scale, ratio});
        }
    }
    return shapes;
}

std::vector<Rect> tile_anchors(std::span<const AnchorShape> shapes, int image_width, int image_height,
                               const AnchorConfig& config)
{
    validate(config);
    if (image_width < config.stride || image_height < config.stride) {
        throw ConfigError(fmt::format("image {}x{} is smaller than the anchor stride {}", image_width, image_height,
                                      config.stride));
    }

    const int stride = config.stride;
    const int cols = (image_width + stride - 1) / stride;
    const int rows = (image_height + stride - 1) / stride;
    const Rect frame{0, 0, image_width, image_height};

    std::vector<Rect> anchors;
    anchors.reserve(static_cast<std::size_t>(cols) * rows * shapes.size());
    for (int row = 0; row < rows; ++row) {
        const int cy = row * stride + stride / 2;
        for (int col = 0; col < cols; ++col) {
            const int cx = col * stride + stride / 2;
            for (const auto& shape : shapes) {
                Rect r{cx - shape.width / 2, cy - shape.height / 2, shape.width, shape.height};
                if (config.clip_to_image) {
                    r = intersection(r, frame);
                    if (r.empty()) {
                        continue;
                    }
                }
                anchors.push_back(r);
            }
        }
    }
    return anchors;
}

std::vector<AnchorAssignment> assign_anchors(std::span<const Rect> anchors, std::span<const Rect> gt,
                                             double positive_iou, double negative_iou)
{
    if (!(0.0 <= negative_iou && negative_iou <= positive_iou && positive_iou <= 1.0)) {
        throw ConfigError("anchor assignment thresholds must satisfy 0 <= negative <= positive <= 1");
    }

    std::vector<AnchorAssignment> out(anchors.size());
    std::vector<double> best_for_gt(gt.size(), 0.0);
    std::vector<std::optional<std::size_t>> best_anchor_for_gt(gt.size());
    std::vector<std::optional<std::size_t>> best_gt_for_anchor(anchors.size());

    for (std::size_t a = 0; a < anchors.size(); ++a) {
        auto& assignment = out[a];
        assignment.anchor_index = a;

        std::optional<std::size_t> best_gt;
        double best = 0.0;
        for (std::size_t g = 0; g < gt.size(); ++g) {
            const double v = iou(anchors[a], gt[g]);
            if (v > best) {
                best = v;
                best_gt = g;
            }
            if (v > best_for_gt[g]) {
                best_for_gt[g] = v;
                best_anchor_for_gt[g] = a;
            }
        }

        assignment.iou = best;
        best_gt_for_anchor[a] = best_gt;
        if (best >= positive_iou && best_gt) {
            assignment.label = AnchorLabel::Positive;
        } else if (best < negative_iou) {
            assignment.label = AnchorLabel::Negative;
        } else {
            assignment.label = AnchorLabel::Ignore;
        }
        if (assignment.label != AnchorLabel::Negative) {
            assignment.matched_gt = best_gt;
        }
    }

    for (std::size_t g = 0; g < gt.size(); ++g) {
        if (!best_anchor_for_gt[g]) {
            continue;
        }
        auto& assignment = out[*best_anchor_for_gt[g]];
        assignment.label = AnchorLabel::Positive;
        assignment.matched_gt = best_gt_for_anchor[assignment.anchor_index];
    }
    return out;
}

RegressionTarget encode_box(const RectF& anchor, const RectF& gt)
{
    const double acx = anchor.x + anchor.width / 2.0;
    const double acy = anchor.y + anchor.height / 2.0;
    const double gcx = gt.x + gt.width / 2.0;
    const double gcy = gt.y + gt.height / 2.0;
    return {
        (gcx - acx) / anchor.width,
        (gcy - acy) / anchor.height,
        std::log(gt.width / anchor.width),
        std::log(gt.height / anchor.height),
    };
}

RegressionTarget encode_box(const Rect& anchor, const Rect& gt)
{
    return encode_box(to_continuous(anchor), to_continuous(gt));
}

RectF decode_box_continuous(const RectF& anchor, const RegressionTarget& t)
{
    const double cx = anchor.x + anchor.width / 2.0 + t.tx * anchor.width;
    const double cy = anchor.y + anchor.height / 2.0 + t.ty * anchor.height;
    const double w = anchor.width * std::exp(t.tw);
    const double h = anchor.height * std::exp(t.th);
    return {cx - w / 2.0, cy - h / 2.0, w, h};
}

Rect decode_box(const Rect& anchor, const RegressionTarget& t, double max_extent)
{
    if (!std::isfinite(t.tx) || !std::isfinite(t.ty) || !std::isfinite(t.tw) || !std::isfinite(t.th)) {
        throw DecodeError("regression target is not finite");
    }
    const auto box = decode_box_continuous(to_continuous(anchor), t);
    for (double v : {box.x, box.y, box.right(), box.bottom(), box.width, box.height}) {
        if (!std::isfinite(v) || std::fabs(v) > max_extent) {
            throw DecodeError(fmt::format("decoded box ({}, {}, {}, {}) exceeds the frame bound {}", box.x, box.y,
                                          box.width, box.height, max_extent));
        }
    }
    Rect out{round_half_up(box.x), round_half_up(box.y), round_half_up(box.width), round_half_up(box.height)};
    if (out.empty()) {
        throw DecodeError("decoded box rounds to zero size");
    }
    return out;
}

}   // namespace utiv
