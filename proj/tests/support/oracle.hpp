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

// Reference implementations used only by tests. They are deliberately naive:
// pixel rasterization for areas, exhaustive enumeration for assignments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "utiv/anchors.hpp"
#include "utiv/geometry.hpp"

namespace utiv::test {

/// One bit per pixel over [0, width) x [0, height), 64 pixels per word.
class Bitmask
{
public:
    Bitmask(int width, int height)
        : width_(width), height_(height), words_per_row_((width + 63) / 64),
          bits_(static_cast<std::size_t>(words_per_row_) * height, 0)
    {
    }

    void paint(const Rect& r)
    {
        const int x0 = std::max(r.x, 0);
        const int x1 = std::min(r.x + r.width, width_);
        const int y0 = std::max(r.y, 0);
        const int y1 = std::min(r.y + r.height, height_);
        if (x1 <= x0) {
            return;
        }
        for (int y = y0; y < y1; ++y) {
            auto* row = &bits_[static_cast<std::size_t>(y) * words_per_row_];
            for (int x = x0; x < x1;) {
                const int bit = x % 64;
                const int n = std::min(64 - bit, x1 - x);
                const std::uint64_t run = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1) << bit;
                row[x / 64] |= run;
                x += n;
            }
        }
    }

    void paint(std::span<const Rect> rects)
    {
        for (const auto& r : rects) {
            paint(r);
        }
    }

    Bitmask& operator&=(const Bitmask& other)
    {
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            bits_[i] &= other.bits_[i];
        }
        return *this;
    }

    std::int64_t count() const
    {
        std::int64_t n = 0;
        for (auto w : bits_) {
            n += __builtin_popcountll(w);
        }
        return n;
    }

private:
    int width_;
    int height_;
    int words_per_row_;
    std::vector<std::uint64_t> bits_;
};

/// Canvas covering every rect; rects must have non-negative coordinates.
inline std::pair<int, int> extent(std::span<const Rect> a, std::span<const Rect> b = {})
{
    int w = 1;
    int h = 1;
    for (auto s : {a, b}) {
        for (const auto& r : s) {
            w = std::max(w, r.x + r.width);
            h = std::max(h, r.y + r.height);
        }
    }
    return {w, h};
}

inline std::int64_t raster_union_area(std::span<const Rect> rects)
{
    const auto [w, h] = extent(rects);
    Bitmask m(w, h);
    m.paint(rects);
    return m.count();
}

inline std::int64_t raster_intersection_area(std::span<const Rect> a, std::span<const Rect> b)
{
    const auto [w, h] = extent(a, b);
    Bitmask ma(w, h);
    Bitmask mb(w, h);
    ma.paint(a);
    mb.paint(b);
    ma &= mb;
    return ma.count();
}

/// IoU with the intersection counted pixel by pixel.
inline double raster_iou(const Rect& a, const Rect& b)
{
    const Rect one[] = {a};
    const Rect two[] = {b};
    const auto inter = raster_intersection_area(one, two);
    const auto uni = a.area() + b.area() - inter;
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

/// Greedy NMS fixpoint check: survivors pairwise at most `thr`, and every
/// dropped box overlaps an earlier (higher-or-equal score, earlier index)
/// survivor above `thr`.
inline bool is_greedy_nms_fixpoint(std::span<const ScoredBox> input, std::span<const ScoredBox> survivors,
                                   double thr)
{
    std::vector<std::size_t> order(input.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return input[a].score > input[b].score; });

    std::vector<bool> kept(input.size(), false);
    std::size_t next_survivor = 0;
    for (auto i : order) {
        if (next_survivor < survivors.size() && survivors[next_survivor].box == input[i].box
            && survivors[next_survivor].score == input[i].score) {
            kept[i] = true;
            ++next_survivor;
        }
    }
    if (next_survivor != survivors.size()) {
        return false;
    }

    for (std::size_t a = 0; a < order.size(); ++a) {
        const auto i = order[a];
        bool covered = false;
        for (std::size_t b = 0; b < a; ++b) {
            const auto j = order[b];
            if (kept[j] && raster_iou(input[i].box, input[j].box) > thr) {
                covered = true;
                break;
            }
        }
        // Kept boxes must be uncovered; dropped boxes must be covered.
        if (kept[i] == covered) {
            return false;
        }
    }
    return true;
}

struct OracleAssignment
{
    AnchorLabel label = AnchorLabel::Negative;
    std::optional<std::size_t> matched_gt;
    double iou = 0.0;
};

/// Labels from a full IoU table: best gt per anchor (lowest gt index on ties),
/// thresholds, then for every gt with any overlap its best anchor (lowest
/// anchor index on ties) is forced positive.
inline std::vector<OracleAssignment> brute_force_assign(std::span<const Rect> anchors, std::span<const Rect> gt,
                                                       double pos, double neg)
{
    std::vector<std::vector<double>> table(anchors.size(), std::vector<double>(gt.size(), 0.0));
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        for (std::size_t g = 0; g < gt.size(); ++g) {
            table[a][g] = raster_iou(anchors[a], gt[g]);
        }
    }

    std::vector<OracleAssignment> out(anchors.size());
    std::vector<std::optional<std::size_t>> best_gt(anchors.size());
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        double best = 0.0;
        for (std::size_t g = 0; g < gt.size(); ++g) {
            if (table[a][g] > best) {
                best = table[a][g];
                best_gt[a] = g;
            }
        }
        out[a].iou = best;
        if (best_gt[a] && best >= pos) {
            out[a].label = AnchorLabel::Positive;
        } else if (best < neg) {
            out[a].label = AnchorLabel::Negative;
        } else {
            out[a].label = AnchorLabel::Ignore;
        }
    }
    for (std::size_t g = 0; g < gt.size(); ++g) {
        double best = 0.0;
        std::optional<std::size_t> arg;
        for (std::size_t a = 0; a < anchors.size(); ++a) {
            if (table[a][g] > best) {
                best = table[a][g];
                arg = a;
            }
        }
        if (arg) {
            out[*arg].label = AnchorLabel::Positive;
        }
    }
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        if (out[a].label != AnchorLabel::Negative) {
            out[a].matched_gt = best_gt[a];
        }
    }
    return out;
}

/// Size of a one-to-one gt/detection assignment maximizing total IoU over
/// pairs with IoU >= thr, by exhaustive search. Keep both lists small.
inline std::size_t exhaustive_match_count(std::span<const Rect> gt, std::span<const Rect> dets, double thr)
{
    std::vector<std::vector<double>> w(gt.size(), std::vector<double>(dets.size(), 0.0));
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t d = 0; d < dets.size(); ++d) {
            const double v = raster_iou(gt[g], dets[d]);
            w[g][d] = v > 0.0 && v >= thr ? v : 0.0;
        }
    }

    double best_total = -1.0;
    std::size_t best_count = 0;
    std::vector<bool> used(dets.size(), false);
    auto search = [&](auto&& self, std::size_t g, double total, std::size_t count) -> void {
        if (g == gt.size()) {
            if (total > best_total + 1e-12 || (std::abs(total - best_total) <= 1e-12 && count > best_count)) {
                best_total = total;
                best_count = count;
            }
            return;
        }
        self(self, g + 1, total, count);
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (!used[d] && w[g][d] > 0.0) {
                used[d] = true;
                self(self, g + 1, total + w[g][d], count + 1);
                used[d] = false;
            }
        }
    };
    search(search, 0, 0.0, 0);
    return best_count;
}

}   // namespace utiv::test
