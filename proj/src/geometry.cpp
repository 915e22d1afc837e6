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


#include "utiv/geometry.hpp"

#include <numeric>
#include <stdexcept>

namespace utiv {

namespace {

// Segment tree over the compressed y-intervals [ys[i], ys[i+1]). Each node keeps
// how many open rects fully cover it and how much of its span is covered.
template <typename T>
class CoverTree
{
public:
    using A = typename AreaOf<T>::type;

    explicit CoverTree(std::vector<T> ys) : ys_(std::move(ys))
    {
        const auto leaves = ys_.size() > 1 ? ys_.size() - 1 : 1;
        count_.assign(4 * leaves, 0);
        covered_.assign(4 * leaves, A{});
    }

    void update(std::size_t lo, std::size_t hi, int delta)
    {
        if (lo < hi) {
            update(1, 0, ys_.size() - 1, lo, hi, delta);
        }
    }

    A covered() const { return covered_[1]; }

private:
    void update(std::size_t node, std::size_t l, std::size_t r, std::size_t lo, std::size_t hi, int delta)
    {
        if (hi <= l || r <= lo) {
            return;
        }
        if (lo <= l && r <= hi) {
            count_[node] += delta;
        } else {
            const auto mid = (l + r) / 2;
            update(2 * node, l, mid, lo, hi, delta);
            update(2 * node + 1, mid, r, lo, hi, delta);
        }

        if (count_[node] > 0) {
            covered_[node] = static_cast<A>(ys_[r]) - static_cast<A>(ys_[l]);
        } else if (r - l == 1) {
            covered_[node] = A{};
        } else {
            covered_[node] = covered_[2 * node] + covered_[2 * node + 1];
        }
    }

    std::vector<T> ys_;
    std::vector<int> count_;
    std::vector<A> covered_;
};

template <typename T>
struct Edge
{
    T x;
    int delta;
    std::size_t lo;
    std::size_t hi;
};

template <typename T>
typename AreaOf<T>::type sweep_union_area(std::span<const BasicRect<T>> rects)
{
    using A = typename AreaOf<T>::type;

    std::vector<T> ys;
    ys.reserve(rects.size() * 2);
    for (const auto& r : rects) {
        if (!r.empty()) {
            ys.push_back(r.y);
            ys.push_back(r.bottom());
        }
    }
    if (ys.empty()) {
        return A{};
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    auto index_of = [&ys](T v) {
        return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), v) - ys.begin());
    };

    std::vector<Edge<T>> edges;
    edges.reserve(ys.size() * 2);
    for (const auto& r : rects) {
        if (r.empty()) {
            continue;
        }
        const auto lo = index_of(r.y);
        const auto hi = index_of(r.bottom());
        edges.push_back({r.x, +1, lo, hi});
        edges.push_back({r.right(), -1, lo, hi});
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.x < b.x; });

    CoverTree<T> tree(std::move(ys));
    A total{};
    T previous = edges.front().x;
    for (const auto& e : edges) {
        total += tree.covered() * static_cast<A>(e.x - previous);
        tree.update(e.lo, e.hi, e.delta);
        previous = e.x;
    }
    return total;
}

template <typename T>
typename AreaOf<T>::type pairwise_intersection_area(std::span<const BasicRect<T>> a, std::span<const BasicRect<T>> b)
{
    std::vector<BasicRect<T>> pieces;
    pieces.reserve(a.size() * b.size());
    for (const auto& ra : a) {
        for (const auto& rb : b) {
            auto piece = intersection(ra, rb);
            if (!piece.empty()) {
                pieces.push_back(piece);
            }
        }
    }
    return sweep_union_area<T>(pieces);
}

}   // namespace

Area union_area(std::span<const Rect> rects)
{
    return sweep_union_area<int>(rects);
}

double union_area(std::span<const RectF> rects)
{
    return sweep_union_area<double>(rects);
}

Area region_intersection_area(std::span<const Rect> a, std::span<const Rect> b)
{
    return pairwise_intersection_area<int>(a, b);
}

double region_intersection_area(std::span<const RectF> a, std::span<const RectF> b)
{
    return pairwise_intersection_area<double>(a, b);
}

std::vector<ScoredBox> nms(std::span<const ScoredBox> boxes, double iou_threshold)
{
    if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
        throw std::invalid_argument("nms: iou threshold must lie in (0, 1)");
    }

    std::vector<std::size_t> order(boxes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return boxes[i].score > boxes[j].score; });

    std::vector<ScoredBox> kept;
    for (auto i : order) {
        const auto& candidate = boxes[i];
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const ScoredBox& k) {
            return iou(k.box, candidate.box) > iou_threshold;
        });
        if (!suppressed) {
            kept.push_back(candidate);
        }
    }
    return kept;
}

}   // namespace utiv
