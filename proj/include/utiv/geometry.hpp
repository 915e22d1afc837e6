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

#include <algorithm>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

namespace utiv {

template <typename T>
struct AreaOf
{
    using type = T;
};

template <>
struct AreaOf<int>
{
    using type = std::int64_t;
};

/// Axis-aligned box covering the half-open pixel range [x, x+width) x [y, y+height).
/// Origin is top-left, y grows downward.
template <typename T>
struct BasicRect
{
    using coord_type = T;
    using area_type = typename AreaOf<T>::type;

    T x{};
    T y{};
    T width{};
    T height{};

    constexpr T right() const noexcept { return x + width; }
    constexpr T bottom() const noexcept { return y + height; }
    constexpr bool empty() const noexcept { return width <= T{} || height <= T{}; }

    constexpr area_type area() const noexcept
    {
        return empty() ? area_type{} : static_cast<area_type>(width) * static_cast<area_type>(height);
    }

    constexpr bool contains(const BasicRect& other) const noexcept
    {
        return other.x >= x && other.y >= y && other.right() <= right() && other.bottom() <= bottom();
    }

    friend constexpr bool operator==(const BasicRect&, const BasicRect&) = default;
};

using Rect = BasicRect<int>;
using RectF = BasicRect<double>;
using Area = Rect::area_type;

/// A region is the set union of its rects; order and duplicates do not matter.
using RectRegion = std::vector<Rect>;
using RectRegionF = std::vector<RectF>;

template <typename T>
constexpr BasicRect<T> intersection(const BasicRect<T>& a, const BasicRect<T>& b) noexcept
{
    const T left = std::max(a.x, b.x);
    const T top = std::max(a.y, b.y);
    const T right = std::min(a.right(), b.right());
    const T bottom = std::min(a.bottom(), b.bottom());
    if (right <= left || bottom <= top) {
        return {left, top, T{}, T{}};
    }
    return {left, top, right - left, bottom - top};
}

template <typename T>
constexpr typename BasicRect<T>::area_type intersect_area(const BasicRect<T>& a, const BasicRect<T>& b) noexcept
{
    return intersection(a, b).area();
}

/// Intersection over union. Two empty boxes give 0.
template <typename T>
double iou(const BasicRect<T>& a, const BasicRect<T>& b) noexcept
{
    const auto inter = intersect_area(a, b);
    const auto uni = a.area() + b.area() - inter;
    if (uni <= 0) {
        return 0.0;
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

inline RectF to_continuous(const Rect& r) noexcept
{
    return {double(r.x), double(r.y), double(r.width), double(r.height)};
}

/// Exact area of the union of `rects` (coordinate-compressed sweep).
Area union_area(std::span<const Rect> rects);
double union_area(std::span<const RectF> rects);

/// |(U a) n (U b)|, as the union of all pairwise intersections.
Area region_intersection_area(std::span<const Rect> a, std::span<const Rect> b);
double region_intersection_area(std::span<const RectF> a, std::span<const RectF> b);

struct ScoredBox
{
    Rect box;
    double score{};

    friend bool operator==(const ScoredBox&, const ScoredBox&) = default;
};

/// Greedy non-maximum suppression. Survivors are sorted by descending score;
/// equal scores keep their input order.
std::vector<ScoredBox> nms(std::span<const ScoredBox> boxes, double iou_threshold);

}   // namespace utiv
