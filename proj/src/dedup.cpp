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


#include "utiv/dedup.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "utiv/error.hpp"
#include "utiv/log.hpp"

namespace fs = std::filesystem;

namespace utiv {

namespace {

bool is_image_file(const fs::path& p)
{
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

}   // namespace

std::uint64_t difference_hash(const cv::Mat& image)
{
    if (image.empty()) {
        throw std::invalid_argument("cannot hash an empty image");
    }
    cv::Mat grey;
    if (image.channels() == 3) {
        cv::cvtColor(image, grey, cv::COLOR_BGR2GRAY);
    } else if (image.channels() == 4) {
        cv::cvtColor(image, grey, cv::COLOR_BGRA2GRAY);
    } else {
        grey = image;
    }
    cv::Mat small;
    cv::resize(grey, small, cv::Size(9, 8), 0, 0, cv::INTER_AREA);
    small.convertTo(small, CV_8U);

    std::uint64_t hash = 0;
    for (int row = 0; row < 8; ++row) {
        const auto* p = small.ptr<std::uint8_t>(row);
        for (int col = 0; col < 8; ++col) {
            hash = (hash << 1) | (p[col] > p[col + 1] ? 1u : 0u);
        }
    }
    return hash;
}

int hamming_distance(std::uint64_t a, std::uint64_t b)
{
    return std::popcount(a ^ b);
}

std::vector<std::size_t> select_distinct(std::span<const std::uint64_t> hashes, int hamming_threshold)
{
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < hashes.size(); ++i) {
        if (kept.empty() || hamming_distance(hashes[kept.back()], hashes[i]) > hamming_threshold) {
            kept.push_back(i);
        }
    }
    return kept;
}

DedupResult dedup_frames(const fs::path& frame_dir, int hamming_threshold)
{
    std::error_code ec;
    if (!fs::is_directory(frame_dir, ec)) {
        throw DataError(fmt::format("{} is not a directory", frame_dir.string()));
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(frame_dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    DedupResult result;
    std::vector<fs::path> decoded;
    std::vector<std::uint64_t> hashes;
    for (const auto& file : files) {
        const cv::Mat image = cv::imread(file.string(), cv::IMREAD_GRAYSCALE);
        if (image.empty()) {
            result.warnings.push_back(fmt::format("{}: not a decodable image, skipped", file.string()));
            log::warn("{}", result.warnings.back());
            continue;
        }
        decoded.push_back(file);
        hashes.push_back(difference_hash(image));
    }

    for (auto i : select_distinct(hashes, hamming_threshold)) {
        result.kept.push_back(decoded[i]);
    }
    return result;
}

}   // namespace utiv
