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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cv {
class Mat;
}

namespace utiv {

/// 64-bit difference hash: the image is reduced to 9x8 grey pixels and each bit
/// records whether a pixel is brighter than its right neighbour.
std::uint64_t difference_hash(const cv::Mat& image);

int hamming_distance(std::uint64_t a, std::uint64_t b);

/// Indices of the frames kept by a sequential scan that drops any frame whose
/// hash is within `hamming_threshold` of the last kept frame.
std::vector<std::size_t> select_distinct(std::span<const std::uint64_t> hashes, int hamming_threshold);

struct DedupResult
{
    std::vector<std::filesystem::path> kept;
    std::vector<std::string> warnings;   // one per undecodable file
};

/// Scans the image files of `frame_dir` in file-name order.
DedupResult dedup_frames(const std::filesystem::path& frame_dir, int hamming_threshold);

}   // namespace utiv
