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
#include <string>
#include <vector>

#include "utiv/dataset.hpp"
#include "utiv/geometry.hpp"
#include "utiv/rng.hpp"

namespace utiv::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir
{
public:
    TempDir();
    ~TempDir();

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

struct SyntheticSpec
{
    std::vector<std::string> channels{"alpha", "beta"};
    int videos_per_channel = 2;
    int frames_per_video = 3;
    int width = 900;
    int height = 600;
    int min_lines = 1;
    int max_lines = 6;
    int min_box_height = 10;
    int max_box_height = 60;
    double english_fraction = 0.4;
    bool disjoint = true;   // no two lines of a frame overlap
    bool transcriptions = true;
};

/// In-memory dataset; video ids are `<channel>_v<n>`, frames sorted.
Dataset synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed);

/// Writes images and XML in the on-disk layout and sets ds.root_path/images.
void write_dataset_tree(Dataset& ds, const std::filesystem::path& root);

/// Frame-free dataset carrying the published per-channel counts.
struct ChannelCounts
{
    std::string channel;
    int videos;
    int frames;
    int urdu_lines;
    int english_lines;
};
const std::vector<ChannelCounts>& published_corpus_counts();
Dataset manifest_dataset(const std::vector<ChannelCounts>& counts);

/// `count` random rects with non-negative coordinates inside [0, extent)^2.
std::vector<Rect> random_rects(Rng& rng, std::size_t count, int extent, int max_side);

/// Disjoint random rects inside a width x height frame (rejection sampling).
std::vector<Rect> disjoint_rects(Rng& rng, std::size_t count, int width, int height, int min_side, int max_side);

/// Writes `frames` PNG frames cycling through `tickers` distinct scenes in
/// equal runs, each frame with small pixel noise. Names sort in frame order.
void write_ticker_video(const std::filesystem::path& dir, int frames, int tickers, std::uint64_t seed);

}   // namespace utiv::test
