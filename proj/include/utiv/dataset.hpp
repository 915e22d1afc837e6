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
#include <optional>
#include <string>
#include <vector>

#include "utiv/annotation.hpp"
#include "utiv/annotation_xml.hpp"

namespace utiv {

/// Annotated frames in deterministic (channel, video, frame number) order.
///
/// On disk: `root/<channel>/<video_id>/frames/<video_id>_<n>.png|jpg` with the
/// ground truth at `root/<channel>/<video_id>/gt/<video_id>_<n>.xml`.
struct Dataset
{
    std::filesystem::path root_path;
    std::vector<FrameAnnotation> frames;
    /// Image path per frame, parallel to `frames`. Empty for in-memory datasets.
    std::vector<std::filesystem::path> images;

    /// Index of the frame with `key`, if any.
    std::optional<std::size_t> find(const FrameKey& key) const;
};

/// Orders frames canonically; images stay parallel. Throws std::invalid_argument
/// when a non-empty image list differs in length from the frames.
void sort_frames(Dataset& ds);

/// Finds the image for a frame stem in `frames_dir`: `.png`, then `.jpg`, then `.jpeg`.
std::optional<std::filesystem::path> find_frame_image(const std::filesystem::path& frames_dir,
                                                      const std::string& stem);

/// Loads every annotation under `root`. Throws DataError for an annotation
/// without an image, an unreadable file, a file whose name or directory does not
/// match its content, or a duplicate frame key; parse errors propagate as-is.
Dataset load_dataset(const std::filesystem::path& root, const ParseOptions& options = {});

/// Where the frame's XML lives in the standard layout under `root`.
std::filesystem::path annotation_path(const std::filesystem::path& root, const FrameAnnotation& frame);

struct ChannelStats
{
    std::string channel;
    std::int64_t videos = 0;
    std::int64_t frames = 0;
    std::int64_t urdu_lines = 0;
    std::int64_t english_lines = 0;

    friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

struct DatasetStats
{
    std::vector<ChannelStats> channels;   // sorted by channel name
    ChannelStats total{"total"};
};

DatasetStats dataset_stats(const Dataset& ds);

/// `index,channel,videos,frames,urdu_lines,english_lines` plus a final total row.
std::string stats_to_csv(const DatasetStats& stats);
std::string stats_to_text(const DatasetStats& stats);

struct Split
{
    std::vector<FrameKey> train_frames;
    std::vector<FrameKey> test_frames;
    std::uint64_t seed = 0;
};

/// Frame-level random split. The train share is round(fraction * N) frames; with
/// stratification each channel contributes its share, apportioned by largest
/// remainder so the total matches the unstratified count. Both lists keep
/// dataset order.
Split split_dataset(const Dataset& ds, double train_fraction, std::uint64_t seed, bool stratify_by_channel);

enum class IssueSeverity { Warning, Error };

enum class IssueKind { OutOfBounds, ZeroArea, DuplicateKey, EmptyTranscription, DuplicateBox };

std::string_view to_string(IssueKind kind);
std::string_view to_string(IssueSeverity severity);

struct Issue
{
    IssueSeverity severity = IssueSeverity::Error;
    IssueKind kind = IssueKind::OutOfBounds;
    FrameKey frame;
    std::optional<std::size_t> line;
    std::string message;
};

std::vector<Issue> validate_dataset(const Dataset& ds);

}   // namespace utiv
