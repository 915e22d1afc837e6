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


#include "utiv/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "utiv/error.hpp"
#include "utiv/rng.hpp"

namespace fs = std::filesystem;

namespace utiv {

namespace {

std::vector<fs::path> sorted_children(const fs::path& dir, bool directories)
{
    std::vector<fs::path> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        return out;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (directories ? entry.is_directory() : entry.is_regular_file()) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool frame_less(const FrameAnnotation& a, const FrameAnnotation& b)
{
    return std::tie(a.channel, a.video_id, a.frame_number) < std::tie(b.channel, b.video_id, b.frame_number);
}

}   // namespace

std::optional<std::size_t> Dataset::find(const FrameKey& key) const
{
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].video_id == key.video_id && frames[i].frame_number == key.frame_number) {
            return i;
        }
    }
    return std::nullopt;
}

void sort_frames(Dataset& ds)
{
    if (!ds.images.empty() && ds.images.size() != ds.frames.size()) {
        throw std::invalid_argument(fmt::format("dataset has {} frames but {} image paths", ds.frames.size(),
                                                ds.images.size()));
    }
    std::vector<std::size_t> order(ds.frames.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return frame_less(ds.frames[i], ds.frames[j]); });

    std::vector<FrameAnnotation> frames;
    std::vector<fs::path> images;
    frames.reserve(order.size());
    for (auto i : order) {
        frames.push_back(std::move(ds.frames[i]));
        if (!ds.images.empty()) {
            images.push_back(std::move(ds.images[i]));
        }
    }
    ds.frames = std::move(frames);
    ds.images = std::move(images);
}

std::optional<fs::path> find_frame_image(const fs::path& frames_dir, const std::string& stem)
{
    for (const char* ext : {".png", ".jpg", ".jpeg"}) {
        auto candidate = frames_dir / (stem + ext);
        std::error_code ec;
        if (fs::is_regular_file(candidate, ec)) {
            return candidate;
        }
    }
    return std::nullopt;
}

fs::path annotation_path(const fs::path& root, const FrameAnnotation& frame)
{
    return root / frame.channel / frame.video_id / "gt" / (to_string(frame.key()) + ".xml");
}

Dataset load_dataset(const fs::path& root, const ParseOptions& options)
{
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw DataError(fmt::format("dataset root {} is not a directory", root.string()));
    }

    Dataset ds;
    ds.root_path = root;
    std::map<FrameKey, fs::path> seen;

    for (const auto& channel_dir : sorted_children(root, true)) {
        const auto channel = channel_dir.filename().string();
        for (const auto& video_dir : sorted_children(channel_dir, true)) {
            const auto video = video_dir.filename().string();
            for (const auto& xml : sorted_children(video_dir / "gt", false)) {
                if (xml.extension() != ".xml") {
                    continue;
                }
                auto frame = read_frame_annotation_file(xml, options);
                const auto stem = xml.stem().string();
                if (frame.channel != channel || frame.video_id != video || to_string(frame.key()) != stem) {
                    throw DataError(fmt::format("{} describes {}/{} frame {}, which does not match its location",
                                                xml.string(), frame.channel, frame.video_id, frame.frame_number));
                }
                auto image = find_frame_image(video_dir / "frames", stem);
                if (!image) {
                    throw DataError(fmt::format("orphan annotation {}: no image {}.png|jpg in {}", xml.string(), stem,
                                                (video_dir / "frames").string()));
                }
                auto [it, inserted] = seen.emplace(frame.key(), xml);
                if (!inserted) {
                    throw DataError(fmt::format("duplicate frame {} in {} and {}", stem, it->second.string(),
                                                xml.string()));
                }
                ds.frames.push_back(std::move(frame));
                ds.images.push_back(std::move(*image));
            }
        }
    }
    sort_frames(ds);
    return ds;
}

DatasetStats dataset_stats(const Dataset& ds)
{
    std::map<std::string, ChannelStats> channels;
    std::map<std::string, std::set<std::string>> videos;

    for (const auto& frame : ds.frames) {
        auto& c = channels[frame.channel];
        c.channel = frame.channel;
        videos[frame.channel].insert(frame.video_id);
        ++c.frames;
        for (const auto& line : frame.lines) {
            ++(line.script == Script::Urdu ? c.urdu_lines : c.english_lines);
        }
    }

    DatasetStats stats;
    for (auto& [name, c] : channels) {
        c.videos = static_cast<std::int64_t>(videos[name].size());
        stats.total.videos += c.videos;
        stats.total.frames += c.frames;
        stats.total.urdu_lines += c.urdu_lines;
        stats.total.english_lines += c.english_lines;
        stats.channels.push_back(c);
    }
    return stats;
}

std::string stats_to_csv(const DatasetStats& stats)
{
    std::string out = "index,channel,videos,frames,urdu_lines,english_lines\n";
    std::size_t index = 0;
    for (const auto& c : stats.channels) {
        out += fmt::format("{},{},{},{},{},{}\n", ++index, c.channel, c.videos, c.frames, c.urdu_lines,
                           c.english_lines);
    }
    const auto& t = stats.total;
    out += fmt::format(",total,{},{},{},{}\n", t.videos, t.frames, t.urdu_lines, t.english_lines);
    return out;
}

std::string stats_to_text(const DatasetStats& stats)
{
    std::size_t width = 7;
    for (const auto& c : stats.channels) {
        width = std::max(width, c.channel.size());
    }
    auto row = [&](std::string_view index, const ChannelStats& c) {
        return fmt::format("{:<3} {:<{}} {:>7} {:>8} {:>10} {:>13}\n", index, c.channel, width, c.videos, c.frames,
                           c.urdu_lines, c.english_lines);
    };
    std::string out = fmt::format("{:<3} {:<{}} {:>7} {:>8} {:>10} {:>13}\n", "#", "channel", width, "videos",
                                  "frames", "urdu_lines", "english_lines");
    std::size_t index = 0;
    for (const auto& c : stats.channels) {
        out += row(std::to_string(++index), c);
    }
    out += row("", stats.total);
    return out;
}

Split split_dataset(const Dataset& ds, double train_fraction, std::uint64_t seed, bool stratify_by_channel)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError(fmt::format("train fraction {} must lie in (0, 1)", train_fraction));
    }

    const auto n = ds.frames.size();
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));

    // Groups of frame indices; a single group when not stratifying.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[stratify_by_channel ? ds.frames[i].channel : std::string{}].push_back(i);
    }

    std::vector<std::size_t> quota;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (const auto& [name, members] : groups) {
        const double exact = train_fraction * static_cast<double>(members.size());
        const auto base = static_cast<std::size_t>(std::floor(exact));
        remainders.emplace_back(exact - static_cast<double>(base), quota.size());
        quota.push_back(base);
        assigned += base;
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n_train && i < remainders.size(); ++i, ++assigned) {
        ++quota[remainders[i].second];
    }

    Rng rng(seed);
    std::vector<bool> is_train(n, false);
    std::size_t g = 0;
    for (auto& [name, members] : groups) {
        rng.shuffle(std::span(members));
        for (std::size_t i = 0; i < quota[g] && i < members.size(); ++i) {
            is_train[members[i]] = true;
        }
        ++g;
    }

    Split split;
    split.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        (is_train[i] ? split.train_frames : split.test_frames).push_back(ds.frames[i].key());
    }
    return split;
}

std::string_view to_string(IssueKind kind)
{
    switch (kind) {
    case IssueKind::OutOfBounds:
        return "out-of-bounds";
    case IssueKind::ZeroArea:
        return "zero-area";
    case IssueKind::DuplicateKey:
        return "duplicate-key";
    case IssueKind::EmptyTranscription:
        return "empty-transcription";
    case IssueKind::DuplicateBox:
        return "duplicate-box";
    }
    return "?";
}

std::string_view to_string(IssueSeverity severity)
{
    return severity == IssueSeverity::Error ? "error" : "warning";
}

std::vector<Issue> validate_dataset(const Dataset& ds)
{
    std::vector<Issue> issues;
    std::set<FrameKey> keys;

    for (const auto& frame : ds.frames) {
        const auto key = frame.key();
        const auto name = to_string(key);
        if (!keys.insert(key).second) {
            issues.push_back({IssueSeverity::Error, IssueKind::DuplicateKey, key, std::nullopt,
                              fmt::format("{}: frame key appears more than once", name)});
        }

        for (std::size_t i = 0; i < frame.lines.size(); ++i) {
            const auto& line = frame.lines[i];
            const auto& b = line.box;
            if (b.empty()) {
                issues.push_back({IssueSeverity::Error, IssueKind::ZeroArea, key, i,
                                  fmt::format("{} line {}: box ({}, {}, {}, {}) has no area", name, i, b.x, b.y,
                                              b.width, b.height)});
            } else if (!frame.bounds().contains(b)) {
                issues.push_back({IssueSeverity::Error, IssueKind::OutOfBounds, key, i,
                                  fmt::format("{} line {}: box ({}, {}, {}, {}) leaves the {}x{} frame", name, i,
                                              b.x, b.y, b.width, b.height, frame.width, frame.height)});
            }
            if (line.transcription.empty()) {
                issues.push_back({IssueSeverity::Warning, IssueKind::EmptyTranscription, key, i,
                                  fmt::format("{} line {}: empty transcription", name, i)});
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (frame.lines[j].box == b) {
                    issues.push_back({IssueSeverity::Warning, IssueKind::DuplicateBox, key, i,
                                      fmt::format("{} line {}: same box as line {}", name, i, j)});
                    break;
                }
            }
        }
    }
    return issues;
}

}   // namespace utiv
