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


#include "utiv/service/annotation_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>

#include "utiv/annotation_xml.hpp"
#include "utiv/dataset.hpp"
#include "utiv/log.hpp"

namespace fs = std::filesystem;

namespace utiv::service {

ConflictError::ConflictError(const std::string& message, std::uint64_t current_revision)
    : Error(message), current_revision_(current_revision)
{
}

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "; " : "") + items[i];
    }
    return out;
}

bool is_image(const fs::path& p)
{
    const auto ext = p.extension().string();
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::string content_type_for(const fs::path& p)
{
    return p.extension() == ".png" ? "image/png" : "image/jpeg";
}

std::vector<fs::path> sorted_dirs(const fs::path& dir)
{
    std::vector<fs::path> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        return out;
    }
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory()) {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}   // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : Error("annotation rejected: " + join(problems)), problems_(std::move(problems))
{
}

std::vector<std::string> check_annotation(const FrameAnnotation& annotation, const FrameAnnotation& expected)
{
    std::vector<std::string> problems;
    if (annotation.channel != expected.channel) {
        problems.push_back(fmt::format("channel '{}' should be '{}'", annotation.channel, expected.channel));
    }
    if (annotation.video_id != expected.video_id || annotation.frame_number != expected.frame_number) {
        problems.push_back(fmt::format("frame {} does not match {}", to_string(annotation.key()),
                                       to_string(expected.key())));
    }
    if (annotation.width != expected.width || annotation.height != expected.height) {
        problems.push_back(fmt::format("frame size {}x{} should be {}x{}", annotation.width, annotation.height,
                                       expected.width, expected.height));
    }
    for (std::size_t i = 0; i < annotation.lines.size(); ++i) {
        const auto& b = annotation.lines[i].box;
        if (b.empty()) {
            problems.push_back(fmt::format("line {}: box ({}, {}, {}, {}) has no area", i, b.x, b.y, b.width,
                                           b.height));
        } else if (!expected.bounds().contains(b)) {
            problems.push_back(fmt::format("line {}: box ({}, {}, {}, {}) leaves the {}x{} frame", i, b.x, b.y,
                                           b.width, b.height, expected.width, expected.height));
        }
    }
    return problems;
}

AnnotationStore::AnnotationStore(fs::path root) : root_(std::move(root))
{
    std::error_code ec;
    if (!fs::is_directory(root_, ec)) {
        throw DataError(fmt::format("dataset root {} is not a directory", root_.string()));
    }

    std::vector<std::pair<FrameAnnotation, std::unique_ptr<Entry>>> found;
    for (const auto& channel_dir : sorted_dirs(root_)) {
        const auto channel = channel_dir.filename().string();
        for (const auto& video_dir : sorted_dirs(channel_dir)) {
            const auto video = video_dir.filename().string();
            const auto frames_dir = video_dir / "frames";
            if (!fs::is_directory(frames_dir, ec)) {
                continue;
            }
            for (const auto& file : fs::directory_iterator(frames_dir)) {
                if (!file.is_regular_file() || !is_image(file.path())) {
                    continue;
                }
                const auto stem = file.path().stem().string();
                auto key = parse_frame_key(stem);
                if (!key || key->video_id != video) {
                    log::warn("{}: name is not <video>_<frame>, skipped", file.path().string());
                    continue;
                }

                auto entry = std::make_unique<Entry>();
                entry->key = stem;
                entry->image = file.path();
                entry->xml = video_dir / "gt" / (stem + ".xml");

                auto state = std::make_shared<State>();
                if (fs::exists(entry->xml, ec)) {
                    state->annotation = read_frame_annotation_file(entry->xml);
                    state->annotated = true;
                    if (state->annotation.channel != channel || state->annotation.key() != *key) {
                        throw DataError(fmt::format("{} does not describe frame {} of channel {}",
                                                    entry->xml.string(), stem, channel));
                    }
                } else {
                    const cv::Mat image = cv::imread(entry->image.string(), cv::IMREAD_UNCHANGED);
                    if (image.empty()) {
                        log::warn("{}: not a decodable image, skipped", entry->image.string());
                        continue;
                    }
                    state->annotation = {channel, key->video_id, key->frame_number, image.cols, image.rows, {}};
                }
                FrameAnnotation sort_key = state->annotation;
                entry->state = std::move(state);
                found.emplace_back(std::move(sort_key), std::move(entry));
            }
        }
    }

    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.channel, a.first.video_id, a.first.frame_number)
               < std::tie(b.first.channel, b.first.video_id, b.first.frame_number);
    });
    for (auto& [annotation, entry] : found) {
        if (!by_key_.emplace(entry->key, entry.get()).second) {
            throw DataError(fmt::format("frame {} appears in more than one place", entry->key));
        }
        order_.push_back(std::move(entry));
    }
}

AnnotationStore::~AnnotationStore() = default;

std::shared_ptr<const AnnotationStore::State> AnnotationStore::snapshot(const Entry& entry) const
{
    std::lock_guard lock(entry.state_mutex);
    return entry.state;
}

const AnnotationStore::Entry& AnnotationStore::find(const std::string& key) const
{
    auto it = by_key_.find(key);
    if (it == by_key_.end()) {
        throw NotFoundError(fmt::format("no frame '{}'", key));
    }
    return *it->second;
}

AnnotationStore::Entry& AnnotationStore::find(const std::string& key)
{
    return const_cast<Entry&>(std::as_const(*this).find(key));
}

bool AnnotationStore::matches(const Entry& entry, const FrameFilter& filter) const
{
    const auto state = snapshot(entry);
    return (!filter.channel || state->annotation.channel == *filter.channel)
           && (!filter.video || state->annotation.video_id == *filter.video);
}

std::vector<FrameSummary> AnnotationStore::list_frames(const FrameFilter& filter, const Page& page) const
{
    std::vector<FrameSummary> out;
    if (page.size == 0) {
        return out;
    }
    const std::size_t first = page.index * page.size;
    std::size_t seen = 0;
    for (const auto& entry : order_) {
        if (!matches(*entry, filter)) {
            continue;
        }
        if (seen++ < first) {
            continue;
        }
        const auto state = snapshot(*entry);
        const auto& a = state->annotation;
        out.push_back({entry->key, a.channel, a.video_id, a.frame_number, a.width, a.height, a.lines.size(),
                       state->annotated, state->revision});
        if (out.size() == page.size) {
            break;
        }
    }
    return out;
}

std::size_t AnnotationStore::count_frames(const FrameFilter& filter) const
{
    return static_cast<std::size_t>(
        std::count_if(order_.begin(), order_.end(), [&](const auto& e) { return matches(*e, filter); }));
}

FrameView AnnotationStore::get_frame(const std::string& key) const
{
    const auto& entry = find(key);
    const auto state = snapshot(entry);

    std::ifstream in(entry.image, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot read image {}", entry.image.string()));
    }
    std::ostringstream bytes;
    bytes << in.rdbuf();
    return {bytes.str(), content_type_for(entry.image), state->annotation, state->revision, state->annotated};
}

std::uint64_t AnnotationStore::put_annotation(const std::string& key, const FrameAnnotation& annotation,
                                              std::uint64_t expected_revision)
{
    auto& entry = find(key);
    std::lock_guard write_lock(entry.write_mutex);

    const auto current = snapshot(entry);
    if (auto problems = check_annotation(annotation, current->annotation); !problems.empty()) {
        throw ValidationError(std::move(problems));
    }
    if (current->revision != expected_revision) {
        throw ConflictError(fmt::format("frame {} is at revision {}, not {}", key, current->revision,
                                        expected_revision),
                            current->revision);
    }

    fs::create_directories(entry.xml.parent_path());
    write_file_atomically(entry.xml, write_frame_annotation(annotation));

    auto next = std::make_shared<State>(State{annotation, current->revision + 1, true});
    {
        std::lock_guard lock(entry.state_mutex);
        entry.state = next;
    }
    {
        std::lock_guard lock(dirty_mutex_);
        dirty_.insert(key);
    }
    return next->revision;
}

Progress AnnotationStore::progress() const
{
    std::map<std::string, ChannelProgress> channels;
    for (const auto& entry : order_) {
        const auto state = snapshot(*entry);
        auto& c = channels[state->annotation.channel];
        c.channel = state->annotation.channel;
        if (!state->annotated) {
            ++c.unannotated_frames;
            continue;
        }
        ++c.annotated_frames;
        for (const auto& line : state->annotation.lines) {
            ++(line.script == Script::Urdu ? c.urdu_lines : c.english_lines);
        }
    }

    Progress out;
    for (auto& [name, c] : channels) {
        out.total.annotated_frames += c.annotated_frames;
        out.total.unannotated_frames += c.unannotated_frames;
        out.total.urdu_lines += c.urdu_lines;
        out.total.english_lines += c.english_lines;
        out.channels.push_back(std::move(c));
    }
    return out;
}

std::set<std::string> AnnotationStore::dirty_frames() const
{
    std::lock_guard lock(dirty_mutex_);
    return dirty_;
}

}   // namespace utiv::service
