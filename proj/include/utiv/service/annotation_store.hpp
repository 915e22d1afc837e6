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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "utiv/annotation.hpp"
#include "utiv/error.hpp"

namespace utiv::service {

class NotFoundError : public Error
{
public:
    using Error::Error;
};

class ConflictError : public Error
{
public:
    ConflictError(const std::string& message, std::uint64_t current_revision);

    std::uint64_t current_revision() const noexcept { return current_revision_; }

private:
    std::uint64_t current_revision_;
};

class ValidationError : public Error
{
public:
    explicit ValidationError(std::vector<std::string> problems);

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct FrameSummary
{
    std::string key;
    std::string channel;
    std::string video_id;
    std::int64_t frame_number{};
    int width{};
    int height{};
    std::size_t line_count{};
    bool annotated = false;
    std::uint64_t revision{};
};

struct FrameFilter
{
    std::optional<std::string> channel;
    std::optional<std::string> video;
};

struct Page
{
    std::size_t index = 0;
    std::size_t size = 100;
};

struct FrameView
{
    std::string image;          // file bytes, unmodified
    std::string content_type;   // from the file extension
    FrameAnnotation annotation;
    std::uint64_t revision{};
    bool annotated = false;
};

struct ChannelProgress
{
    std::string channel;
    std::size_t annotated_frames = 0;
    std::size_t unannotated_frames = 0;
    std::size_t urdu_lines = 0;
    std::size_t english_lines = 0;
};

struct Progress
{
    std::vector<ChannelProgress> channels;   // by channel name
    ChannelProgress total{"total"};
};

/// Annotation session over a dataset tree.
///
/// Every frame image under `root/<channel>/<video>/frames/` is a frame; it is
/// annotated when `gt/<stem>.xml` exists. Revisions start at 0 when the store
/// is opened and grow by one per accepted write. Writes go straight to the XML
/// files (temp file + rename) and are guarded by optimistic concurrency: a put
/// names the revision it was based on and fails if that is no longer current.
class AnnotationStore
{
public:
    explicit AnnotationStore(std::filesystem::path root);
    ~AnnotationStore();

    AnnotationStore(const AnnotationStore&) = delete;
    AnnotationStore& operator=(const AnnotationStore&) = delete;

    const std::filesystem::path& root() const noexcept { return root_; }
    std::size_t size() const noexcept { return order_.size(); }

    /// Frames in (channel, video, frame number) order.
    std::vector<FrameSummary> list_frames(const FrameFilter& filter = {}, const Page& page = {}) const;
    std::size_t count_frames(const FrameFilter& filter = {}) const;

    /// Throws NotFoundError.
    FrameView get_frame(const std::string& key) const;

    /// Returns the new revision. Throws NotFoundError, ValidationError,
    /// ConflictError (stale revision) or DataError (I/O). Nothing on disk
    /// changes unless the call succeeds.
    std::uint64_t put_annotation(const std::string& key, const FrameAnnotation& annotation,
                                 std::uint64_t expected_revision);

    Progress progress() const;

    /// Keys written during this session.
    std::set<std::string> dirty_frames() const;

private:
    struct State
    {
        FrameAnnotation annotation;
        std::uint64_t revision = 0;
        bool annotated = false;
    };

    struct Entry
    {
        std::string key;
        std::filesystem::path image;
        std::filesystem::path xml;
        mutable std::mutex state_mutex;   // guards the `state` pointer only
        std::mutex write_mutex;           // serializes puts to this frame
        std::shared_ptr<const State> state;
    };

    std::shared_ptr<const State> snapshot(const Entry& entry) const;
    const Entry& find(const std::string& key) const;
    Entry& find(const std::string& key);
    bool matches(const Entry& entry, const FrameFilter& filter) const;

    std::filesystem::path root_;
    std::vector<std::unique_ptr<Entry>> order_;
    std::map<std::string, Entry*, std::less<>> by_key_;
    mutable std::mutex dirty_mutex_;
    std::set<std::string> dirty_;
};

/// Problems that keep `annotation` from being stored for a frame of the given
/// identity and size; empty when it is acceptable.
std::vector<std::string> check_annotation(const FrameAnnotation& annotation, const FrameAnnotation& expected);

}   // namespace utiv::service
