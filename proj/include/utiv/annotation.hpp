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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "utiv/geometry.hpp"

namespace utiv {

enum class Script { Urdu, English };

inline constexpr Script kScripts[] = {Script::Urdu, Script::English};

std::string_view to_string(Script script);
std::optional<Script> parse_script(std::string_view text);

struct TextLine
{
    Rect box;
    Script script = Script::Urdu;
    std::string transcription;   // verbatim UTF-8

    friend bool operator==(const TextLine&, const TextLine&) = default;
};

/// Identifies a frame across the corpus.
struct FrameKey
{
    std::string video_id;
    std::int64_t frame_number{};

    friend auto operator<=>(const FrameKey&, const FrameKey&) = default;
    friend bool operator==(const FrameKey&, const FrameKey&) = default;
};

/// `<video_id>_<frame_number>`, also the file stem of the frame's image and XML.
std::string to_string(const FrameKey& key);

/// Splits at the last underscore, so video ids may themselves contain underscores.
std::optional<FrameKey> parse_frame_key(std::string_view text);

struct FrameAnnotation
{
    std::string channel;
    std::string video_id;
    std::int64_t frame_number{};
    int width{};
    int height{};
    std::vector<TextLine> lines;

    FrameKey key() const { return {video_id, frame_number}; }
    Rect bounds() const { return {0, 0, width, height}; }

    friend bool operator==(const FrameAnnotation&, const FrameAnnotation&) = default;
};

RectRegion boxes_of(const FrameAnnotation& frame);
RectRegion boxes_of(const FrameAnnotation& frame, Script script);

}   // namespace utiv
