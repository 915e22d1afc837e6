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


#include "utiv/annotation.hpp"

#include <fmt/format.h>

#include "text_util.hpp"

namespace utiv {

std::string_view to_string(Script script)
{
    return script == Script::Urdu ? "urdu" : "english";
}

std::optional<Script> parse_script(std::string_view text)
{
    if (text == "urdu") {
        return Script::Urdu;
    }
    if (text == "english") {
        return Script::English;
    }
    return std::nullopt;
}

std::string to_string(const FrameKey& key)
{
    return fmt::format("{}_{}", key.video_id, key.frame_number);
}

std::optional<FrameKey> parse_frame_key(std::string_view text)
{
    const auto pos = text.rfind('_');
    if (pos == std::string_view::npos || pos == 0) {
        return std::nullopt;
    }
    auto number = detail::parse_int<std::int64_t>(text.substr(pos + 1));
    if (!number || *number < 0) {
        return std::nullopt;
    }
    return FrameKey{std::string(text.substr(0, pos)), *number};
}

RectRegion boxes_of(const FrameAnnotation& frame)
{
    RectRegion out;
    out.reserve(frame.lines.size());
    for (const auto& line : frame.lines) {
        out.push_back(line.box);
    }
    return out;
}

RectRegion boxes_of(const FrameAnnotation& frame, Script script)
{
    RectRegion out;
    for (const auto& line : frame.lines) {
        if (line.script == script) {
            out.push_back(line.box);
        }
    }
    return out;
}

}   // namespace utiv
