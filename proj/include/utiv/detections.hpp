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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "utiv/annotation.hpp"
#include "utiv/dataset.hpp"
#include "utiv/error.hpp"

namespace utiv {

/// `text` is the script-agnostic label; `urdu` and `english` belong to hybrid runs.
enum class Label { Text, Urdu, English };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);
Label label_for(Script script);
std::optional<Script> script_of(Label label);

struct Detection
{
    Rect box;
    Label label = Label::Text;
    double score = 1.0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

enum class DetectionMode { Unset, DetectOnly, Hybrid };

std::string_view to_string(DetectionMode mode);

struct DetectionSet
{
    DetectionMode mode = DetectionMode::Unset;
    std::map<FrameKey, std::vector<Detection>> frames;

    std::size_t size() const;
    /// Detections for `key`; empty when the frame has none.
    const std::vector<Detection>& at(const FrameKey& key) const;
    /// Appends a detection, fixing the mode on first use. Throws MixedModeError.
    void add(const FrameKey& key, const Detection& detection);
};

/// Base of detection-file errors; carries the 1-based line number.
class DetectionFormatError : public Error
{
public:
    DetectionFormatError(const std::string& message, std::size_t line);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MalformedLineError : public DetectionFormatError
{
public:
    using DetectionFormatError::DetectionFormatError;
};

class UnknownLabelError : public DetectionFormatError
{
public:
    using DetectionFormatError::DetectionFormatError;
};

class ScoreRangeError : public DetectionFormatError
{
public:
    using DetectionFormatError::DetectionFormatError;
};

class DegenerateDetectionError : public DetectionFormatError
{
public:
    using DetectionFormatError::DetectionFormatError;
};

class MixedModeError : public DetectionFormatError
{
public:
    using DetectionFormatError::DetectionFormatError;
};

/// Line-delimited records `video_id frame_number label score x y width height`,
/// separated by single spaces. Lines starting with `#` and blank lines are skipped.
DetectionSet parse_detections(std::string_view text);
DetectionSet read_detections_file(const std::filesystem::path& path);

/// Inverse of parse_detections, frames in key order.
std::string write_detections(const DetectionSet& set);

enum class PerturbMode { Exact, Dilate, Erode, Shift, Drop, Spurious };

std::string_view to_string(PerturbMode mode);
std::optional<PerturbMode> parse_perturb_mode(std::string_view text);

struct PerturbResult
{
    DetectionSet detections;
    std::vector<std::string> warnings;
};

/// Synthesises detections from ground truth.
///
/// `magnitude` is pixels for dilate, erode and shift, a probability for drop,
/// and a box count per frame for spurious. Labels follow the gt script when
/// `hybrid`, otherwise `text`. All scores are 1.0. Identical inputs and seed
/// give identical output. Every frame of `ds` appears in the result, even if
/// it ends up with no detections.
PerturbResult perturb_ground_truth(const Dataset& ds, PerturbMode mode, double magnitude, std::uint64_t seed,
                                   bool hybrid);

}   // namespace utiv
