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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "utiv/annotation.hpp"
#include "utiv/error.hpp"

namespace utiv {

/// Ground-truth XML, one file per frame:
///
///     <?xml version="1.0" encoding="UTF-8"?>
///     <frame channel="..." video="..." number="..." width="..." height="...">
///       <textline x="..." y="..." width="..." height="..." script="urdu|english">
///         <transcription>...</transcription>
///       </textline>
///     </frame>
///
/// Every parse failure carries the 1-based line and column it was detected at.
class AnnotationError : public Error
{
public:
    AnnotationError(const std::string& message, int line, int column, const std::string& source = {});

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    int line_;
    int column_;
};

class XmlSyntaxError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

class MissingAttributeError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

/// A numeric attribute that does not parse or is out of its domain.
class InvalidAttributeError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

class UnknownScriptError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

class BoxOutOfBoundsError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

class DegenerateBoxError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

/// Raised in strict mode for elements or attributes outside the schema.
class UnknownElementError : public AnnotationError
{
public:
    using AnnotationError::AnnotationError;
};

struct ParseOptions
{
    /// Reject unknown elements/attributes; in lenient mode they become warnings.
    bool strict = true;
    /// Reject lines whose box leaves the frame. Validation tooling turns this off
    /// so such boxes can be reported instead of aborting the load.
    bool check_bounds = true;
};

FrameAnnotation parse_frame_annotation(std::string_view xml, const ParseOptions& options = {},
                                       std::vector<std::string>* warnings = nullptr);

/// Canonical form: fixed element and attribute order, 2-space indentation, UTF-8.
std::string write_frame_annotation(const FrameAnnotation& frame);

FrameAnnotation read_frame_annotation_file(const std::filesystem::path& path, const ParseOptions& options = {},
                                           std::vector<std::string>* warnings = nullptr);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// only ever see the old or the new content.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}   // namespace utiv
