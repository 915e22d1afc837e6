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

#include <memory>
#include <string>

#include "json.hpp"
#include "utiv/annotation.hpp"
#include "utiv/service/annotation_store.hpp"

namespace utiv::service {

/// JSON mirror of the annotation XML:
/// `{"channel", "video", "number", "width", "height",
///   "lines": [{"x", "y", "width", "height", "script", "transcription"}]}`.
nlohmann::json to_json(const FrameAnnotation& frame);
/// Throws ValidationError naming each missing or mistyped field.
FrameAnnotation annotation_from_json(const nlohmann::json& doc);

/// Reads the revision from an `If-Match` value such as `3` or `"3"`.
std::optional<std::uint64_t> parse_revision(std::string_view header);

struct ServerOptions
{
    std::string host = "127.0.0.1";
    int port = 8080;   // 0 picks a free port
    /// Binding anywhere but loopback must be asked for explicitly.
    bool allow_external = false;
};

/// HTTP front of an AnnotationStore.
///
///     GET  /frames?channel=&video=&page=&page_size=   frame summaries
///     GET  /frames/{key}                              annotation + revision (ETag)
///     GET  /frames/{key}/image                        image bytes
///     PUT  /frames/{key}    If-Match: <revision>      JSON annotation body
///     GET  /progress
///
/// 404 unknown key, 409 stale revision, 422 invalid body or annotation.
class AnnotationServer
{
public:
    AnnotationServer(AnnotationStore& store, ServerOptions options);
    ~AnnotationServer();

    AnnotationServer(const AnnotationServer&) = delete;
    AnnotationServer& operator=(const AnnotationServer&) = delete;

    /// Binds the socket and returns the port in use. Throws ConfigError for a
    /// non-loopback host without allow_external, DataError if binding fails.
    int bind();

    /// Serves until stop() is called. bind() must have succeeded.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}   // namespace utiv::service
