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


#include "utiv/service/http_server.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"
#include "utiv/log.hpp"

using nlohmann::json;

namespace utiv::service {

json to_json(const FrameAnnotation& frame)
{
    json lines = json::array();
    for (const auto& line : frame.lines) {
        lines.push_back({
            {"x", line.box.x},
            {"y", line.box.y},
            {"width", line.box.width},
            {"height", line.box.height},
            {"script", to_string(line.script)},
            {"transcription", line.transcription},
        });
    }
    return {
        {"channel", frame.channel}, {"video", frame.video_id}, {"number", frame.frame_number},
        {"width", frame.width},     {"height", frame.height},  {"lines", std::move(lines)},
    };
}

namespace {

class FieldReader
{
public:
    explicit FieldReader(std::vector<std::string>& problems) : problems_(problems) {}

    template <typename Int>
    Int integer(const json& obj, const char* name, const std::string& where)
    {
        auto it = obj.find(name);
        if (it == obj.end() || !it->is_number_integer()) {
            problems_.push_back(fmt::format("{}: '{}' must be an integer", where, name));
            return Int{};
        }
        return it->get<Int>();
    }

    std::string string(const json& obj, const char* name, const std::string& where, bool required = true)
    {
        auto it = obj.find(name);
        if (it == obj.end()) {
            if (required) {
                problems_.push_back(fmt::format("{}: '{}' is missing", where, name));
            }
            return {};
        }
        if (!it->is_string()) {
            problems_.push_back(fmt::format("{}: '{}' must be a string", where, name));
            return {};
        }
        return it->get<std::string>();
    }

private:
    std::vector<std::string>& problems_;
};

void reply_json(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(2), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message,
                 const std::vector<std::string>& details = {})
{
    json body{{"error", message}};
    if (!details.empty()) {
        body["details"] = details;
    }
    reply_json(res, status, body);
}

json summary_json(const FrameSummary& s)
{
    return {
        {"key", s.key},          {"channel", s.channel},     {"video", s.video_id},
        {"number", s.frame_number}, {"width", s.width},      {"height", s.height},
        {"lines", s.line_count}, {"annotated", s.annotated}, {"revision", s.revision},
    };
}

json progress_json(const ChannelProgress& c)
{
    return {
        {"channel", c.channel},
        {"annotated_frames", c.annotated_frames},
        {"unannotated_frames", c.unannotated_frames},
        {"urdu_lines", c.urdu_lines},
        {"english_lines", c.english_lines},
    };
}

std::size_t query_number(const httplib::Request& req, const char* name, std::size_t fallback)
{
    if (!req.has_param(name)) {
        return fallback;
    }
    const auto text = req.get_param_value(name);
    std::size_t value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError({fmt::format("query parameter '{}' must be a non-negative integer", name)});
    }
    return value;
}

bool is_loopback(const std::string& host)
{
    return host == "127.0.0.1" || host == "localhost" || host == "::1";
}

}   // namespace

FrameAnnotation annotation_from_json(const json& doc)
{
    std::vector<std::string> problems;
    if (!doc.is_object()) {
        throw ValidationError({"annotation must be a JSON object"});
    }
    FieldReader read(problems);

    FrameAnnotation frame;
    frame.channel = read.string(doc, "channel", "frame");
    frame.video_id = read.string(doc, "video", "frame");
    frame.frame_number = read.integer<std::int64_t>(doc, "number", "frame");
    frame.width = read.integer<int>(doc, "width", "frame");
    frame.height = read.integer<int>(doc, "height", "frame");

    auto lines = doc.find("lines");
    if (lines == doc.end() || !lines->is_array()) {
        problems.push_back("frame: 'lines' must be an array");
    } else {
        for (std::size_t i = 0; i < lines->size(); ++i) {
            const auto& item = (*lines)[i];
            const auto where = fmt::format("line {}", i);
            if (!item.is_object()) {
                problems.push_back(where + ": must be an object");
                continue;
            }
            TextLine line;
            line.box = {read.integer<int>(item, "x", where), read.integer<int>(item, "y", where),
                        read.integer<int>(item, "width", where), read.integer<int>(item, "height", where)};
            const auto script = read.string(item, "script", where);
            if (auto parsed = parse_script(script)) {
                line.script = *parsed;
            } else {
                problems.push_back(fmt::format("{}: unknown script '{}'", where, script));
            }
            line.transcription = read.string(item, "transcription", where, false);
            frame.lines.push_back(std::move(line));
        }
    }
    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
    return frame;
}

std::optional<std::uint64_t> parse_revision(std::string_view header)
{
    if (header.size() >= 2 && header.front() == '"' && header.back() == '"') {
        header = header.substr(1, header.size() - 2);
    }
    std::uint64_t value{};
    const auto [ptr, ec] = std::from_chars(header.data(), header.data() + header.size(), value);
    if (header.empty() || ec != std::errc{} || ptr != header.data() + header.size()) {
        return std::nullopt;
    }
    return value;
}

struct AnnotationServer::Impl
{
    AnnotationStore& store;
    ServerOptions options;
    httplib::Server server;
    int port = -1;
    std::atomic<bool> listening{false};
    std::atomic<bool> stop_requested{false};

    Impl(AnnotationStore& s, ServerOptions o) : store(s), options(std::move(o)) { routes(); }

    // Maps store exceptions onto status codes.
    template <typename F>
    void guarded(httplib::Response& res, F&& handler)
    {
        try {
            handler();
        } catch (const NotFoundError& e) {
            reply_error(res, 404, e.what());
        } catch (const ConflictError& e) {
            json body{{"error", e.what()}, {"revision", e.current_revision()}};
            reply_json(res, 409, body);
        } catch (const ValidationError& e) {
            reply_error(res, 422, "validation failed", e.problems());
        } catch (const std::exception& e) {
            log::error("request failed: {}", e.what());
            reply_error(res, 500, e.what());
        }
    }

    void routes()
    {
        server.Get("/frames", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                FrameFilter filter;
                if (req.has_param("channel") && !req.get_param_value("channel").empty()) {
                    filter.channel = req.get_param_value("channel");
                }
                if (req.has_param("video") && !req.get_param_value("video").empty()) {
                    filter.video = req.get_param_value("video");
                }
                Page page{query_number(req, "page", 0), query_number(req, "page_size", 100)};
                json frames = json::array();
                for (const auto& s : store.list_frames(filter, page)) {
                    frames.push_back(summary_json(s));
                }
                reply_json(res, 200,
                           {{"frames", std::move(frames)},
                            {"page", page.index},
                            {"page_size", page.size},
                            {"total", store.count_frames(filter)}});
            });
        });

        server.Get(R"(/frames/([^/]+)/image)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                auto view = store.get_frame(req.matches[1]);
                res.status = 200;
                res.set_content(std::move(view.image), view.content_type);
            });
        });

        server.Get(R"(/frames/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const std::string key = req.matches[1];
                auto view = store.get_frame(key);
                res.set_header("ETag", fmt::format("\"{}\"", view.revision));
                reply_json(res, 200,
                           {{"key", key},
                            {"revision", view.revision},
                            {"annotated", view.annotated},
                            {"annotation", to_json(view.annotation)}});
            });
        });

        server.Put(R"(/frames/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const std::string key = req.matches[1];
                store.get_frame(key);   // 404 before looking at the body
                auto revision = parse_revision(req.get_header_value("If-Match"));
                if (!revision) {
                    throw ValidationError({"If-Match header with the base revision is required"});
                }
                json doc = json::parse(req.body, nullptr, false);
                if (doc.is_discarded()) {
                    throw ValidationError({"body is not valid JSON"});
                }
                const auto next = store.put_annotation(key, annotation_from_json(doc), *revision);
                res.set_header("ETag", fmt::format("\"{}\"", next));
                reply_json(res, 200, {{"key", key}, {"revision", next}});
            });
        });

        server.Get("/progress", [this](const httplib::Request&, httplib::Response& res) {
            guarded(res, [&] {
                const auto p = store.progress();
                json channels = json::array();
                for (const auto& c : p.channels) {
                    channels.push_back(progress_json(c));
                }
                reply_json(res, 200, {{"channels", std::move(channels)}, {"total", progress_json(p.total)}});
            });
        });
    }
};

AnnotationServer::AnnotationServer(AnnotationStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options)))
{
}

AnnotationServer::~AnnotationServer()
{
    stop();
}

int AnnotationServer::bind()
{
    const auto& o = impl_->options;
    if (!is_loopback(o.host) && !o.allow_external) {
        throw ConfigError(fmt::format("refusing to bind {} without explicit permission for external access", o.host));
    }
    int port = o.port == 0 ? impl_->server.bind_to_any_port(o.host) : o.port;
    if (o.port != 0 && !impl_->server.bind_to_port(o.host, o.port)) {
        port = -1;
    }
    if (port < 0) {
        throw DataError(fmt::format("cannot bind {}:{}", o.host, o.port));
    }
    impl_->port = port;
    return port;
}

void AnnotationServer::listen()
{
    impl_->listening = true;
    if (!impl_->stop_requested) {
        impl_->server.listen_after_bind();
    }
    impl_->listening = false;
}

void AnnotationServer::stop()
{
    if (!impl_) {
        return;
    }
    impl_->stop_requested = true;
    // listen() may be between its flag check and the accept loop.
    while (impl_->listening && !impl_->server.is_running()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    impl_->server.stop();
}

}   // namespace utiv::service
