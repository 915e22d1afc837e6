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


#include "utiv/annotation_xml.hpp"

#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <expat.h>
#include <fmt/format.h>

#include "text_util.hpp"

namespace utiv {

AnnotationError::AnnotationError(const std::string& message, int line, int column, const std::string& source)
    : Error(source.empty() ? fmt::format("{}:{}: {}", line, column, message)
                           : fmt::format("{}:{}:{}: {}", source, line, column, message)),
      message_(message), line_(line), column_(column)
{
}

namespace {

using Attributes = std::map<std::string, std::string, std::less<>>;

// SAX handler state. Expat is C, so callbacks never throw: the first failure is
// stored, the parser is stopped, and the exception is rethrown afterwards.
class FrameReader
{
public:
    FrameReader(const ParseOptions& options, std::vector<std::string>* warnings)
        : options_(options), warnings_(warnings), parser_(XML_ParserCreate("UTF-8"))
    {
        if (!parser_) {
            throw std::bad_alloc();
        }
        XML_SetUserData(parser_.get(), this);
        XML_SetElementHandler(parser_.get(), &FrameReader::on_start, &FrameReader::on_end);
        XML_SetCharacterDataHandler(parser_.get(), &FrameReader::on_text);
    }

    FrameAnnotation parse(std::string_view xml)
    {
        const auto status = XML_Parse(parser_.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
        if (failure_) {
            std::rethrow_exception(failure_);
        }
        if (status != XML_STATUS_OK) {
            throw XmlSyntaxError(XML_ErrorString(XML_GetErrorCode(parser_.get())), line(), column());
        }
        if (!seen_frame_) {
            throw XmlSyntaxError("document has no <frame> element", line(), column());
        }
        return std::move(frame_);
    }

private:
    struct ParserDeleter
    {
        void operator()(XML_Parser p) const { XML_ParserFree(p); }
    };

    enum class Context { Document, Frame, TextLine, Transcription, Skipped };

    int line() const { return static_cast<int>(XML_GetCurrentLineNumber(parser_.get())); }
    int column() const { return static_cast<int>(XML_GetCurrentColumnNumber(parser_.get())) + 1; }

    template <typename E>
    void fail(const std::string& message)
    {
        if (!failure_) {
            failure_ = std::make_exception_ptr(E(message, line(), column()));
            XML_StopParser(parser_.get(), XML_FALSE);
        }
    }

    template <typename E>
    void unknown(const std::string& message)
    {
        if (options_.strict) {
            fail<E>(message);
        } else if (warnings_) {
            warnings_->push_back(fmt::format("{}:{}: {}", line(), column(), message));
        }
    }

    static Attributes collect(const XML_Char** atts)
    {
        Attributes out;
        for (int i = 0; atts[i]; i += 2) {
            out.emplace(atts[i], atts[i + 1]);
        }
        return out;
    }

    void check_known(const Attributes& attrs, std::initializer_list<std::string_view> known, std::string_view element)
    {
        for (const auto& [name, value] : attrs) {
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                unknown<UnknownElementError>(fmt::format("unknown attribute '{}' on <{}>", name, element));
            }
        }
    }

    const std::string* require(const Attributes& attrs, std::string_view name, std::string_view element)
    {
        auto it = attrs.find(name);
        if (it == attrs.end()) {
            fail<MissingAttributeError>(fmt::format("<{}> is missing required attribute '{}'", element, name));
            return nullptr;
        }
        return &it->second;
    }

    template <typename Int>
    std::optional<Int> integer(const Attributes& attrs, std::string_view name, std::string_view element)
    {
        const auto* raw = require(attrs, name, element);
        if (!raw) {
            return std::nullopt;
        }
        auto v = detail::parse_int<Int>(*raw);
        if (!v) {
            fail<InvalidAttributeError>(fmt::format("<{}> attribute '{}' is not an integer: '{}'", element, name, *raw));
        }
        return v;
    }

    void start_frame(const Attributes& attrs)
    {
        check_known(attrs, {"channel", "video", "number", "width", "height"}, "frame");
        const auto* channel = require(attrs, "channel", "frame");
        const auto* video = require(attrs, "video", "frame");
        if (!channel || !video) {
            return;
        }
        auto number = integer<std::int64_t>(attrs, "number", "frame");
        auto width = integer<int>(attrs, "width", "frame");
        auto height = integer<int>(attrs, "height", "frame");
        if (!number || !width || !height) {
            return;
        }
        if (*number < 0) {
            fail<InvalidAttributeError>(fmt::format("frame number {} is negative", *number));
            return;
        }
        if (*width < 1 || *height < 1) {
            fail<InvalidAttributeError>(fmt::format("frame size {}x{} must be at least 1x1", *width, *height));
            return;
        }
        if (video->empty()) {
            fail<InvalidAttributeError>("frame video id is empty");
            return;
        }
        frame_.channel = *channel;
        frame_.video_id = *video;
        frame_.frame_number = *number;
        frame_.width = *width;
        frame_.height = *height;
        seen_frame_ = true;
    }

    void start_textline(const Attributes& attrs)
    {
        check_known(attrs, {"x", "y", "width", "height", "script"}, "textline");
        auto x = integer<int>(attrs, "x", "textline");
        auto y = integer<int>(attrs, "y", "textline");
        auto w = integer<int>(attrs, "width", "textline");
        auto h = integer<int>(attrs, "height", "textline");
        const auto* script_text = require(attrs, "script", "textline");
        if (!x || !y || !w || !h || !script_text) {
            return;
        }
        auto script = parse_script(*script_text);
        if (!script) {
            fail<UnknownScriptError>(fmt::format("unknown script '{}'", *script_text));
            return;
        }
        const Rect box{*x, *y, *w, *h};
        if (box.empty()) {
            fail<DegenerateBoxError>(fmt::format("text line box ({}, {}, {}, {}) has no area", box.x, box.y,
                                                 box.width, box.height));
            return;
        }
        if (options_.check_bounds && !frame_.bounds().contains(box)) {
            fail<BoxOutOfBoundsError>(fmt::format("text line box ({}, {}, {}, {}) leaves the {}x{} frame", box.x,
                                                  box.y, box.width, box.height, frame_.width, frame_.height));
            return;
        }
        frame_.lines.push_back({box, *script, {}});
        has_transcription_ = false;
    }

    void start(const XML_Char* name, const XML_Char** atts)
    {
        const std::string_view element(name);
        const auto attrs = collect(atts);
        const Context parent = stack_.empty() ? Context::Document : stack_.back();

        Context next = Context::Skipped;
        switch (parent) {
        case Context::Document:
            if (element != "frame") {
                fail<UnknownElementError>(fmt::format("root element must be <frame>, found <{}>", element));
                return;
            }
            start_frame(attrs);
            next = Context::Frame;
            break;
        case Context::Frame:
            if (element == "textline") {
                start_textline(attrs);
                next = Context::TextLine;
            } else {
                unknown<UnknownElementError>(fmt::format("unknown element <{}> in <frame>", element));
            }
            break;
        case Context::TextLine:
            if (element == "transcription") {
                if (has_transcription_) {
                    fail<XmlSyntaxError>("<textline> has more than one <transcription>");
                    return;
                }
                check_known(attrs, {}, "transcription");
                has_transcription_ = true;
                next = Context::Transcription;
            } else {
                unknown<UnknownElementError>(fmt::format("unknown element <{}> in <textline>", element));
            }
            break;
        case Context::Transcription:
            unknown<UnknownElementError>(fmt::format("unexpected element <{}> inside <transcription>", element));
            break;
        case Context::Skipped:
            break;
        }
        stack_.push_back(next);
    }

    void end()
    {
        if (!stack_.empty()) {
            stack_.pop_back();
        }
    }

    void text(std::string_view data)
    {
        const Context ctx = stack_.empty() ? Context::Document : stack_.back();
        if (ctx == Context::Transcription) {
            frame_.lines.back().transcription.append(data);
        } else if (ctx != Context::Skipped && !detail::trim(data).empty()) {
            unknown<UnknownElementError>(fmt::format("unexpected text '{}'", detail::trim(data)));
        }
    }

    static void XMLCALL on_start(void* self, const XML_Char* name, const XML_Char** atts)
    {
        auto* reader = static_cast<FrameReader*>(self);
        if (!reader->failure_) {
            reader->start(name, atts);
        }
    }

    static void XMLCALL on_end(void* self, const XML_Char*)
    {
        static_cast<FrameReader*>(self)->end();
    }

    static void XMLCALL on_text(void* self, const XML_Char* s, int len)
    {
        auto* reader = static_cast<FrameReader*>(self);
        if (!reader->failure_) {
            reader->text(std::string_view(s, static_cast<std::size_t>(len)));
        }
    }

    const ParseOptions& options_;
    std::vector<std::string>* warnings_;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser_;
    std::exception_ptr failure_;
    std::vector<Context> stack_;
    FrameAnnotation frame_;
    bool seen_frame_ = false;
    bool has_transcription_ = false;
};

void escape_into(std::string& out, std::string_view text, bool attribute)
{
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += attribute ? "&quot;" : "\"";
            break;
        case '\r':
            out += "&#13;";
            break;
        case '\n':
            out += attribute ? "&#10;" : "\n";
            break;
        case '\t':
            out += attribute ? "&#9;" : "\t";
            break;
        default:
            out += c;
        }
    }
}

std::string escaped(std::string_view text, bool attribute)
{
    std::string out;
    out.reserve(text.size());
    escape_into(out, text, attribute);
    return out;
}

}   // namespace

FrameAnnotation parse_frame_annotation(std::string_view xml, const ParseOptions& options,
                                       std::vector<std::string>* warnings)
{
    FrameReader reader(options, warnings);
    return reader.parse(xml);
}

std::string write_frame_annotation(const FrameAnnotation& frame)
{
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<frame channel=\"{}\" video=\"{}\" number=\"{}\" width=\"{}\" height=\"{}\">\n",
                       escaped(frame.channel, true), escaped(frame.video_id, true), frame.frame_number, frame.width,
                       frame.height);
    for (const auto& line : frame.lines) {
        out += fmt::format("  <textline x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" script=\"{}\">\n", line.box.x,
                           line.box.y, line.box.width, line.box.height, to_string(line.script));
        out += "    <transcription>";
        escape_into(out, line.transcription, false);
        out += "</transcription>\n";
        out += "  </textline>\n";
    }
    out += "</frame>\n";
    return out;
}

FrameAnnotation read_frame_annotation_file(const std::filesystem::path& path, const ParseOptions& options,
                                           std::vector<std::string>* warnings)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot read annotation {}", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_frame_annotation(buffer.str(), options, warnings);
    } catch (const AnnotationError& e) {
        // Same class, now naming the file.
        auto rethrow = [&]<typename E>(const E*) { throw E(e.message(), e.line(), e.column(), path.string()); };
        if (auto p = dynamic_cast<const XmlSyntaxError*>(&e)) rethrow(p);
        if (auto p = dynamic_cast<const MissingAttributeError*>(&e)) rethrow(p);
        if (auto p = dynamic_cast<const InvalidAttributeError*>(&e)) rethrow(p);
        if (auto p = dynamic_cast<const UnknownScriptError*>(&e)) rethrow(p);
        if (auto p = dynamic_cast<const BoxOutOfBoundsError*>(&e)) rethrow(p);
        if (auto p = dynamic_cast<const DegenerateBoxError*>(&e)) rethrow(p);
        if (auto p = dynamic_cast<const UnknownElementError*>(&e)) rethrow(p);
        throw;
    }
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(fmt::format("cannot write {}", tmp.string()));
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw DataError(fmt::format("short write to {}", tmp.string()));
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError(fmt::format("cannot replace {}: {}", path.string(), ec.message()));
    }
}

}   // namespace utiv
