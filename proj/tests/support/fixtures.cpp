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


#include "fixtures.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "utiv/annotation_xml.hpp"

namespace fs = std::filesystem;

namespace utiv::test {

TempDir::TempDir()
{
    auto pattern = (fs::temp_directory_path() / "utiv-test-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
        throw std::runtime_error("mkdtemp failed");
    }
    path_ = pattern;
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path_, ec);
}

namespace {

const char* const kWords[] = {
    "خبریں", "پاکستان", "لاہور", "وزیراعظم", "کراچی", "breaking", "news", "PSX", "100", "&", "<live>", "\"quoted\"",
};

std::string random_transcription(Rng& rng)
{
    std::string out;
    const auto words = rng.between(0, 4);
    for (int i = 0; i < words; ++i) {
        if (i) {
            out += ' ';
        }
        out += kWords[rng.below(std::size(kWords))];
    }
    return out;
}

Rect random_box(Rng& rng, const SyntheticSpec& spec)
{
    const int h = static_cast<int>(rng.between(spec.min_box_height, std::min(spec.max_box_height, spec.height - 1)));
    const int w = static_cast<int>(
        rng.between(std::min(2 * h, spec.width - 1), std::min(15 * h, spec.width - 1)));
    const int x = static_cast<int>(rng.between(0, spec.width - w));
    const int y = static_cast<int>(rng.between(0, spec.height - h));
    return {x, y, w, h};
}

}   // namespace

Dataset synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed)
{
    Rng rng(seed);
    Dataset ds;
    for (const auto& channel : spec.channels) {
        for (int v = 0; v < spec.videos_per_channel; ++v) {
            const auto video = fmt::format("{}_v{}", channel, v);
            std::int64_t number = rng.between(0, 50);
            for (int f = 0; f < spec.frames_per_video; ++f) {
                number += rng.between(1, 250);
                FrameAnnotation frame{channel, video, number, spec.width, spec.height, {}};
                const auto wanted = rng.between(spec.min_lines, spec.max_lines);
                for (int attempt = 0; static_cast<std::int64_t>(frame.lines.size()) < wanted && attempt < 400;
                     ++attempt) {
                    const Rect box = random_box(rng, spec);
                    if (spec.disjoint) {
                        bool clear = true;
                        for (const auto& line : frame.lines) {
                            clear = clear && intersect_area(line.box, box) == 0;
                        }
                        if (!clear) {
                            continue;
                        }
                    }
                    TextLine line;
                    line.box = box;
                    line.script = rng.bernoulli(spec.english_fraction) ? Script::English : Script::Urdu;
                    if (spec.transcriptions) {
                        line.transcription = random_transcription(rng);
                    }
                    frame.lines.push_back(std::move(line));
                }
                ds.frames.push_back(std::move(frame));
            }
        }
    }
    sort_frames(ds);
    ds.images.assign(ds.frames.size(), {});
    return ds;
}

void write_dataset_tree(Dataset& ds, const fs::path& root)
{
    ds.root_path = root;
    ds.images.clear();
    for (const auto& frame : ds.frames) {
        const auto video_dir = root / frame.channel / frame.video_id;
        fs::create_directories(video_dir / "frames");
        fs::create_directories(video_dir / "gt");
        const auto stem = to_string(frame.key());
        const auto image = video_dir / "frames" / (stem + ".png");
        cv::imwrite(image.string(), cv::Mat(frame.height, frame.width, CV_8UC1, cv::Scalar(96)));
        write_file_atomically(video_dir / "gt" / (stem + ".xml"), write_frame_annotation(frame));
        ds.images.push_back(image);
    }
}

const std::vector<ChannelCounts>& published_corpus_counts()
{
    static const std::vector<ChannelCounts> counts{
        {"Ary News", 7, 3206, 10250, 3605},
        {"Samaa News", 13, 2503, 10961, 4411},
        {"Dunya News", 16, 3059, 10723, 8861},
        {"Express News", 10, 2424, 8536, 6755},
    };
    return counts;
}

Dataset manifest_dataset(const std::vector<ChannelCounts>& counts)
{
    Dataset ds;
    for (const auto& c : counts) {
        for (int f = 0; f < c.frames; ++f) {
            FrameAnnotation frame{c.channel, fmt::format("{}_{}", c.channel, f % c.videos), f, 900, 600, {}};
            const int urdu = c.urdu_lines / c.frames + (f < c.urdu_lines % c.frames ? 1 : 0);
            const int english = c.english_lines / c.frames + (f < c.english_lines % c.frames ? 1 : 0);
            for (int i = 0; i < urdu + english; ++i) {
                const Rect box{(i / 28) * 300, 5 + (i % 28) * 20, 280, 15};
                frame.lines.push_back({box, i < urdu ? Script::Urdu : Script::English, {}});
            }
            ds.frames.push_back(std::move(frame));
        }
    }
    sort_frames(ds);
    ds.images.assign(ds.frames.size(), {});
    return ds;
}

std::vector<Rect> random_rects(Rng& rng, std::size_t count, int extent, int max_side)
{
    std::vector<Rect> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int w = static_cast<int>(rng.between(1, std::min(max_side, extent)));
        const int h = static_cast<int>(rng.between(1, std::min(max_side, extent)));
        out.push_back({static_cast<int>(rng.between(0, extent - w)), static_cast<int>(rng.between(0, extent - h)), w,
                       h});
    }
    return out;
}

std::vector<Rect> disjoint_rects(Rng& rng, std::size_t count, int width, int height, int min_side, int max_side)
{
    std::vector<Rect> out;
    for (int attempt = 0; out.size() < count && attempt < 1000; ++attempt) {
        const int w = static_cast<int>(rng.between(min_side, std::min(max_side, width)));
        const int h = static_cast<int>(rng.between(min_side, std::min(max_side, height)));
        const Rect r{static_cast<int>(rng.between(0, width - w)), static_cast<int>(rng.between(0, height - h)), w, h};
        bool clear = true;
        for (const auto& other : out) {
            clear = clear && intersect_area(other, r) == 0;
        }
        if (clear) {
            out.push_back(r);
        }
    }
    return out;
}

void write_ticker_video(const fs::path& dir, int frames, int tickers, std::uint64_t seed)
{
    Rng rng(seed);
    fs::create_directories(dir);

    // Each scene is a coarse 9x8 grid whose horizontal neighbours differ by at
    // least 40 grey levels, so per-frame noise cannot flip hash bits.
    std::vector<cv::Mat> scenes;
    for (int t = 0; t < tickers; ++t) {
        cv::Mat grid(8, 9, CV_8UC1);
        for (int r = 0; r < 8; ++r) {
            int level = static_cast<int>(rng.between(40, 215));
            for (int c = 0; c < 9; ++c) {
                grid.at<std::uint8_t>(r, c) = static_cast<std::uint8_t>(level);
                int step = static_cast<int>(rng.between(40, 80));
                level = rng.bernoulli(0.5) ? level + step : level - step;
                if (level > 235 || level < 20) {
                    level = level > 235 ? level - 2 * step : level + 2 * step;
                }
            }
        }
        cv::Mat scene;
        cv::resize(grid, scene, cv::Size(9 * 40, 8 * 30), 0, 0, cv::INTER_NEAREST);
        scenes.push_back(scene);
    }

    const int run = (frames + tickers - 1) / tickers;
    for (int f = 0; f < frames; ++f) {
        cv::Mat frame = scenes[static_cast<std::size_t>(std::min(f / run, tickers - 1))].clone();
        cv::Mat noise(frame.size(), CV_16SC1);
        for (int r = 0; r < noise.rows; ++r) {
            for (int c = 0; c < noise.cols; ++c) {
                noise.at<std::int16_t>(r, c) = static_cast<std::int16_t>(rng.between(-3, 3));
            }
        }
        cv::Mat wide;
        frame.convertTo(wide, CV_16SC1);
        wide += noise;
        wide.convertTo(frame, CV_8UC1);
        cv::cvtColor(frame, frame, cv::COLOR_GRAY2BGR);
        cv::imwrite((dir / fmt::format("frame_{:04d}.png", f)).string(), frame);
    }
}

}   // namespace utiv::test
