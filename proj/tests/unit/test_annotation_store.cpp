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


#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "utiv/annotation_xml.hpp"
#include "utiv/service/annotation_store.hpp"

using namespace utiv;
using namespace utiv::service;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class StoreTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        ds = test::synthetic_dataset({}, 21);
        test::write_dataset_tree(ds, dir.path());
        // The last frame of every video starts unannotated.
        for (const auto& f : ds.frames) {
            if (f.frame_number == last_number(f.video_id)) {
                std::filesystem::remove(annotation_path(dir.path(), f));
                unannotated.insert(to_string(f.key()));
            }
        }
    }

    std::int64_t last_number(const std::string& video) const
    {
        std::int64_t n = -1;
        for (const auto& f : ds.frames) {
            if (f.video_id == video) {
                n = std::max(n, f.frame_number);
            }
        }
        return n;
    }

    const FrameAnnotation& first_annotated() const
    {
        for (const auto& f : ds.frames) {
            if (!unannotated.count(to_string(f.key()))) {
                return f;
            }
        }
        throw std::logic_error("no annotated frame");
    }

    test::TempDir dir;
    Dataset ds;
    std::set<std::string> unannotated;
};

}   // namespace

TEST(AnnotationStore, EmptyRoot)
{
    test::TempDir dir;
    AnnotationStore store(dir.path());
    EXPECT_EQ(store.size(), 0u);
    EXPECT_TRUE(store.list_frames().empty());
    EXPECT_EQ(store.progress().total.annotated_frames, 0u);
    EXPECT_THROW(store.get_frame("nothing_1"), NotFoundError);
}

TEST(AnnotationStore, MissingRootIsAnError)
{
    EXPECT_THROW(AnnotationStore("/nonexistent/root"), DataError);
}

TEST_F(StoreTest, ListsEveryFrameInOrder)
{
    AnnotationStore store(dir.path());
    ASSERT_EQ(store.size(), 12u);
    const auto frames = store.list_frames();
    ASSERT_EQ(frames.size(), 12u);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        EXPECT_EQ(frames[i].key, to_string(ds.frames[i].key()));
        EXPECT_EQ(frames[i].annotated, !unannotated.count(frames[i].key));
        EXPECT_EQ(frames[i].revision, 0u);
        EXPECT_EQ(frames[i].width, 900);
        EXPECT_EQ(frames[i].line_count, frames[i].annotated ? ds.frames[i].lines.size() : 0u);
    }
}

TEST_F(StoreTest, FilterAndPaging)
{
    AnnotationStore store(dir.path());
    EXPECT_EQ(store.count_frames({.channel = "alpha"}), 6u);
    EXPECT_EQ(store.count_frames({.channel = "alpha", .video = "alpha_v1"}), 3u);
    EXPECT_EQ(store.count_frames({.channel = "nobody"}), 0u);

    const auto all = store.list_frames();
    std::vector<std::string> paged;
    for (std::size_t p = 0; p < 3; ++p) {
        for (const auto& f : store.list_frames({}, {p, 5})) {
            paged.push_back(f.key);
        }
    }
    ASSERT_EQ(paged.size(), all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        EXPECT_EQ(paged[i], all[i].key);
    }
    EXPECT_TRUE(store.list_frames({}, {7, 5}).empty());
}

TEST_F(StoreTest, GetReturnsImageBytesAndAnnotation)
{
    AnnotationStore store(dir.path());
    const auto& f = first_annotated();
    const auto view = store.get_frame(to_string(f.key()));
    EXPECT_EQ(view.annotation, f);
    EXPECT_TRUE(view.annotated);
    EXPECT_EQ(view.content_type, "image/png");
    EXPECT_EQ(view.image, slurp(ds.images[*ds.find(f.key())]));

    const auto blank = store.get_frame(*unannotated.begin());
    EXPECT_FALSE(blank.annotated);
    EXPECT_TRUE(blank.annotation.lines.empty());
    EXPECT_EQ(blank.annotation.width, 900);
    EXPECT_EQ(blank.annotation.height, 600);
}

TEST_F(StoreTest, PutWritesXmlAndBumpsRevision)
{
    AnnotationStore store(dir.path());
    const auto key = *unannotated.begin();
    auto annotation = store.get_frame(key).annotation;
    annotation.lines.push_back({{10, 10, 100, 20}, Script::English, "breaking"});

    EXPECT_EQ(store.put_annotation(key, annotation, 0), 1u);
    const auto view = store.get_frame(key);
    EXPECT_EQ(view.revision, 1u);
    EXPECT_TRUE(view.annotated);
    EXPECT_EQ(view.annotation, annotation);
    EXPECT_EQ(read_frame_annotation_file(annotation_path(dir.path(), annotation)), annotation);
    EXPECT_EQ(store.dirty_frames(), (std::set<std::string>{key}));

    annotation.lines.clear();
    EXPECT_EQ(store.put_annotation(key, annotation, 1), 2u);
    EXPECT_TRUE(store.get_frame(key).annotation.lines.empty());
}

TEST_F(StoreTest, StaleRevisionConflictsAndLeavesDiskUntouched)
{
    AnnotationStore store(dir.path());
    const auto& f = first_annotated();
    const auto key = to_string(f.key());
    const auto xml = annotation_path(dir.path(), f);

    auto edit = f;
    edit.lines.pop_back();
    ASSERT_EQ(store.put_annotation(key, edit, 0), 1u);
    const auto before = slurp(xml);

    auto other = f;
    other.lines.clear();
    try {
        store.put_annotation(key, other, 0);
        FAIL();
    } catch (const ConflictError& e) {
        EXPECT_EQ(e.current_revision(), 1u);
    }
    EXPECT_EQ(slurp(xml), before);
    EXPECT_EQ(store.get_frame(key).annotation, edit);
}

TEST_F(StoreTest, InvalidAnnotationsAreRejected)
{
    AnnotationStore store(dir.path());
    const auto& f = first_annotated();
    const auto key = to_string(f.key());
    const auto before = slurp(annotation_path(dir.path(), f));

    auto out_of_bounds = f;
    out_of_bounds.lines.push_back({{890, 0, 20, 10}, Script::Urdu, ""});
    auto degenerate = f;
    degenerate.lines.push_back({{0, 0, 0, 10}, Script::Urdu, ""});
    auto wrong_frame = f;
    wrong_frame.frame_number += 1000;
    auto wrong_size = f;
    wrong_size.width = 640;

    for (const auto& bad : {out_of_bounds, degenerate, wrong_frame, wrong_size}) {
        try {
            store.put_annotation(key, bad, 0);
            FAIL();
        } catch (const ValidationError& e) {
            EXPECT_FALSE(e.problems().empty());
        }
    }
    EXPECT_EQ(store.get_frame(key).revision, 0u);
    EXPECT_EQ(slurp(annotation_path(dir.path(), f)), before);
    EXPECT_THROW(store.put_annotation("alpha_v9_1", f, 0), NotFoundError);
}

TEST_F(StoreTest, ProgressMatchesDatasetStatistics)
{
    AnnotationStore store(dir.path());
    Dataset annotated;
    for (const auto& f : ds.frames) {
        if (!unannotated.count(to_string(f.key()))) {
            annotated.frames.push_back(f);
        }
    }
    const auto stats = dataset_stats(annotated);
    const auto progress = store.progress();
    ASSERT_EQ(progress.channels.size(), stats.channels.size());
    for (std::size_t i = 0; i < stats.channels.size(); ++i) {
        const auto& p = progress.channels[i];
        const auto& c = stats.channels[i];
        EXPECT_EQ(p.channel, c.channel);
        EXPECT_EQ(static_cast<std::int64_t>(p.annotated_frames), c.frames);
        EXPECT_EQ(static_cast<std::int64_t>(p.urdu_lines), c.urdu_lines);
        EXPECT_EQ(static_cast<std::int64_t>(p.english_lines), c.english_lines);
    }
    EXPECT_EQ(progress.total.annotated_frames + progress.total.unannotated_frames, store.size());
    EXPECT_EQ(progress.total.unannotated_frames, unannotated.size());
}

TEST_F(StoreTest, ProgressFollowsWrites)
{
    AnnotationStore store(dir.path());
    const auto key = *unannotated.begin();
    auto annotation = store.get_frame(key).annotation;
    annotation.lines.push_back({{0, 0, 50, 12}, Script::Urdu, ""});
    const auto before = store.progress().total;
    store.put_annotation(key, annotation, 0);
    const auto after = store.progress().total;
    EXPECT_EQ(after.annotated_frames, before.annotated_frames + 1);
    EXPECT_EQ(after.urdu_lines, before.urdu_lines + 1);
}

TEST_F(StoreTest, ConcurrentConflictingPutsExactlyOneWins)
{
    AnnotationStore store(dir.path());
    const auto key = *unannotated.begin();
    const auto base = store.get_frame(key).annotation;
    constexpr int kWriters = 8;
    std::atomic<int> wins{0};
    std::atomic<int> conflicts{0};
    std::vector<std::thread> writers;
    for (int w = 0; w < kWriters; ++w) {
        writers.emplace_back([&, w] {
            auto mine = base;
            mine.lines.push_back({{10 * w, 10, 5, 5}, Script::Urdu, std::to_string(w)});
            try {
                store.put_annotation(key, mine, 0);
                ++wins;
            } catch (const ConflictError&) {
                ++conflicts;
            }
        });
    }
    for (auto& t : writers) {
        t.join();
    }
    EXPECT_EQ(wins.load(), 1);
    EXPECT_EQ(conflicts.load(), kWriters - 1);
    const auto view = store.get_frame(key);
    EXPECT_EQ(view.revision, 1u);
    ASSERT_EQ(view.annotation.lines.size(), 1u);
    EXPECT_EQ(read_frame_annotation_file(annotation_path(dir.path(), base)), view.annotation);
}

TEST_F(StoreTest, ReadYourWritesAcrossReopen)
{
    const auto key = *unannotated.begin();
    FrameAnnotation written;
    {
        AnnotationStore store(dir.path());
        written = store.get_frame(key).annotation;
        written.lines.push_back({{1, 2, 30, 40}, Script::English, "x & y"});
        store.put_annotation(key, written, 0);
        EXPECT_EQ(store.get_frame(key).annotation, written);
    }
    AnnotationStore reopened(dir.path());
    const auto view = reopened.get_frame(key);
    EXPECT_EQ(view.annotation, written);
    EXPECT_EQ(view.revision, 0u);
    EXPECT_TRUE(view.annotated);
}
