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


#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "utiv/experiments.hpp"

using namespace utiv;

namespace {

std::int64_t line_total(const Dataset& ds)
{
    std::int64_t n = 0;
    for (const auto& f : ds.frames) {
        n += static_cast<std::int64_t>(f.lines.size());
    }
    return n;
}

}   // namespace

TEST(Resolution, ParseAndFormat)
{
    EXPECT_EQ(parse_resolution("640x360"), (Resolution{640, 360}));
    EXPECT_EQ(to_string(Resolution{1920, 1080}), "1920x1080");
    for (const char* bad : {"640", "x360", "640x", "0x360", "640x-1", "640X360", "a x b"}) {
        EXPECT_THROW(parse_resolution(bad), ConfigError) << bad;
    }
}

TEST(RescaleBox, Examples)
{
    EXPECT_EQ(rescale_box(Rect{10, 20, 30, 40}, {100, 100}, {200, 50}), (Rect{20, 10, 60, 20}));
    EXPECT_EQ(rescale_box(Rect{10, 20, 30, 40}, {100, 100}, {100, 100}), (Rect{10, 20, 30, 40}));
    // Left edge 0.5 rounds up to 1, right edge 1.5 to 2.
    EXPECT_EQ(rescale_box(Rect{1, 0, 2, 2}, {4, 4}, {2, 2}), (Rect{1, 0, 1, 1}));
    EXPECT_TRUE(rescale_box(Rect{0, 0, 1, 1}, {100, 100}, {10, 10}).empty());
}

TEST(RescaleBox, TouchingBoxesStayTouching)
{
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const Rect a{static_cast<int>(rng.between(0, 400)), static_cast<int>(rng.between(0, 300)),
                     static_cast<int>(rng.between(5, 200)), static_cast<int>(rng.between(5, 100))};
        const Rect b{a.right(), a.y, static_cast<int>(rng.between(5, 100)), a.height};
        const Resolution to{static_cast<int>(rng.between(100, 2000)), static_cast<int>(rng.between(100, 2000))};
        const auto sa = rescale_box(a, {900, 600}, to);
        const auto sb = rescale_box(b, {900, 600}, to);
        if (!sa.empty() && !sb.empty()) {
            EXPECT_EQ(sa.right(), sb.x);
        }
    }
}

TEST(RescaleDataset, DropsCollapsedLinesAndSetsSize)
{
    Dataset ds;
    ds.frames.push_back({"c", "v", 1, 900, 600, {{{0, 0, 1, 1}, Script::Urdu, ""}, {{100, 100, 90, 60}, Script::English, "t"}}});
    const auto out = rescale_dataset(ds, {90, 60});
    ASSERT_EQ(out.frames.size(), 1u);
    EXPECT_EQ(out.frames[0].width, 90);
    EXPECT_EQ(out.frames[0].height, 60);
    ASSERT_EQ(out.frames[0].lines.size(), 1u);
    EXPECT_EQ(out.frames[0].lines[0].box, (Rect{10, 10, 9, 6}));
    EXPECT_EQ(out.frames[0].lines[0].transcription, "t");
}

TEST(RescaleDetections, UnknownFrameIsAnError)
{
    Dataset ds;
    DetectionSet dets;
    dets.add({"v", 1}, {{0, 0, 5, 5}, Label::Text, 1.0});
    EXPECT_THROW(rescale_detections(dets, ds, {10, 10}), UnknownFrameError);
}

TEST(ResolutionSweep, IdentityResolutionMatchesDirectEvaluation)
{
    const auto ds = test::synthetic_dataset({}, 4);
    const auto dets = perturb_ground_truth(ds, PerturbMode::Shift, 4, 2, false).detections;
    const Resolution base[] = {{900, 600}};
    const auto points = resolution_sweep(ds, dets, base);
    ASSERT_EQ(points.size(), 1u);
    const auto direct = evaluate_detection(dets, ds);
    EXPECT_DOUBLE_EQ(points[0].score.f_measure, direct.f_measure);
    EXPECT_EQ(points[0].parameter, "900x600");
}

TEST(ResolutionSweep, ExactDetectionsStayPerfect)
{
    const auto ds = test::synthetic_dataset({}, 5);
    const auto dets = perturb_ground_truth(ds, PerturbMode::Exact, 0, 1, false).detections;
    for (const auto& p : resolution_sweep(ds, dets, kStandardResolutions)) {
        EXPECT_DOUBLE_EQ(p.score.f_measure, 1.0) << p.parameter;
    }
}

TEST(ResolutionSweep, PointsOrderedByPixelCount)
{
    const auto ds = test::synthetic_dataset({}, 6);
    const auto dets = perturb_ground_truth(ds, PerturbMode::Exact, 0, 1, false).detections;
    const Resolution shuffled[] = {{1920, 1080}, {256, 144}, {640, 360}};
    const auto points = resolution_sweep(ds, dets, shuffled);
    ASSERT_EQ(points.size(), 3u);
    EXPECT_EQ(points[0].parameter, "256x144");
    EXPECT_EQ(points[2].parameter, "1920x1080");
    const Resolution bad[] = {{0, 10}};
    EXPECT_THROW(resolution_sweep(ds, dets, bad), ConfigError);
}

TEST(ResolutionSweep, ContinuousModeIsExactlyInvariantUnderUniformScaling)
{
    const auto ds = test::synthetic_dataset({}, 7);
    const auto dets = perturb_ground_truth(ds, PerturbMode::Shift, 6, 3, false).detections;
    const auto base = evaluate_detection(dets, ds);
    const Resolution uniform[] = {{450, 300}, {1800, 1200}, {257, 171}};
    for (const auto& p : resolution_sweep(ds, dets, uniform, {.continuous = true})) {
        EXPECT_NEAR(p.score.precision, base.precision, 1e-9);
        EXPECT_NEAR(p.score.recall, base.recall, 1e-9);
        EXPECT_NEAR(p.score.f_measure, base.f_measure, 1e-9);
    }
}

TEST(ResolutionSweep, IntegerDriftStaysSmallForTallEnoughBoxes)
{
    test::SyntheticSpec spec;
    spec.channels = {"a", "b", "c", "d"};
    spec.frames_per_video = 10;
    const auto ds = test::synthetic_dataset(spec, 8);
    const auto dets = perturb_ground_truth(ds, PerturbMode::Shift, 5, 4, false).detections;
    const double base = evaluate_detection(dets, ds).f_measure;
    for (const auto& p : resolution_sweep(ds, dets, kStandardResolutions)) {
        EXPECT_LE(std::abs(p.score.f_measure - base), 0.02) << p.parameter;
    }
}

TEST(ResolutionSweep, PrecomputedRunsOnlyRescaleGroundTruth)
{
    const auto ds = test::synthetic_dataset({}, 9);
    const auto exact = perturb_ground_truth(ds, PerturbMode::Exact, 0, 1, false).detections;
    std::vector<ResolutionRun> runs;
    for (const auto& r : kStandardResolutions) {
        runs.push_back({r, rescale_detections(exact, ds, r)});
    }
    const auto points = resolution_sweep(ds, runs);
    ASSERT_EQ(points.size(), kStandardResolutions.size());
    for (const auto& p : points) {
        EXPECT_DOUBLE_EQ(p.score.f_measure, 1.0) << p.parameter;
    }
}

TEST(EvaluateScaledContinuous, FactorLeavesScoresUnchanged)
{
    const auto ds = test::synthetic_dataset({}, 10);
    const auto dets = perturb_ground_truth(ds, PerturbMode::Dilate, 3, 1, false).detections;
    const auto base = evaluate_scaled_continuous(dets, ds, 1.0);
    EXPECT_NEAR(base.f_measure, evaluate_detection(dets, ds).f_measure, 1e-12);
    for (double factor : {0.28, 0.5, 1.7, 2.14, 13.0}) {
        const auto s = evaluate_scaled_continuous(dets, ds, factor);
        EXPECT_NEAR(s.precision, base.precision, 1e-9);
        EXPECT_NEAR(s.recall, base.recall, 1e-9);
    }
}

TEST(TrainingSubsets, NestedAndMeetBudgets)
{
    test::SyntheticSpec spec;
    spec.frames_per_video = 20;
    const auto ds = test::synthetic_dataset(spec, 11);
    const std::int64_t budgets[] = {10, 40, 100};
    const auto subsets = training_subsets(ds, budgets, 5);
    ASSERT_EQ(subsets.size(), 3u);

    std::map<FrameKey, std::int64_t> lines;
    for (const auto& f : ds.frames) {
        lines[f.key()] = static_cast<std::int64_t>(f.lines.size());
    }
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        std::int64_t n = 0;
        for (const auto& key : subsets[k]) {
            n += lines.at(key);
        }
        EXPECT_GE(n, budgets[k]);
        if (k > 0) {
            std::set<FrameKey> bigger(subsets[k].begin(), subsets[k].end());
            for (const auto& key : subsets[k - 1]) {
                EXPECT_TRUE(bigger.count(key));
            }
        }
        std::vector<std::size_t> positions;
        for (const auto& key : subsets[k]) {
            positions.push_back(*ds.find(key));
        }
        EXPECT_TRUE(std::is_sorted(positions.begin(), positions.end()));
    }
}

TEST(TrainingSubsets, DeterministicPerSeed)
{
    const auto ds = test::synthetic_dataset({}, 12);
    const std::int64_t budgets[] = {5};
    EXPECT_EQ(training_subsets(ds, budgets, 1), training_subsets(ds, budgets, 1));
}

TEST(TrainingSubsets, WholeCorpusBudget)
{
    const auto ds = test::synthetic_dataset({}, 13);
    const std::int64_t budgets[] = {line_total(ds)};
    const auto subsets = training_subsets(ds, budgets, 2);
    std::int64_t n = 0;
    for (const auto& key : subsets[0]) {
        n += static_cast<std::int64_t>(ds.frames[*ds.find(key)].lines.size());
    }
    EXPECT_EQ(n, line_total(ds));
}

TEST(TrainingSubsets, BudgetErrors)
{
    const auto ds = test::synthetic_dataset({}, 14);
    const std::int64_t too_many[] = {line_total(ds) + 1};
    try {
        training_subsets(ds, too_many, 1);
        FAIL();
    } catch (const BudgetError& e) {
        EXPECT_EQ(e.available(), line_total(ds));
    }
    const std::int64_t descending[] = {5, 3};
    EXPECT_THROW(training_subsets(ds, descending, 1), ConfigError);
}
