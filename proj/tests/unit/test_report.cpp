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


#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "utiv/report.hpp"

using namespace utiv;

namespace {

const std::filesystem::path kGolden = std::filesystem::path(UTIV_TEST_DATA_DIR) / "golden";

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Hybrid detector table with one row per detector and script.
Report hybrid_report()
{
    ScoreTable t{"hybrid", {}};
    const struct
    {
        const char* name;
        double up, ur, ep, er;
    } rows[] = {
        {"SSD", 0.82, 0.78, 0.82, 0.70},
        {"R-FCN", 0.85, 0.90, 0.77, 0.84},
        {"Faster R-CNN", 0.87, 0.95, 0.81, 0.94},
        {"Yolo", 0.64, 0.70, 0.62, 0.67},
    };
    for (const auto& r : rows) {
        t.rows.push_back({std::string(r.name) + " / urdu", make_score(r.up, r.ur)});
        t.rows.push_back({std::string(r.name) + " / english", make_score(r.ep, r.er)});
    }
    SweepTable s{"resolution", {}};
    for (const auto& res : {Resolution{256, 144}, Resolution{900, 600}}) {
        s.points.push_back({to_string(res), double(res.width) * res.height, make_score(0.9, 0.8)});
    }
    return {{t}, {s}};
}

}   // namespace

TEST(Report, EmptyReportIsHeaderOnly)
{
    EXPECT_EQ(report_summary({}), "# utiv evaluation report\n");
}

TEST(Report, ScoreCsvQuotesLabels)
{
    const ScoreTable t{"t", {{"a,b", make_score(1.0, 0.5)}, {"say \"hi\"", make_score(0.25, 0.25)}}};
    EXPECT_EQ(score_table_csv(t), "label,precision,recall,f_measure\n"
                                  "\"a,b\",1.000000,0.500000,0.666667\n"
                                  "\"say \"\"hi\"\"\",0.250000,0.250000,0.250000\n");
}

TEST(Report, SweepCsvRows)
{
    const auto r = hybrid_report();
    EXPECT_EQ(sweep_table_csv(r.sweeps[0]), "param,precision,recall,f_measure\n"
                                            "256x144,0.900000,0.800000,0.847059\n"
                                            "900x600,0.900000,0.800000,0.847059\n");
}

TEST(Report, SummaryMatchesGolden)
{
    EXPECT_EQ(report_summary(hybrid_report()), slurp(kGolden / "hybrid_summary.txt"));
}

TEST(Report, RoundedColumnsReproducePublishedFMeasures)
{
    const auto text = score_table_text(hybrid_report().scores[0]);
    // Two-decimal F for Faster R-CNN urdu/english and Yolo english.
    EXPECT_NE(text.find("0.87  0.95  0.91"), std::string::npos) << text;
    EXPECT_NE(text.find("0.81  0.94  0.87"), std::string::npos) << text;
    EXPECT_NE(text.find("0.62  0.67  0.64"), std::string::npos) << text;
}

TEST(Report, EmitWritesDeterministicFiles)
{
    test::TempDir dir;
    const auto report = hybrid_report();
    const auto first = emit_report(report, dir / "a");
    const auto second = emit_report(report, dir / "b");
    ASSERT_EQ(first.size(), 3u);
    for (std::size_t i = 0; i < first.size(); ++i) {
        EXPECT_EQ(first[i].filename(), second[i].filename());
        EXPECT_EQ(slurp(first[i]), slurp(second[i]));
    }
    EXPECT_EQ(slurp(dir / "a" / "hybrid.csv"), score_table_csv(report.scores[0]));
    EXPECT_EQ(slurp(dir / "a" / "summary.txt"), report_summary(report));
}

TEST(Report, UnwritableDestination)
{
    test::TempDir dir;
    std::ofstream(dir / "file") << "x";
    EXPECT_THROW(emit_report(hybrid_report(), dir / "file"), DataError);
}
