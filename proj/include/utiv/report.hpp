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
#include <vector>

#include "utiv/evaluation.hpp"
#include "utiv/experiments.hpp"

namespace utiv {

struct ScoreRow
{
    std::string label;   // e.g. "Faster R-CNN / urdu"
    PRFScore score;
};

struct ScoreTable
{
    std::string name;   // also the CSV file stem
    std::vector<ScoreRow> rows;
};

struct SweepTable
{
    std::string name;
    std::vector<SweepPoint> points;
};

struct Report
{
    std::vector<ScoreTable> scores;
    std::vector<SweepTable> sweeps;
};

/// `label,precision,recall,f_measure` at full precision.
std::string score_table_csv(const ScoreTable& table);
/// `param,precision,recall,f_measure`, one row per point.
std::string sweep_table_csv(const SweepTable& table);

/// Aligned plain-text table: full-precision columns plus the 2-decimal
/// rounded values used for comparison with published tables.
std::string score_table_text(const ScoreTable& table);
std::string sweep_table_text(const SweepTable& table);

std::string report_summary(const Report& report);

/// Writes `<name>.csv` per table and `summary.txt` into `dir`, creating it if
/// needed. Output bytes depend only on the report. Throws DataError when the
/// destination cannot be written.
std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& dir);

}   // namespace utiv
