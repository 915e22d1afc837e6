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


#include "utiv/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "utiv/error.hpp"

namespace fs = std::filesystem;

namespace utiv {

namespace {

constexpr std::string_view kSummaryHeader = "# utiv evaluation report\n";

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string score_columns(const PRFScore& s)
{
    return fmt::format("{:.6f},{:.6f},{:.6f}", s.precision, s.recall, s.f_measure);
}

std::string text_table(std::string_view name, std::string_view first_column,
                       const std::vector<std::pair<std::string, PRFScore>>& rows)
{
    std::size_t width = first_column.size();
    for (const auto& [label, score] : rows) {
        width = std::max(width, label.size());
    }

    std::string out = fmt::format("== {} ==\n", name);
    out += fmt::format("{:<{}}  {:>9}  {:>9}  {:>9}  {:>4}  {:>4}  {:>4}\n", first_column, width, "precision",
                       "recall", "f_measure", "P", "R", "F");
    for (const auto& [label, s] : rows) {
        out += fmt::format("{:<{}}  {:>9.6f}  {:>9.6f}  {:>9.6f}  {:>4.2f}  {:>4.2f}  {:>4.2f}\n", label, width,
                           s.precision, s.recall, s.f_measure, round_to(s.precision, 2), round_to(s.recall, 2),
                           round_to(s.f_measure, 2));
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError(fmt::format("cannot write {}", path.string()));
    }
    out << content;
    if (!out) {
        throw DataError(fmt::format("short write to {}", path.string()));
    }
}

}   // namespace

std::string score_table_csv(const ScoreTable& table)
{
    std::string out = "label,precision,recall,f_measure\n";
    for (const auto& row : table.rows) {
        out += csv_field(row.label) + "," + score_columns(row.score) + "\n";
    }
    return out;
}

std::string sweep_table_csv(const SweepTable& table)
{
    std::string out = "param,precision,recall,f_measure\n";
    for (const auto& p : table.points) {
        out += csv_field(p.parameter) + "," + score_columns(p.score) + "\n";
    }
    return out;
}

std::string score_table_text(const ScoreTable& table)
{
    std::vector<std::pair<std::string, PRFScore>> rows;
    for (const auto& row : table.rows) {
        rows.emplace_back(row.label, row.score);
    }
    return text_table(table.name, "label", rows);
}

std::string sweep_table_text(const SweepTable& table)
{
    std::vector<std::pair<std::string, PRFScore>> rows;
    for (const auto& p : table.points) {
        rows.emplace_back(p.parameter, p.score);
    }
    return text_table(table.name, "param", rows);
}

std::string report_summary(const Report& report)
{
    std::string out(kSummaryHeader);
    for (const auto& t : report.scores) {
        out += "\n" + score_table_text(t);
    }
    for (const auto& t : report.sweeps) {
        out += "\n" + sweep_table_text(t);
    }
    return out;
}

std::vector<fs::path> emit_report(const Report& report, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DataError(fmt::format("cannot create report directory {}", dir.string()));
    }

    std::vector<fs::path> written;
    for (const auto& t : report.scores) {
        written.push_back(dir / (t.name + ".csv"));
        write_file(written.back(), score_table_csv(t));
    }
    for (const auto& t : report.sweeps) {
        written.push_back(dir / (t.name + ".csv"));
        write_file(written.back(), sweep_table_csv(t));
    }
    written.push_back(dir / "summary.txt");
    write_file(written.back(), report_summary(report));
    return written;
}

}   // namespace utiv
