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


#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "utiv/anchors.hpp"
#include "utiv/dataset.hpp"
#include "utiv/dedup.hpp"
#include "utiv/detections.hpp"
#include "utiv/evaluation.hpp"
#include "utiv/experiments.hpp"
#include "utiv/log.hpp"
#include "utiv/report.hpp"
#include "utiv/service/http_server.hpp"

namespace fs = std::filesystem;

namespace utiv::cli {

namespace {

struct Options
{
    std::string root;
    std::string dets;
    std::vector<std::string> dets_list;
    std::string out;
    std::uint64_t seed = 0;
    std::string mode = "exact";
    double iou = 0.5;
    std::string format = "text";
    bool strict = false;

    double train_fraction = 0.8;
    bool stratify = false;
    std::string frames_dir;
    int threshold = 8;
    std::string anchor_config;
    int width = 0;
    int height = 0;
    double magnitude = 0.0;
    bool hybrid = false;
    std::string pairs;
    std::vector<std::string> resolutions;
    bool rescale_detections = false;
    bool continuous = false;
    std::vector<std::int64_t> counts;
    std::string host = "127.0.0.1";
    int port = 8080;
    bool allow_external = false;
};

class UsageError : public Error
{
public:
    using Error::Error;
};

// Shortest round-trip form, always with a decimal point: 1 -> "1.0".
std::string num(double v)
{
    auto s = fmt::format("{}", v);
    if (s.find_first_of(".einn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string prf_line(const PRFScore& s)
{
    return fmt::format("P={} R={} F={}", num(s.precision), num(s.recall), num(s.f_measure));
}

void write_text_file(const fs::path& path, const std::string& content)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << content;
    if (!file) {
        throw DataError(fmt::format("cannot write {}", path.string()));
    }
}

fs::path output_dir(const Options& o)
{
    fs::create_directories(o.out);
    return o.out;
}

Dataset open_dataset(const Options& o, bool check_bounds = true)
{
    ParseOptions parse;
    parse.strict = o.strict;
    parse.check_bounds = check_bounds;
    return load_dataset(o.root, parse);
}

void require_single_dets(const Options& o)
{
    if (o.dets.empty()) {
        throw UsageError("--dets is required");
    }
}

/// Detections file with the path prefixed to format errors.
DetectionSet load_detections(const std::string& path)
{
    try {
        return read_detections_file(path);
    } catch (const DetectionFormatError& e) {
        if (e.line() == 0) {
            throw DataError(fmt::format("{}: {}", path, e.what()));
        }
        const std::string what = e.what();
        const auto prefix = fmt::format("line {}: ", e.line());
        const auto message = what.starts_with(prefix) ? what.substr(prefix.size()) : what;
        throw DataError(fmt::format("{}:{}: {}", path, e.line(), message));
    }
}

// ---------------------------------------------------------------- subcommands

class Runner
{
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    int validate()
    {
        const auto ds = open_dataset(o_, false);
        const auto issues = validate_dataset(ds);
        std::size_t errors = 0;
        std::size_t warnings = 0;
        const char* sep = o_.format == "csv" ? "," : "\t";
        if (o_.format == "csv") {
            out_ << "severity,kind,frame,line,message\n";
        }
        for (const auto& issue : issues) {
            ++(issue.severity == IssueSeverity::Error ? errors : warnings);
            out_ << to_string(issue.severity) << sep << to_string(issue.kind) << sep << to_string(issue.frame)
                 << sep << (issue.line ? std::to_string(*issue.line) : "-") << sep << issue.message << "\n";
        }
        err_ << fmt::format("{} frames checked: {} errors, {} warnings\n", ds.frames.size(), errors, warnings);
        if (!o_.out.empty()) {
            std::ostringstream csv;
            csv << "severity,kind,frame,line,message\n";
            for (const auto& issue : issues) {
                csv << to_string(issue.severity) << "," << to_string(issue.kind) << "," << to_string(issue.frame)
                    << "," << (issue.line ? std::to_string(*issue.line) : "") << ",\"" << issue.message << "\"\n";
            }
            write_text_file(output_dir(o_) / "issues.csv", csv.str());
        }
        return errors > 0 || (o_.strict && warnings > 0) ? kDataError : kOk;
    }

    int stats()
    {
        const auto stats = dataset_stats(open_dataset(o_));
        out_ << (o_.format == "csv" ? stats_to_csv(stats) : stats_to_text(stats));
        if (!o_.out.empty()) {
            write_text_file(output_dir(o_) / "stats.csv", stats_to_csv(stats));
        }
        return kOk;
    }

    int split()
    {
        const auto ds = open_dataset(o_);
        const auto s = split_dataset(ds, o_.train_fraction, o_.seed, o_.stratify);
        std::string train;
        std::string test;
        for (const auto& k : s.train_frames) {
            train += to_string(k) + "\n";
        }
        for (const auto& k : s.test_frames) {
            test += to_string(k) + "\n";
        }
        if (!o_.out.empty()) {
            const auto dir = output_dir(o_);
            write_text_file(dir / "train.txt", train);
            write_text_file(dir / "test.txt", test);
        } else {
            out_ << "split,frame\n";
            for (const auto& k : s.train_frames) {
                out_ << "train," << to_string(k) << "\n";
            }
            for (const auto& k : s.test_frames) {
                out_ << "test," << to_string(k) << "\n";
            }
        }
        err_ << fmt::format("{} train, {} test (seed {})\n", s.train_frames.size(), s.test_frames.size(), s.seed);
        return kOk;
    }

    int dedup()
    {
        const auto result = dedup_frames(o_.frames_dir, o_.threshold);
        for (const auto& w : result.warnings) {
            err_ << "warning: " << w << "\n";
        }
        std::string listing;
        for (const auto& p : result.kept) {
            listing += p.filename().string() + "\n";
        }
        out_ << listing;
        if (!o_.out.empty()) {
            write_text_file(output_dir(o_) / "kept.txt", listing);
        }
        err_ << fmt::format("{} frames kept\n", result.kept.size());
        return kOk;
    }

    int anchors()
    {
        const AnchorConfig config = o_.anchor_config.empty() ? AnchorConfig{} : load_anchor_config(o_.anchor_config);
        utiv::validate(config);
        const auto shapes = generate_anchor_shapes(config);
        const bool tile = o_.width > 0 || o_.height > 0;
        if (tile && (o_.width <= 0 || o_.height <= 0)) {
            throw UsageError("--width and --height go together");
        }

        if (o_.format == "csv" && tile) {
            out_ << "index,x,y,width,height\n";
            const auto rects = tile_anchors(shapes, o_.width, o_.height, config);
            for (std::size_t i = 0; i < rects.size(); ++i) {
                const auto& r = rects[i];
                out_ << fmt::format("{},{},{},{},{}\n", i, r.x, r.y, r.width, r.height);
            }
        } else if (o_.format == "csv") {
            out_ << "index,width,height,scale,aspect_ratio\n";
            for (std::size_t i = 0; i < shapes.size(); ++i) {
                const auto& s = shapes[i];
                out_ << fmt::format("{},{},{},{},{}\n", i, s.width, s.height, s.scale, s.aspect_ratio);
            }
        } else {
            out_ << format_anchor_config(config) << "\n";
            out_ << fmt::format("{:>5}  {:>6}  {:>6}  {:>5}  {:>6}\n", "index", "width", "height", "scale", "aspect");
            for (std::size_t i = 0; i < shapes.size(); ++i) {
                const auto& s = shapes[i];
                out_ << fmt::format("{:>5}  {:>6}  {:>6}  {:>5}  {:>6}\n", i, s.width, s.height, s.scale,
                                    s.aspect_ratio);
            }
            if (tile) {
                out_ << fmt::format("\n{}x{}: {} anchors\n", o_.width, o_.height,
                                    tile_anchors(shapes, o_.width, o_.height, config).size());
            }
        }
        if (!o_.out.empty()) {
            write_text_file(output_dir(o_) / "anchors.cfg", format_anchor_config(config));
        }
        return kOk;
    }

    int synth()
    {
        const auto mode = parse_perturb_mode(o_.mode);
        if (!mode) {
            throw UsageError(fmt::format("unknown perturbation mode '{}'", o_.mode));
        }
        const auto ds = open_dataset(o_);
        const auto result = perturb_ground_truth(ds, *mode, o_.magnitude, o_.seed, o_.hybrid);
        for (const auto& w : result.warnings) {
            err_ << "warning: " << w << "\n";
        }
        const auto text = write_detections(result.detections);
        if (!o_.out.empty()) {
            write_text_file(output_dir(o_) / "detections.dets", text);
        } else {
            out_ << text;
        }
        return kOk;
    }

    int eval_detect()
    {
        require_single_dets(o_);
        const auto ds = open_dataset(o_);
        const auto score = evaluate_detection(load_detections(o_.dets), ds);
        ScoreTable table{"detection", {{"text", score}}};
        print_scores(table);
        emit(Report{{table}, {}});
        return kOk;
    }

    int eval_hybrid()
    {
        require_single_dets(o_);
        const auto ds = open_dataset(o_);
        const auto result = evaluate_hybrid(load_detections(o_.dets), ds);
        ScoreTable table{"hybrid", {}};
        for (auto script : kScripts) {
            table.rows.push_back({std::string(to_string(script)), result.per_script.at(script)});
        }
        table.rows.push_back({"combined", result.combined});
        print_scores(table);
        emit(Report{{table}, {}});
        return kOk;
    }

    int eval_script()
    {
        std::vector<std::pair<Script, Script>> pairs;
        if (!o_.pairs.empty()) {
            pairs = read_pairs(o_.pairs);
        } else {
            if (o_.dets.empty() || o_.root.empty()) {
                throw UsageError("give --pairs, or --root with --dets");
            }
            pairs = matched_pairs(open_dataset(o_), load_detections(o_.dets));
        }
        const auto matrix = confusion_matrix(pairs);
        const auto prf = class_prf(matrix);

        ScoreTable table{"script", {}};
        for (auto script : kScripts) {
            table.rows.push_back({std::string(to_string(script)), prf.at(script)});
        }
        const auto matrix_csv = confusion_csv(matrix);
        if (o_.format == "csv") {
            out_ << matrix_csv << "\n" << score_table_csv(table);
        } else {
            out_ << fmt::format("{:<9} {:>9} {:>9}\n", "truth", "urdu", "english");
            for (auto truth : kScripts) {
                out_ << fmt::format("{:<9} {:>9} {:>9}\n", to_string(truth), matrix.at(truth, Script::Urdu),
                                    matrix.at(truth, Script::English));
            }
            for (const auto& row : table.rows) {
                out_ << row.label << " " << prf_line(row.score) << "\n";
            }
        }
        if (!o_.out.empty()) {
            write_text_file(output_dir(o_) / "confusion.csv", matrix_csv);
        }
        emit(Report{{table}, {}});
        return kOk;
    }

    int diagnose()
    {
        require_single_dets(o_);
        const auto ds = open_dataset(o_);
        const auto report = localization_diagnostics(load_detections(o_.dets), ds, o_.iou);
        std::string text = fmt::format("iou_threshold {}\nmatches {}\nmisses {}\nfalse_alarms {}\n"
                                       "oversize {}\nundersize {}\nmean_size_ratio {}\n",
                                       num(report.iou_threshold), report.matches.size(), report.misses,
                                       report.false_alarms, report.oversize, report.undersize,
                                       num(report.mean_size_ratio));
        std::string histogram = "iou_bin,count\n";
        for (std::size_t i = 0; i < report.iou_histogram.size(); ++i) {
            histogram += fmt::format("{:.1f}-{:.1f},{}\n", i / 10.0, (i + 1) / 10.0, report.iou_histogram[i]);
        }
        std::string matches = "frame,gt,detection,iou,size_ratio\n";
        for (const auto& m : report.matches) {
            matches += fmt::format("{},{},{},{:.6f},{:.6f}\n", to_string(m.frame), m.gt_index, m.detection_index,
                                   m.iou, m.size_ratio);
        }
        out_ << (o_.format == "csv" ? matches : text + "\n" + histogram);
        if (!o_.out.empty()) {
            const auto dir = output_dir(o_);
            write_text_file(dir / "diagnostics.txt", text);
            write_text_file(dir / "iou_histogram.csv", histogram);
            write_text_file(dir / "matches.csv", matches);
        }
        return kOk;
    }

    int sweep_resolution()
    {
        std::vector<Resolution> resolutions;
        for (const auto& r : o_.resolutions) {
            resolutions.push_back(parse_resolution(r));
        }
        if (resolutions.empty()) {
            resolutions = kStandardResolutions;
        }
        if (o_.dets_list.empty()) {
            throw UsageError("--dets is required");
        }

        const auto ds = open_dataset(o_);
        std::vector<SweepPoint> points;
        if (o_.rescale_detections) {
            if (o_.dets_list.size() != 1) {
                throw UsageError("--rescale-detections takes a single --dets file at the dataset resolution");
            }
            points = resolution_sweep(ds, load_detections(o_.dets_list.front()), resolutions,
                                      SweepOptions{o_.continuous});
        } else {
            if (o_.continuous) {
                throw UsageError("--continuous needs --rescale-detections");
            }
            if (o_.dets_list.size() != resolutions.size()) {
                throw UsageError(fmt::format("{} --dets files for {} resolutions; give one per resolution",
                                             o_.dets_list.size(), resolutions.size()));
            }
            std::vector<ResolutionRun> runs;
            for (std::size_t i = 0; i < resolutions.size(); ++i) {
                runs.push_back({resolutions[i], load_detections(o_.dets_list[i])});
            }
            points = resolution_sweep(ds, runs);
        }

        SweepTable table{"resolution", std::move(points)};
        out_ << (o_.format == "csv" ? sweep_table_csv(table) : sweep_table_text(table));
        emit(Report{{}, {table}});
        return kOk;
    }

    int subsets()
    {
        if (o_.counts.empty()) {
            throw UsageError("--counts is required");
        }
        const auto ds = open_dataset(o_);
        const auto sets = training_subsets(ds, o_.counts, o_.seed);
        if (!o_.out.empty()) {
            const auto dir = output_dir(o_);
            for (std::size_t i = 0; i < sets.size(); ++i) {
                std::string listing;
                for (const auto& k : sets[i]) {
                    listing += to_string(k) + "\n";
                }
                write_text_file(dir / fmt::format("subset_{}.txt", o_.counts[i]), listing);
            }
        } else {
            out_ << "lines,frame\n";
            for (std::size_t i = 0; i < sets.size(); ++i) {
                for (const auto& k : sets[i]) {
                    out_ << o_.counts[i] << "," << to_string(k) << "\n";
                }
            }
        }
        for (std::size_t i = 0; i < sets.size(); ++i) {
            err_ << fmt::format("budget {}: {} frames\n", o_.counts[i], sets[i].size());
        }
        return kOk;
    }

    int serve()
    {
        service::AnnotationStore store(o_.root);
        service::AnnotationServer server(store, {o_.host, o_.port, o_.allow_external});
        const int port = server.bind();
        err_ << fmt::format("serving {} frames from {} on http://{}:{}\n", store.size(), o_.root, o_.host, port);
        err_.flush();

        active_server() = &server;
        std::signal(SIGINT, [](int) {
            if (auto* s = active_server()) {
                s->stop();
            }
        });
        std::signal(SIGTERM, SIG_DFL);
        server.listen();
        active_server() = nullptr;
        return kOk;
    }

private:
    static service::AnnotationServer*& active_server()
    {
        static service::AnnotationServer* server = nullptr;
        return server;
    }

    void print_scores(const ScoreTable& table)
    {
        if (o_.format == "csv") {
            out_ << score_table_csv(table);
            return;
        }
        if (table.rows.size() == 1) {
            out_ << prf_line(table.rows.front().score) << "\n";
            return;
        }
        for (const auto& row : table.rows) {
            out_ << row.label << " " << prf_line(row.score) << "\n";
        }
    }

    void emit(const Report& report)
    {
        if (!o_.out.empty()) {
            emit_report(report, output_dir(o_));
        }
    }

    std::vector<std::pair<Script, Script>> matched_pairs(const Dataset& ds, const DetectionSet& dets)
    {
        if (dets.mode != DetectionMode::Hybrid) {
            throw DataError("script identification needs detections labelled urdu or english");
        }
        std::vector<std::pair<Script, Script>> pairs;
        std::size_t unmatched = 0;
        for (const auto& frame : ds.frames) {
            const auto& found = dets.at(frame.key());
            RectRegion gt = boxes_of(frame);
            RectRegion boxes;
            for (const auto& d : found) {
                boxes.push_back(d.box);
            }
            const auto matches = greedy_match(gt, boxes, o_.iou);
            unmatched += gt.size() - matches.size();
            for (const auto& [g, d] : matches) {
                pairs.emplace_back(frame.lines[g].script, *script_of(found[d].label));
            }
        }
        if (unmatched > 0) {
            err_ << fmt::format("{} ground-truth lines had no detection at IoU >= {}\n", unmatched, num(o_.iou));
        }
        return pairs;
    }

    static std::vector<std::pair<Script, Script>> read_pairs(const fs::path& path)
    {
        std::ifstream in(path);
        if (!in) {
            throw DataError(fmt::format("cannot read {}", path.string()));
        }
        std::vector<std::pair<Script, Script>> pairs;
        std::string line;
        for (std::size_t number = 1; std::getline(in, line); ++number) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty() || line.front() == '#' || line == "truth,predicted") {
                continue;
            }
            const auto comma = line.find(',');
            const auto truth = parse_script(line.substr(0, comma));
            const auto predicted = comma == std::string::npos ? std::nullopt : parse_script(line.substr(comma + 1));
            if (!truth || !predicted) {
                throw DataError(fmt::format("{}:{}: expected 'truth,predicted' scripts, got '{}'", path.string(),
                                            number, line));
            }
            pairs.emplace_back(*truth, *predicted);
        }
        return pairs;
    }

    static std::string confusion_csv(const ConfusionMatrix& m)
    {
        std::string csv = "truth,urdu,english\n";
        for (auto truth : kScripts) {
            csv += fmt::format("{},{},{}\n", to_string(truth), m.at(truth, Script::Urdu),
                               m.at(truth, Script::English));
        }
        return csv;
    }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
};

// ---------------------------------------------------------------- argument wiring

void add_root(CLI::App& sub, Options& o)
{
    sub.add_option("--root", o.root, "Dataset root")->required();
}

void add_format(CLI::App& sub, Options& o)
{
    sub.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "text"}))
        ->capture_default_str();
}

void add_out(CLI::App& sub, Options& o)
{
    sub.add_option("--out", o.out, "Output directory; also receives the resolved run configuration");
}

void add_strict(CLI::App& sub, Options& o, const char* help = "Unknown XML elements/attributes are errors")
{
    sub.add_flag("--strict", o.strict, help);
}

void add_seed(CLI::App& sub, Options& o)
{
    sub.add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_dets(CLI::App& sub, Options& o)
{
    sub.add_option("--dets", o.dets, "Detections file")->required();
}

}   // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    log::init_from_env();

    Options o;
    CLI::App app{"Caption-text detection dataset and evaluation toolkit", "utiv"};
    app.require_subcommand(1);
    app.fallthrough(false);

    auto* validate = app.add_subcommand("validate", "Check ground truth for structural problems");
    add_root(*validate, o);
    add_strict(*validate, o, "Unknown XML content and validation warnings are errors");
    add_format(*validate, o);
    add_out(*validate, o);

    auto* stats = app.add_subcommand("stats", "Per-channel video, frame and line counts");
    add_root(*stats, o);
    add_strict(*stats, o);
    add_format(*stats, o);
    add_out(*stats, o);

    auto* split = app.add_subcommand("split", "Seeded train/test split of the frames");
    add_root(*split, o);
    add_strict(*split, o);
    add_seed(*split, o);
    add_out(*split, o);
    split->add_option("--train-fraction", o.train_fraction, "Fraction of frames for training")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    split->add_flag("--stratify", o.stratify, "Keep channel proportions");

    auto* dedup = app.add_subcommand("dedup", "Drop near-duplicate frames by difference hash");
    dedup->add_option("--frames", o.frames_dir, "Directory of frame images")->required();
    dedup->add_option("--threshold", o.threshold, "Hamming distance treated as duplicate")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    add_out(*dedup, o);

    auto* anchors = app.add_subcommand("anchors", "Show the anchor shapes, optionally tiled over a frame");
    anchors->add_option("--config", o.anchor_config, "Anchor configuration file");
    anchors->add_option("--width", o.width, "Frame width")->check(CLI::PositiveNumber);
    anchors->add_option("--height", o.height, "Frame height")->check(CLI::PositiveNumber);
    add_format(*anchors, o);
    add_out(*anchors, o);

    auto* synth = app.add_subcommand("synth", "Generate detections by perturbing the ground truth");
    add_root(*synth, o);
    add_strict(*synth, o);
    add_seed(*synth, o);
    add_out(*synth, o);
    synth->add_option("--mode", o.mode, "exact, dilate, erode, shift, drop or spurious")
        ->check(CLI::IsMember({"exact", "dilate", "erode", "shift", "drop", "spurious"}))
        ->capture_default_str();
    synth->add_option("--magnitude", o.magnitude, "Pixels, probability (drop) or boxes per frame (spurious)")
        ->capture_default_str();
    synth->add_flag("--hybrid", o.hybrid, "Label boxes with their script instead of text");

    auto* eval_detect = app.add_subcommand("eval-detect", "Area-based precision, recall and F-measure");
    add_root(*eval_detect, o);
    add_strict(*eval_detect, o);
    add_dets(*eval_detect, o);
    add_format(*eval_detect, o);
    add_out(*eval_detect, o);

    auto* eval_hybrid = app.add_subcommand("eval-hybrid", "Per-script and combined scores of labelled detections");
    add_root(*eval_hybrid, o);
    add_strict(*eval_hybrid, o);
    add_dets(*eval_hybrid, o);
    add_format(*eval_hybrid, o);
    add_out(*eval_hybrid, o);

    auto* eval_script = app.add_subcommand("eval-script", "Script identification confusion matrix and scores");
    eval_script->add_option("--root", o.root, "Dataset root");
    eval_script->add_option("--dets", o.dets, "Labelled detections, matched to ground truth by IoU");
    eval_script->add_option("--pairs", o.pairs, "CSV of truth,predicted script pairs")->excludes("--dets");
    eval_script->add_option("--iou", o.iou, "Match threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    add_strict(*eval_script, o);
    add_format(*eval_script, o);
    add_out(*eval_script, o);

    auto* diagnose = app.add_subcommand("diagnose", "Greedy IoU matching diagnostics");
    add_root(*diagnose, o);
    add_strict(*diagnose, o);
    add_dets(*diagnose, o);
    diagnose->add_option("--iou", o.iou, "Match threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    add_format(*diagnose, o);
    add_out(*diagnose, o);

    auto* sweep = app.add_subcommand("sweep-resolution", "Scores across frame resolutions");
    add_root(*sweep, o);
    add_strict(*sweep, o);
    sweep->add_option("--dets", o.dets_list, "Detections; one per resolution unless --rescale-detections")
        ->required();
    sweep->add_option("--resolutions", o.resolutions, "WxH list (default: 256x144 ... 1920x1080)")
        ->delimiter(',');
    sweep->add_flag("--rescale-detections", o.rescale_detections, "Rescale one detection file with the gt");
    sweep->add_flag("--continuous", o.continuous, "Score in continuous coordinates (no rounding)");
    add_format(*sweep, o);
    add_out(*sweep, o);

    auto* subsets = app.add_subcommand("subsets", "Nested training subsets by text-line budget");
    add_root(*subsets, o);
    add_strict(*subsets, o);
    add_seed(*subsets, o);
    add_out(*subsets, o);
    subsets->add_option("--counts", o.counts, "Ascending line budgets")->delimiter(',')->required();

    auto* serve = app.add_subcommand("serve", "Annotation service over HTTP");
    add_root(*serve, o);
    serve->add_option("--host", o.host, "Bind address")->capture_default_str();
    serve->add_option("--port", o.port, "Port (0 picks one)")->check(CLI::Range(0, 65535))->capture_default_str();
    serve->add_flag("--allow-external", o.allow_external, "Permit binding a non-loopback address");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    Runner runner(o, out, err);
    try {
        if (!o.out.empty()) {
            fs::create_directories(o.out);
            write_text_file(fs::path(o.out) / "run_config.toml",
                            fmt::format("# utiv {}\n{}", chosen->get_name(), chosen->config_to_str(true, false)));
        }

        const std::string name = chosen->get_name();
        if (name == "validate") return runner.validate();
        if (name == "stats") return runner.stats();
        if (name == "split") return runner.split();
        if (name == "dedup") return runner.dedup();
        if (name == "anchors") return runner.anchors();
        if (name == "synth") return runner.synth();
        if (name == "eval-detect") return runner.eval_detect();
        if (name == "eval-hybrid") return runner.eval_hybrid();
        if (name == "eval-script") return runner.eval_script();
        if (name == "diagnose") return runner.diagnose();
        if (name == "sweep-resolution") return runner.sweep_resolution();
        if (name == "subsets") return runner.subsets();
        if (name == "serve") return runner.serve();
        err << "unhandled subcommand " << name << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << chosen->help();
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
}

int run(const std::vector<std::string>& args)
{
    return run(args, std::cout, std::cerr);
}

}   // namespace utiv::cli
