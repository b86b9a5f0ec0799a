#include "report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "gwshm/errors.hpp"

namespace gwshm::cli {

namespace {

nlohmann::json stats_to_json(const ErrorStats& stats) {
    return {{"mean", stats.mean},   {"std_dev", stats.std_dev}, {"min", stats.min},
            {"q25", stats.q25},     {"median", stats.median},   {"q75", stats.q75},
            {"max", stats.max}};
}

std::string format_value(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

}  // namespace

void write_eval_report_json(const std::filesystem::path& file, const EvalReport& report) {
    nlohmann::json cases = nlohmann::json::array();
    for (const CaseReport& c : report.cases) {
        nlohmann::json item = {{"name", c.name},
                               {"condition", to_string(c.condition)},
                               {"size_mm", c.size_mm},
                               {"n", c.n},
                               {"counts",
                                {{"tp", c.true_positive},
                                 {"fp", c.false_positive},
                                 {"tn", c.true_negative},
                                 {"fn", c.false_negative}}},
                               {"accuracy_pct", c.accuracy_pct},
                               {"errors", stats_to_json(c.errors)}};
        if (c.f1_pct) item["f1_pct"] = *c.f1_pct;
        cases.push_back(std::move(item));
    }

    const nlohmann::json doc = {{"schema_version", 1},
                                {"threshold", report.threshold},
                                {"train_error_mean", report.train_error_mean},
                                {"train_error_std", report.train_error_std},
                                {"cases", std::move(cases)}};

    std::ofstream out(file);
    if (!out) throw IoError("cannot write report: " + file.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing report: " + file.string());
}

void write_errors_csv(const std::filesystem::path& file, const EvalReport& report) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write errors CSV: " + file.string());
    out << "record_id,condition,size_mm,error,prediction\n";
    for (const RecordOutcome& o : report.outcomes)
        out << o.record_id << ',' << to_string(o.condition) << ',' << format_value(o.size_mm)
            << ',' << format_value(o.error) << ',' << to_string(o.verdict) << '\n';
    if (!out) throw IoError("failed writing errors CSV: " + file.string());
}

void write_error_histogram_svg(const std::filesystem::path& file, const EvalReport& report) {
    constexpr int kWidth = 720;
    constexpr int kHeight = 420;
    constexpr int kMarginLeft = 60;
    constexpr int kMarginBottom = 50;
    constexpr int kMarginTop = 30;
    constexpr int kMarginRight = 20;
    constexpr int kBins = 48;

    std::map<std::string, std::vector<double>> by_condition;
    double max_error = report.threshold;
    for (const RecordOutcome& o : report.outcomes) {
        by_condition[to_string(o.condition)].push_back(o.error);
        max_error = std::max(max_error, o.error);
    }
    if (by_condition.empty()) throw EmptyDataset("no outcomes to plot");
    if (max_error <= 0.0) max_error = 1.0;
    max_error *= 1.05;

    static const std::map<std::string, std::string> palette = {
        {"baseline", "#2b7bba"}, {"trf", "#d1495b"}, {"lfa", "#66a182"}};

    std::map<std::string, std::vector<int>> histograms;
    int max_count = 1;
    for (const auto& [condition, errors] : by_condition) {
        std::vector<int> bins(kBins, 0);
        for (double e : errors) {
            int bin = static_cast<int>(e / max_error * kBins);
            bin = std::clamp(bin, 0, kBins - 1);
            ++bins[bin];
        }
        max_count = std::max(max_count, *std::max_element(bins.begin(), bins.end()));
        histograms[condition] = std::move(bins);
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto x_of = [&](double error) { return kMarginLeft + error / max_error * plot_w; };
    const auto y_of = [&](int count) {
        return kMarginTop + plot_h * (1.0 - static_cast<double>(count) / max_count);
    };

    std::ofstream out(file);
    if (!out) throw IoError("cannot write SVG: " + file.string());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

    const double bin_w = plot_w / kBins;
    for (const auto& [condition, bins] : histograms) {
        const auto color_it = palette.find(condition);
        const std::string& color = color_it == palette.end() ? palette.begin()->second
                                                             : color_it->second;
        for (int b = 0; b < kBins; ++b) {
            if (bins[b] == 0) continue;
            const double x = kMarginLeft + b * bin_w;
            const double y = y_of(bins[b]);
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bin_w * 0.96
                << "\" height=\"" << (kMarginTop + plot_h - y) << "\" fill=\"" << color
                << "\" fill-opacity=\"0.45\"/>\n";
        }
    }

    // threshold marker
    const double tx = x_of(report.threshold);
    out << "<line x1=\"" << tx << "\" y1=\"" << kMarginTop << "\" x2=\"" << tx << "\" y2=\""
        << kMarginTop + plot_h
        << "\" stroke=\"#444\" stroke-dasharray=\"6 3\" stroke-width=\"1.5\"/>\n"
        << "<text x=\"" << tx + 4 << "\" y=\"" << kMarginTop + 14
        << "\" font-family=\"sans-serif\" font-size=\"12\">threshold</text>\n";

    // legend and axis labels
    int legend_y = kMarginTop + 10;
    for (const auto& [condition, bins] : histograms) {
        (void)bins;
        const auto color_it = palette.find(condition);
        const std::string& color = color_it == palette.end() ? palette.begin()->second
                                                             : color_it->second;
        out << "<rect x=\"" << kWidth - 130 << "\" y=\"" << legend_y - 10
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\" fill-opacity=\"0.45\"/>\n"
            << "<text x=\"" << kWidth - 112 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << condition << "</text>\n";
        legend_y += 18;
    }
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << "reconstruction error (MSE)</text>\n"
        << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" transform=\"rotate(-90 16 " << kMarginTop + plot_h / 2
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">count</text>\n"
        << "<text x=\"" << kMarginLeft << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n"
        << "<text x=\"" << kMarginLeft + plot_w - 30 << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_value(max_error)
        << "</text>\n";

    out << "</svg>\n";
    if (!out) throw IoError("failed writing SVG: " + file.string());
}

}  // namespace gwshm::cli
