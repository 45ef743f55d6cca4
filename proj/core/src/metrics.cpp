#include "rba/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "rba/errors.hpp"

namespace rba {

ImageStats image_stats(const std::vector<double>& angles, std::string image_id) {
    ImageStats s;
    s.image_id = std::move(image_id);
    s.count = static_cast<int>(angles.size());
    if (angles.empty()) return s;
    const double n = static_cast<double>(angles.size());
    double sum = 0.0;
    for (double a : angles) sum += a;
    s.mean = sum / n;
    double sq = 0.0;
    for (double a : angles) sq += (a - s.mean) * (a - s.mean);
    s.var = sq / n;
    s.stddev = std::sqrt(s.var);
    return s;
}

CorpusStats corpus_stats(const std::vector<ImageStats>& per_image) {
    if (per_image.empty()) throw DomainError("corpus_stats: empty corpus");
    CorpusStats c;
    c.k = static_cast<int>(per_image.size());
    int defined = 0;
    double count_sum = 0.0;
    for (const ImageStats& s : per_image) {
        count_sum += s.count;
        if (!s.defined()) continue;
        ++defined;
        c.mean_avg_angle += s.mean;
        c.mean_std += s.stddev;
        c.mean_var += s.var;
    }
    c.avg_num_angles = count_sum / c.k;
    if (defined > 0) {
        c.mean_avg_angle /= defined;
        c.mean_std /= defined;
        c.mean_var /= defined;
    } else {
        c.mean_avg_angle = c.mean_std = c.mean_var = std::nan("");
    }
    return c;
}

GtComparison compare_to_gt(const std::vector<ImageStats>& pred, const std::vector<ImageStats>& gt) {
    std::map<std::string, const ImageStats*> by_id;
    for (const ImageStats& g : gt) {
        if (!by_id.emplace(g.image_id, &g).second) throw DomainError("duplicate ground-truth image id: " + g.image_id);
    }
    if (pred.size() != gt.size()) throw DomainError("prediction and ground truth cover different images");
    GtComparison r;
    double abs_sum = 0.0, sq_sum = 0.0;
    for (const ImageStats& p : pred) {
        auto it = by_id.find(p.image_id);
        if (it == by_id.end()) throw DomainError("image not in ground truth: " + p.image_id);
        const ImageStats& g = *it->second;
        by_id.erase(it);
        if (!p.defined() || !g.defined()) {
            ++r.dropped;
            continue;
        }
        const double d = p.mean - g.mean;
        abs_sum += std::abs(d);
        sq_sum += d * d;
        ++r.compared;
    }
    if (r.compared == 0) {
        r.mae = r.mse = std::nan("");
        return r;
    }
    r.mae = abs_sum / r.compared;
    r.mse = sq_sum / r.compared;
    return r;
}

namespace {

std::vector<ImageStats> stats_of(const MethodAngles& m) {
    std::vector<ImageStats> out;
    out.reserve(m.images.size());
    for (const ImageAngles& img : m.images) out.push_back(image_stats(img.angles, img.image_id));
    return out;
}

std::string fmt(double v, int decimals) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

nlohmann::ordered_json number_or_null(double v) { return std::isnan(v) ? nlohmann::ordered_json() : nlohmann::ordered_json(v); }

}  // namespace

std::vector<BenchReport> emit_benchmark(const std::vector<MethodAngles>& methods, const MethodAngles& gt) {
    std::vector<BenchReport> out;
    BenchReport g;
    g.method = gt.name.empty() ? "GT" : gt.name;
    g.per_image = stats_of(gt);
    g.corpus = corpus_stats(g.per_image);
    out.push_back(g);
    for (const MethodAngles& m : methods) {
        BenchReport r;
        r.method = m.name;
        r.per_image = stats_of(m);
        r.corpus = corpus_stats(r.per_image);
        const GtComparison cmp = compare_to_gt(r.per_image, g.per_image);
        if (cmp.compared > 0) {
            r.mae = cmp.mae;
            r.mse = cmp.mse;
        }
        r.dropped = cmp.dropped;
        out.push_back(std::move(r));
    }
    return out;
}

std::string benchmark_markdown(const std::vector<BenchReport>& reports) {
    std::string s = "| Method | Avg. Num. of Angles | Mean Avg. Angle | MAE | MSE | Mean Std. | Mean Var. |\n";
    s += "|---|---|---|---|---|---|---|\n";
    for (const BenchReport& r : reports) {
        s += "| " + r.method + " | " + fmt(std::round(r.corpus.avg_num_angles), 0) + " | " +
             fmt(r.corpus.mean_avg_angle, 2) + " | " + (r.mae ? fmt(*r.mae, 3) : "NA") + " | " +
             (r.mse ? fmt(*r.mse, 3) : "NA") + " | " + fmt(r.corpus.mean_std, 3) + " | " +
             fmt(r.corpus.mean_var, 3) + " |\n";
    }
    return s;
}

std::string benchmark_json(const std::vector<BenchReport>& reports) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const BenchReport& r : reports) {
        nlohmann::ordered_json row;
        row["method"] = r.method;
        row["k"] = r.corpus.k;
        row["avg_num_angles"] = r.corpus.avg_num_angles;
        row["mean_avg_angle"] = number_or_null(r.corpus.mean_avg_angle);
        row["mae"] = r.mae ? nlohmann::ordered_json(*r.mae) : nlohmann::ordered_json();
        row["mse"] = r.mse ? nlohmann::ordered_json(*r.mse) : nlohmann::ordered_json();
        row["mean_std"] = number_or_null(r.corpus.mean_std);
        row["mean_var"] = number_or_null(r.corpus.mean_var);
        row["dropped_images"] = r.dropped;
        auto& per = row["per_image"] = nlohmann::ordered_json::array();
        for (const ImageStats& s : r.per_image) {
            nlohmann::ordered_json e;
            e["image_id"] = s.image_id;
            e["count"] = s.count;
            e["mean"] = s.defined() ? nlohmann::ordered_json(s.mean) : nlohmann::ordered_json();
            e["std"] = s.defined() ? nlohmann::ordered_json(s.stddev) : nlohmann::ordered_json();
            e["var"] = s.defined() ? nlohmann::ordered_json(s.var) : nlohmann::ordered_json();
            per.push_back(std::move(e));
        }
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

}  // namespace rba
