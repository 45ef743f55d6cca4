#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rba {

/// Per-image angle statistics with population (1/n) denominators.
struct ImageStats {
    std::string image_id;
    int count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double var = 0.0;

    /// Mean, std and var are meaningless when the image has no angles.
    bool defined() const { return count > 0; }
};

struct CorpusStats {
    int k = 0;
    double mean_avg_angle = 0.0;
    double mean_std = 0.0;
    double mean_var = 0.0;
    double avg_num_angles = 0.0;
};

struct GtComparison {
    double mae = 0.0;
    double mse = 0.0;
    int compared = 0;
    int dropped = 0;  // images where the prediction had no angles
};

struct BenchReport {
    std::string method;
    CorpusStats corpus;
    std::optional<double> mae;  // empty for the ground-truth row or when nothing was comparable
    std::optional<double> mse;
    int dropped = 0;
    std::vector<ImageStats> per_image;
};

/// Angles measured on one image, in degrees.
struct ImageAngles {
    std::string image_id;
    std::vector<double> angles;
};

struct MethodAngles {
    std::string name;
    std::vector<ImageAngles> images;
};

ImageStats image_stats(const std::vector<double>& angles, std::string image_id = {});

/// Means of the per-image fields. Undefined images still count towards
/// avg_num_angles (with n = 0). Throws DomainError for an empty corpus.
CorpusStats corpus_stats(const std::vector<ImageStats>& per_image);

/// MAE/MSE between per-image mean angles, matched by image_id. Predictions
/// without angles are skipped and counted in `dropped`; with nothing left,
/// mae and mse are NaN. Throws DomainError when the id sets differ.
GtComparison compare_to_gt(const std::vector<ImageStats>& pred, const std::vector<ImageStats>& gt);

/// The ground-truth row first (no MAE/MSE), then one row per method in order.
std::vector<BenchReport> emit_benchmark(const std::vector<MethodAngles>& methods, const MethodAngles& gt);

std::string benchmark_markdown(const std::vector<BenchReport>& reports);
std::string benchmark_json(const std::vector<BenchReport>& reports);

}  // namespace rba
