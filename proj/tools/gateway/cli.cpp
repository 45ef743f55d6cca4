#include "cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include <rba/annostore.hpp>
#include <rba/errors.hpp>
#include <rba/graph_io.hpp>
#include <rba/image_io.hpp>
#include <rba/metrics.hpp>
#include <rba/pipeline.hpp>
#include <rba/rootmap.hpp>

#include "channels.hpp"
#include "service.hpp"

namespace rba::gateway {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) { write_file_atomic(path, bytes); }

BifurcationPredicate parse_predicate(const std::string& s) {
    if (s == "count") return BifurcationPredicate::window_count;
    if (s == "components") return BifurcationPredicate::branch_components;
    throw ParameterError("unknown predicate '" + s + "' (expected count or components)");
}

Point parse_point(const std::string& s) {
    int x = 0, y = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d,%d%c", &x, &y, &tail) != 2) throw ParameterError("expected X,Y but got '" + s + "'");
    return {x, y};
}

BinaryMask load_mask(const fs::path& path, int threshold = 1) {
    return binarize(load_gray(path), static_cast<std::uint8_t>(threshold));
}

struct WalkerFlags {
    std::optional<std::uint64_t> seed;
    int prune_step = 10;
    int neighbor_threshold = 3;
    std::string predicate = "components";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Random start pixel seed (default: first foreground pixel)");
        cmd->add_option("--prune-step", prune_step, "Pixels between prune nodes")->check(CLI::Range(2, 1 << 20));
        cmd->add_option("--neighbor-threshold", neighbor_threshold, "T for the count predicate")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--predicate", predicate, "count or components")
            ->check(CLI::IsMember({"count", "components"}));
    }

    WalkerParams params() const {
        WalkerParams p;
        p.rng_seed = seed;
        p.prune_step = prune_step;
        p.neighbor_threshold = neighbor_threshold;
        p.predicate = parse_predicate(predicate);
        return p;
    }
};

std::vector<fs::path> json_files(const fs::path& dir) {
    std::vector<fs::path> out;
    if (fs::is_regular_file(dir)) return {dir};
    if (!fs::is_directory(dir)) throw IoError("file not found: " + dir.string());
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Retinal branching-angle toolkit"};
    app.require_subcommand(1);
    std::function<void()> action;

    // enhance
    std::string en_in, en_out, en_channel = "green";
    int en_kernel = 0;
    bool en_mean = false;
    auto* enhance = app.add_subcommand("enhance", "Write an enhanced view of an image as PNG");
    enhance->add_option("input", en_in, "Fundus image")->required();
    enhance->add_option("--out,-o", en_out, "Output PNG")->required();
    enhance->add_option("--channel", en_channel, "rgb, green, edges or highpass")
        ->check(CLI::IsMember({"rgb", "green", "edges", "highpass"}));
    enhance->add_option("--kernel", en_kernel, "Kernel size (default 5 for edges, 51 for highpass)");
    enhance->add_flag("--mean-blur", en_mean, "Mean instead of Gaussian blur for highpass");
    enhance->callback([&] {
        action = [&] {
            write_bytes(en_out, render_channel_png(load_image(en_in), {parse_channel(en_channel), en_kernel, en_mean}));
        };
    });

    // skeletonize
    std::string sk_in, sk_out;
    int sk_threshold = 1, sk_min = 5;
    auto* skel = app.add_subcommand("skeletonize", "Binarize and thin a segmentation map");
    skel->add_option("input", sk_in)->required();
    skel->add_option("output", sk_out)->required();
    skel->add_option("--threshold", sk_threshold, "Foreground when value >= threshold")->check(CLI::Range(1, 255));
    skel->add_option("--min-component", sk_min, "Drop components smaller than this")->check(CLI::NonNegativeNumber);
    skel->callback([&] {
        action = [&] {
            SkeletonParams p;
            p.threshold = static_cast<std::uint8_t>(sk_threshold);
            p.min_component = sk_min;
            write_png(sk_out, mask_to_gray(skeletonize(load_gray(sk_in), p)));
        };
    });

    // detect
    std::string de_in, de_out;
    WalkerFlags de_walker;
    auto* detect = app.add_subcommand("detect", "Keypoint graph of a mask or skeleton");
    detect->add_option("input", de_in)->required();
    detect->add_option("--out,-o", de_out, "Graph JSON")->required();
    de_walker.add_to(detect);
    detect->callback([&] {
        action = [&] {
            const BinaryMask s = mask_skeleton(load_mask(de_in));
            if (count_foreground(s) == 0) throw DomainError("input has no foreground");
            const WalkerParams wp = de_walker.params();
            write_graph(detect_keypoints(s, pick_initial(s, wp), wp), de_out);
        };
    });

    // root
    std::string ro_in, ro_out, ro_heat;
    double ro_sigma = 21.0;
    WalkerFlags ro_walker;
    auto* root = app.add_subcommand("root", "Root the keypoint graph at the bifurcation-density peak");
    root->add_option("input", ro_in)->required();
    root->add_option("--out,-o", ro_out, "Graph JSON")->required();
    root->add_option("--heatmap", ro_heat, "Write the max-normalized heatmap PNG");
    root->add_option("--sigma", ro_sigma, "Gaussian sigma in pixels")->check(CLI::PositiveNumber);
    ro_walker.add_to(root);
    root->callback([&] {
        action = [&] {
            const BinaryMask s = mask_skeleton(load_mask(ro_in));
            if (count_foreground(s) == 0) throw DomainError("input has no foreground");
            const RootedDetection r = rooted_detection_full(s, ro_walker.params(), ro_sigma);
            if (r.fell_back) std::cerr << "warning: no bifurcation found, graph starts at the initial pixel\n";
            write_graph(r.graph, ro_out);
            if (!ro_heat.empty()) write_png(ro_heat, heatmap_to_gray(r.heat));
        };
    });

    // angles
    std::string an_in, an_out, an_policy = "prune", an_overlay, an_background, an_id;
    auto* angles = app.add_subcommand("angles", "Branching angles of a keypoint graph");
    angles->add_option("graph", an_in)->required();
    angles->add_option("--out,-o", an_out, "Angle document")->required();
    angles->add_option("--policy", an_policy)->check(CLI::IsMember({"prune", "all"}));
    angles->add_option("--overlay", an_overlay, "Render the angle map to this PNG");
    angles->add_option("--background", an_background, "Image drawn under the overlay");
    angles->add_option("--image-id", an_id, "image_id of the document (default: graph file stem)");
    angles->callback([&] {
        action = [&] {
            const VesselGraph g = read_graph(an_in);
            const auto list = compute_angle_map(g, an_policy == "all" ? AnglePolicy::all : AnglePolicy::prune_preferred);
            const std::string id = an_id.empty() ? fs::path(an_in).stem().string() : an_id;
            write_annotations(detections_to_annotations(list, id, g.width, g.height), an_out);
            if (!an_overlay.empty()) {
                const ColorImage bg = an_background.empty() ? ColorImage(g.width, g.height) : load_image(an_background);
                write_png(an_overlay, render_angle_overlay(bg, list));
            }
        };
    });

    // baseline
    std::string bl_method, bl_in, bl_out, bl_root;
    int bl_thresh = 5, bl_roi = 50;
    auto* baseline = app.add_subcommand("baseline", "Run one of the comparison methods on a mask");
    baseline->add_option("method", bl_method)->required()->check(CLI::IsMember({"line", "roi", "rule"}));
    baseline->add_option("input", bl_in)->required();
    baseline->add_option("--out,-o", bl_out, "Angle document")->required();
    baseline->add_option("--root", bl_root, "X,Y start pixel for roi (default: density peak)");
    baseline->add_option("--thresh", bl_thresh, "roi window-sum threshold")->check(CLI::Range(1, 9));
    baseline->add_option("--roi", bl_roi, "roi window size")->check(CLI::Range(3, 1 << 16));
    baseline->callback([&] {
        action = [&] {
            const BinaryMask m = load_mask(bl_in);
            PipelineParams p;
            p.roi_thresh = bl_thresh;
            p.roi_size = bl_roi;
            if (!bl_root.empty()) p.roi_root = parse_point(bl_root);
            const auto list = run_method(parse_method(bl_method), m, p);
            write_annotations(detections_to_annotations(list, fs::path(bl_in).stem().string(), m.width(), m.height()),
                              bl_out);
        };
    });

    // bench
    std::string be_gt, be_masks, be_out, be_table;
    std::vector<std::string> be_methods{"ours", "roi", "rule", "line"};
    auto* bench = app.add_subcommand("bench", "Benchmark methods against ground-truth annotations");
    bench->add_option("--gt", be_gt, "Directory of annotation documents")->required();
    bench->add_option("--masks", be_masks, "Directory of <id>.png segmentation masks")->required();
    bench->add_option("--methods", be_methods, "Comma-separated methods")->delimiter(',');
    bench->add_option("--out,-o", be_out, "JSON report");
    bench->add_option("--table", be_table, "Markdown table");
    bench->callback([&] {
        action = [&] {
            MethodAngles gt{"GT", {}};
            std::vector<std::string> ids;
            for (const fs::path& f : json_files(be_gt)) {
                const AnnotationFile a = read_annotations(f);
                ImageAngles img{f.stem().string(), {}};
                for (const auto& r : a.annotations) img.angles.push_back(r.angle_deg);
                gt.images.push_back(std::move(img));
            }
            if (gt.images.empty()) throw DomainError("empty corpus: no annotation documents in " + be_gt);
            std::vector<MethodAngles> runs;
            for (const std::string& name : be_methods) runs.push_back({name, {}});
            for (const ImageAngles& g : gt.images) {
                const BinaryMask mask = load_mask(fs::path(be_masks) / (g.image_id + ".png"));
                for (MethodAngles& m : runs) {
                    ImageAngles img{g.image_id, {}};
                    for (const BranchAngle& a : run_method(parse_method(m.name), mask)) img.angles.push_back(a.theta_deg);
                    m.images.push_back(std::move(img));
                }
            }
            const auto reports = emit_benchmark(runs, gt);
            const std::string table = benchmark_markdown(reports);
            for (const BenchReport& r : reports)
                if (r.dropped) std::cerr << "warning: " << r.method << " found no angles on " << r.dropped << " image(s)\n";
            if (!be_out.empty()) write_text(be_out, benchmark_json(reports));
            if (!be_table.empty()) write_text(be_table, table);
            std::cout << table;
        };
    });

    // serve
    ServiceConfig sc;
    std::string sv_root = ".", sv_ui;
    auto* serve = app.add_subcommand("serve", "Run the annotation service");
    serve->add_option("--port", sc.port, "TCP port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", sc.host, "Bind address");
    serve->add_option("--data-root", sv_root, std::string("Corpus directory (overridden by ") + kDataRootEnv + ")");
    serve->add_option("--ui-dir", sv_ui, "Static annotator bundle served at /");
    serve->callback([&] {
        action = [&] {
            sc.data_root = resolve_data_root(sv_root);
            if (!sv_ui.empty()) sc.ui_dir = sv_ui;
            if (!fs::is_directory(sc.data_root)) throw IoError("data root not found: " + sc.data_root.string());
            Service service(sc);
            std::cerr << "serving " << sc.data_root.string() << " on http://" << sc.host << ':' << sc.port << '\n';
            if (!service.listen()) throw IoError("cannot listen on port " + std::to_string(sc.port));
        };
    });

    // validate
    std::string va_in;
    auto* validate = app.add_subcommand("validate", "Check annotation documents");
    validate->add_option("path", va_in, "Document or directory")->required();
    validate->callback([&] {
        action = [&] {
            int bad = 0;
            const auto files = json_files(va_in);
            for (const fs::path& f : files) {
                try {
                    read_annotations(f);
                } catch (const ValidationError& e) {
                    ++bad;
                    for (const RecordIssue& i : e.issues())
                        std::cerr << f.string() << ": record " << i.index << ": " << i.message << '\n';
                } catch (const Error& e) {
                    ++bad;
                    std::cerr << f.string() << ": " << e.what() << '\n';
                }
            }
            std::cout << files.size() - static_cast<std::size_t>(bad) << '/' << files.size() << " documents valid\n";
            if (bad) throw Error(std::to_string(bad) + " invalid document(s)");
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace rba::gateway
