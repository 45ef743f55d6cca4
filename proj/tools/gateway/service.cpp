#include "service.hpp"

#include <cstdlib>
#include <string_view>

#include "httplib.h"
#include "json.hpp"

#include <rba/annostore.hpp>
#include <rba/errors.hpp>
#include <rba/image_io.hpp>
#include <rba/pipeline.hpp>

#include "channels.hpp"

namespace rba::gateway {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump() + "\n", kJson);
}

void send_issues(httplib::Response& res, const std::vector<RecordIssue>& issues) {
    json list = json::array();
    for (const RecordIssue& i : issues) {
        json e;
        e["index"] = i.index >= 0 ? json(i.index) : json();
        e["message"] = i.message;
        list.push_back(std::move(e));
    }
    res.status = 422;
    res.set_content(json{{"error", "invalid annotation document"}, {"issues", list}}.dump() + "\n", kJson);
}

struct Paths {
    fs::path image;
    fs::path annotation;
    std::optional<fs::path> mask;
};

const std::array<const char*, 3> kImageExts = {".png", ".jpg", ".jpeg"};

std::vector<std::string> list_ids(const fs::path& root) {
    std::vector<std::string> ids;
    const fs::path dir = root / "images";
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return ids;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (std::find(kImageExts.begin(), kImageExts.end(), ext) != kImageExts.end())
            ids.push_back(e.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

// Only ids that exist in images/ resolve, so request paths never reach outside the data root.
std::optional<Paths> lookup(const fs::path& root, const std::string& id) {
    const auto ids = list_ids(root);
    if (!std::binary_search(ids.begin(), ids.end(), id)) return std::nullopt;
    Paths p;
    for (const char* ext : kImageExts) {
        const fs::path candidate = root / "images" / (id + ext);
        if (fs::is_regular_file(candidate)) {
            p.image = candidate;
            break;
        }
    }
    if (p.image.empty()) {
        for (const auto& e : fs::directory_iterator(root / "images"))
            if (e.path().stem() == id) p.image = e.path();
    }
    p.annotation = root / "annotations" / (id + ".json");
    if (const fs::path m = root / "masks" / (id + ".png"); fs::is_regular_file(m)) p.mask = m;
    return p;
}

int int_param(const httplib::Request& req, const char* key, int fallback) {
    if (!req.has_param(key)) return fallback;
    try {
        return std::stoi(req.get_param_value(key));
    } catch (const std::exception&) {
        throw ParameterError(std::string("parameter '") + key + "' must be an integer");
    }
}

bool flag_param(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) return false;
    const std::string v = req.get_param_value(key);
    return v.empty() || v == "1" || v == "true";
}

Vec2 json_point(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw FormatError(std::string("field '") + key + "' must be [x, y]");
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

std::string_view as_view(const std::vector<std::uint8_t>& bytes) {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

}  // namespace

fs::path resolve_data_root(const fs::path& fallback) {
    if (const char* env = std::getenv(kDataRootEnv); env && *env) return env;
    return fallback;
}

Service::Service(ServiceConfig config) : config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Service::~Service() { stop(); }

std::mutex& Service::lock_for(const std::string& id) {
    std::lock_guard guard(locks_guard_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

void Service::install_routes() {
    httplib::Server& srv = *server_;
    const fs::path root = config_.data_root;

    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const ParameterError& e) {
            send_error(res, 400, e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    });

    srv.Get("/api/images", [root](const httplib::Request&, httplib::Response& res) {
        res.set_content(json(list_ids(root)).dump() + "\n", kJson);
    });

    srv.Get(R"(/api/images/([^/]+))", [root](const httplib::Request& req, httplib::Response& res) {
        const auto paths = lookup(root, req.matches[1]);
        if (!paths) return send_error(res, 404, "unknown image id");
        ChannelRequest cr;
        cr.channel = parse_channel(req.has_param("channel") ? req.get_param_value("channel") : "rgb");
        cr.kernel = int_param(req, "kernel", 0);
        cr.mean_blur = flag_param(req, "mean_blur");
        const auto png = render_channel_png(load_image(paths->image), cr);
        res.set_content(std::string(as_view(png)), "image/png");
    });

    srv.Get(R"(/api/annotations/([^/]+))", [root](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const auto paths = lookup(root, id);
        if (!paths) return send_error(res, 404, "unknown image id");
        if (fs::is_regular_file(paths->annotation)) {
            res.set_content(std::string(as_view(read_file_bytes(paths->annotation))), kJson);
            return;
        }
        const ColorImage img = load_image(paths->image);
        res.set_content(serialize_annotations(AnnotationFile{id, img.width(), img.height(), kSchemaVersion, {}}), kJson);
    });

    srv.Put(R"(/api/annotations/([^/]+))", [this, root](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const auto paths = lookup(root, id);
        if (!paths) return send_error(res, 404, "unknown image id");
        AnnotationFile doc;
        try {
            doc = parse_annotations(req.body);
        } catch (const ValidationError& e) {
            return send_issues(res, e.issues());
        } catch (const FormatError& e) {
            return send_issues(res, {{-1, e.what()}});
        }
        if (doc.image_id != id) return send_issues(res, {{-1, "image_id does not match the request path"}});
        const std::string text = serialize_annotations(doc);
        std::lock_guard guard(lock_for(id));
        fs::create_directories(paths->annotation.parent_path());
        write_file_atomic(paths->annotation, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
        res.set_content(text, kJson);
    });

    srv.Post("/api/angle", [](const httplib::Request& req, httplib::Response& res) {
        try {
            const json doc = json::parse(req.body);
            const double angle = vector_angle(json_point(doc, "b"), json_point(doc, "a"), json_point(doc, "c"));
            res.set_content(json{{"angle_deg", angle}}.dump() + "\n", kJson);
        } catch (const json::exception& e) {
            send_error(res, 422, e.what());
        } catch (const Error& e) {
            send_error(res, 422, e.what());
        }
    });

    srv.Post(R"(/api/detect/([^/]+))", [root](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const auto paths = lookup(root, id);
        if (!paths) return send_error(res, 404, "unknown image id");
        if (!paths->mask)
            return send_error(res, 409, "no segmentation mask for this image; add masks/" + id + ".png to the data root");
        PipelineParams params;
        try {
            if (!req.body.empty()) {
                const json body = json::parse(req.body);
                if (body.contains("prune_step")) params.walker.prune_step = body["prune_step"].get<int>();
                if (body.contains("seed")) params.walker.rng_seed = body["seed"].get<std::uint64_t>();
                if (body.contains("sigma")) params.sigma = body["sigma"].get<double>();
                if (body.contains("predicate"))
                    params.walker.predicate = body["predicate"].get<std::string>() == "count"
                                                  ? BifurcationPredicate::window_count
                                                  : BifurcationPredicate::branch_components;
                if (body.contains("policy"))
                    params.policy = body["policy"].get<std::string>() == "all" ? AnglePolicy::all
                                                                               : AnglePolicy::prune_preferred;
            }
        } catch (const json::exception& e) {
            return send_error(res, 422, e.what());
        }
        const BinaryMask mask = binarize(load_gray(*paths->mask));
        const auto angles = run_method(Method::ours, mask, params);
        res.set_content(serialize_annotations(detections_to_annotations(angles, id, mask.width(), mask.height())),
                        kJson);
    });

    if (config_.ui_dir) srv.set_mount_point("/", config_.ui_dir->string());
}

bool Service::listen() { return server_->listen(config_.host, config_.port); }

int Service::bind_any_port() { return server_->bind_to_any_port(config_.host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

bool Service::running() const { return server_->is_running(); }

}  // namespace rba::gateway
