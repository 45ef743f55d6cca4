#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace rba::gateway {

inline constexpr int kDefaultPort = 8750;
inline constexpr const char* kDataRootEnv = "RBA_DATA_ROOT";

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = kDefaultPort;
    /// Holds images/, annotations/ and optionally masks/.
    std::filesystem::path data_root;
    std::optional<std::filesystem::path> ui_dir;
};

/// HTTP front end over a corpus directory.
///
///   GET  /api/images                   image ids
///   GET  /api/images/{id}?channel=...  PNG (rgb, green, edges, highpass; kernel, mean_blur)
///   GET  /api/annotations/{id}         annotation document
///   PUT  /api/annotations/{id}         validated replace, 422 on bad payloads
///   POST /api/angle                    {a, b, c} -> {angle_deg}
///   POST /api/detect/{id}              detection as an annotation document, 409 without a mask
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Blocks until stop(). Returns false when the socket could not be bound.
    bool listen();
    /// Binds an ephemeral port and returns it; follow with listen_after_bind().
    int bind_any_port();
    bool listen_after_bind();
    void stop();
    bool running() const;

    const ServiceConfig& config() const { return config_; }

private:
    void install_routes();
    std::mutex& lock_for(const std::string& id);

    ServiceConfig config_;
    std::unique_ptr<httplib::Server> server_;
    std::mutex locks_guard_;
    std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// Data root from the environment when set, `fallback` otherwise.
std::filesystem::path resolve_data_root(const std::filesystem::path& fallback);

}  // namespace rba::gateway
