#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"
#include "json.hpp"

#include <rba/annostore.hpp>
#include <rba/image_io.hpp>

#include "channels.hpp"
#include "fixtures.hpp"
#include "service.hpp"

using namespace rba;
namespace fx = rba::testing;
using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
protected:
    void SetUp() override {
        fx::write_synthetic_corpus(dir.path(), 2);
        std::filesystem::remove(dir / "masks" / "02.png");
        gateway::ServiceConfig cfg;
        cfg.data_root = dir.path();
        service = std::make_unique<gateway::Service>(cfg);
        port = service->bind_any_port();
        ASSERT_GT(port, 0);
        worker = std::thread([this] { service->listen_after_bind(); });
        client = std::make_unique<httplib::Client>("127.0.0.1", port);
    }
    void TearDown() override {
        service->stop();
        if (worker.joinable()) worker.join();
    }

    fx::TempDir dir;
    std::unique_ptr<gateway::Service> service;
    std::thread worker;
    int port = 0;
    std::unique_ptr<httplib::Client> client;
};

}  // namespace

TEST_F(ServiceTest, ListsImages) {
    const auto res = client->Get("/api/images");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body), json::parse(R"(["01","02"])"));
}

TEST_F(ServiceTest, AngleEndpoint) {
    auto res = client->Post("/api/angle", R"({"a":[10,0],"b":[0,0],"c":[0,10]})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_DOUBLE_EQ(json::parse(res->body)["angle_deg"].get<double>(), 90.0);

    res = client->Post("/api/angle", R"({"a":[0,0],"b":[0,0],"c":[0,10]})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
}

TEST_F(ServiceTest, PutThenGet) {
    AnnotationFile doc{"01", 160, 170, kSchemaVersion, {make_annotation({30, 20}, {20, 20}, {20, 40})}};
    const std::string body = serialize_annotations(doc);
    auto res = client->Put("/api/annotations/01", body, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    res = client->Get("/api/annotations/01");
    ASSERT_TRUE(res);
    EXPECT_EQ(parse_annotations(res->body), doc);
    EXPECT_EQ(read_annotations(dir / "annotations" / "01.json"), doc);
}

TEST_F(ServiceTest, PutRejectsCorruptRecord) {
    const std::string before = serialize_annotations(read_annotations(dir / "annotations" / "01.json"));
    const std::string body = R"({"image_id":"01","width":160,"height":170,"schema_version":1,"annotations":[
        {"a":[30,20],"b":[20,20],"c":[20,40],"angle_deg":90},
        {"a":[30,20],"b":[20,20],"c":[30,30],"angle_deg":12}]})";
    auto res = client->Put("/api/annotations/01", body, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
    const json err = json::parse(res->body);
    ASSERT_EQ(err["issues"].size(), 1u);
    EXPECT_EQ(err["issues"][0]["index"], 1);
    EXPECT_EQ(serialize_annotations(read_annotations(dir / "annotations" / "01.json")), before);

    res = client->Put("/api/annotations/02", serialize_annotations({"01", 160, 170, kSchemaVersion, {}}),
                      "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
}

TEST_F(ServiceTest, UnknownIdAndMissingMask) {
    auto res = client->Get("/api/images/77");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    res = client->Get("/api/annotations/77");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    res = client->Post("/api/detect/02", "", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 409);
    res = client->Get("/api/images/01?channel=purple");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
}

TEST_F(ServiceTest, DetectReturnsValidDocument) {
    auto res = client->Post("/api/detect/01", R"({"prune_step":10})", "application/json");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
    const AnnotationFile doc = parse_annotations(res->body);
    EXPECT_EQ(doc.image_id, "01");
    EXPECT_FALSE(doc.annotations.empty());
}

TEST_F(ServiceTest, ChannelsMatchRenderer) {
    const ColorImage img = load_image(dir / "images" / "01.png");
    for (const char* ch : {"rgb", "green", "edges", "highpass"}) {
        const auto res = client->Get(std::string("/api/images/01?channel=") + ch);
        ASSERT_TRUE(res);
        ASSERT_EQ(res->status, 200);
        EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
        gateway::ChannelRequest req;
        req.channel = gateway::parse_channel(ch);
        const auto png = gateway::render_channel_png(img, req);
        EXPECT_EQ(res->body, std::string(png.begin(), png.end())) << ch;
    }
}
