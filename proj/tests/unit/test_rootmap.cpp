#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <rba/rootmap.hpp>
#include <rba/skeleton.hpp>

#include "fixtures.hpp"

using namespace rba;
namespace fx = rba::testing;

namespace {

VesselGraph bifurcations_at(const std::vector<Point>& pts, int w, int h) {
    VesselGraph g;
    g.width = w;
    g.height = h;
    for (const Point& p : pts) {
        KeyPoint k;
        k.index = static_cast<int>(g.nodes.size());
        k.position = p;
        k.type = NodeType::bifurcation;
        k.step = 1;
        g.nodes.push_back(k);
    }
    return g;
}

double gauss_sum(const std::vector<Point>& pts, int x, int y, double sigma, bool truncate) {
    const int r = static_cast<int>(std::ceil(3 * sigma));
    double s = 0;
    for (const Point& p : pts) {
        const double d2 = double(x - p.x) * (x - p.x) + double(y - p.y) * (y - p.y);
        if (truncate && d2 > double(r) * r) continue;
        s += std::exp(-d2 / (2 * sigma * sigma));
    }
    return s;
}

Point argmax(const HeatMap& h) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < h.size(); ++i)
        if (h.pixels()[i] > h.pixels()[best]) best = i;
    return h.point_at(best);
}

}  // namespace

TEST(Heatmap, Radius) {
    EXPECT_EQ(heatmap_radius(21.0), 63);
    EXPECT_EQ(heatmap_radius(0.5), 2);
}

TEST(Heatmap, EmptyIsZero) {
    const HeatMap h = bifurcation_heatmap(bifurcations_at({}, 30, 20));
    for (double v : h.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(Heatmap, SinglePeak) {
    const HeatMap h = bifurcation_heatmap(bifurcations_at({{50, 50}}, 120, 110));
    EXPECT_EQ(argmax(h), (Point{50, 50}));
    EXPECT_DOUBLE_EQ(h(50, 50), 1.0);
}

TEST(Heatmap, MatchesBruteForce) {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Point> pts;
        for (int i = 0; i < 8; ++i) pts.push_back({int(rng() % 150), int(rng() % 120)});
        const HeatMap h = bifurcation_heatmap(bifurcations_at(pts, 150, 120), 21.0);
        const double tail = pts.size() * std::exp(-4.5);
        for (int y = 0; y < 120; y += 3)
            for (int x = 0; x < 150; x += 3) {
                ASSERT_NEAR(h(x, y), gauss_sum(pts, x, y, 21.0, true), 1e-6);
                ASSERT_NEAR(h(x, y), gauss_sum(pts, x, y, 21.0, false), tail);
            }
    }
}

TEST(Heatmap, ClusterBeatsOutlier) {
    const std::vector<Point> pts = {{40, 40}, {46, 43}, {43, 49}, {240, 40}};
    const Point m = argmax(bifurcation_heatmap(bifurcations_at(pts, 300, 100)));
    EXPECT_GE(m.x, 40);
    EXPECT_LE(m.x, 46);
    EXPECT_GE(m.y, 40);
    EXPECT_LE(m.y, 49);
}

TEST(FindRoot, SnapsToForeground) {
    const auto g = bifurcations_at({{50, 50}}, 100, 100);
    const HeatMap h = bifurcation_heatmap(g);
    BinaryMask skel(100, 100);
    skel(50, 50) = 1;
    skel(52, 50) = 1;
    EXPECT_EQ(find_root(h, skel), (Point{50, 50}));
    skel(50, 50) = 0;
    EXPECT_EQ(find_root(h, skel), (Point{52, 50}));
}

TEST(FindRoot, TieGoesToFirstRowMajorPeak) {
    const HeatMap h = bifurcation_heatmap(bifurcations_at({{10, 10}, {90, 90}}, 100, 100), 3.0);
    BinaryMask skel(100, 100);
    skel(11, 10) = 1;
    skel(91, 90) = 1;
    EXPECT_EQ(find_root(h, skel), (Point{11, 10}));
}

TEST(FindRoot, NoBifurcation) {
    BinaryMask skel(10, 10);
    skel(3, 3) = 1;
    EXPECT_THROW(find_root(HeatMap(10, 10), skel), NoBifurcationError);
}

TEST(RootedDetection, YRootNearJunction) {
    fx::YShape shape;
    const BinaryMask skel = thin(fx::y_raster(200, 200, shape));
    const RootedDetection r = rooted_detection_full(skel, WalkerParams{});
    EXPECT_FALSE(r.fell_back);
    EXPECT_LE(distance(r.root, shape.junction), 3 * 21.0);
    ASSERT_NE(r.graph.root(), nullptr);
    EXPECT_EQ(r.graph.root()->position, r.root);
    EXPECT_TRUE(skel[r.root]);
}

TEST(RootedDetection, StraightLineFallsBack) {
    const BinaryMask line = fx::polyline(80, 20, {{3, 10}, {70, 10}});
    const RootedDetection r = rooted_detection_full(line, WalkerParams{});
    EXPECT_TRUE(r.fell_back);
    ASSERT_FALSE(r.first_pass.empty());
    EXPECT_EQ(r.graph, r.first_pass.front());
}

TEST(RootedDetection, Deterministic) {
    const BinaryMask skel = thin(fx::vessel_tree(2, 220, 240, 4));
    EXPECT_EQ(rooted_detection(skel, WalkerParams{}), rooted_detection(skel, WalkerParams{}));
}

TEST(HeatmapToGray, MaxNormalised) {
    const HeatMap h = bifurcation_heatmap(bifurcations_at({{5, 5}}, 20, 20), 2.0);
    const GrayImage g = heatmap_to_gray(h);
    EXPECT_EQ(g(5, 5), 255);
    EXPECT_EQ(heatmap_to_gray(HeatMap(4, 4)), GrayImage(4, 4));
}
