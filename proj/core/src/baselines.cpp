#include "rba/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

#include "rba/keypoints.hpp"
#include "rba/skeleton.hpp"

namespace rba {
namespace {

constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

using Flags = Raster<std::uint8_t, struct FlagTag>;
using Ints = Raster<int, struct IntTag>;

struct Cluster {
    std::vector<Point> pixels;
    Point center;
};

// 8-connected clusters of flagged pixels, row-major discovery order.
std::vector<Cluster> cluster_pixels(const Flags& flag, Ints& owner) {
    std::vector<Cluster> out;
    owner = Ints(flag.width(), flag.height(), -1);
    for (int y = 0; y < flag.height(); ++y) {
        for (int x = 0; x < flag.width(); ++x) {
            if (!flag(x, y) || owner(x, y) >= 0) continue;
            Cluster c;
            const int id = static_cast<int>(out.size());
            std::deque<Point> q{{x, y}};
            owner(x, y) = id;
            while (!q.empty()) {
                const Point p = q.front();
                q.pop_front();
                c.pixels.push_back(p);
                for (std::size_t i = 0; i < 8; ++i) {
                    const Point n{p.x + kDx[i], p.y + kDy[i]};
                    if (flag.value_or(n.x, n.y, 0) && owner[n] < 0) {
                        owner[n] = id;
                        q.push_back(n);
                    }
                }
            }
            Vec2 mean{};
            for (const Point& p : c.pixels) mean = mean + Vec2(p);
            mean = (1.0 / static_cast<double>(c.pixels.size())) * mean;
            std::sort(c.pixels.begin(), c.pixels.end());
            double best = std::numeric_limits<double>::infinity();
            for (const Point& p : c.pixels) {
                const double d = distance(p, mean);
                if (d < best) {
                    best = d;
                    c.center = p;
                }
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

double point_segment_distance(Vec2 p, const LineSegment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return distance(p, s.a);
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return distance(p, s.a + t * d);
}

bool near_foreground(const BinaryMask& mask, Vec2 p, double reach) {
    const int r = static_cast<int>(std::ceil(reach));
    const int cx = static_cast<int>(std::lround(p.x));
    const int cy = static_cast<int>(std::lround(p.y));
    for (int y = cy - r; y <= cy + r; ++y)
        for (int x = cx - r; x <= cx + r; ++x)
            if (mask.value_or(x, y, 0) && distance(Point{x, y}, p) <= reach) return true;
    return false;
}

bool in_image(const BinaryMask& m, Vec2 p) {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= m.width() - 1.0 && p.y <= m.height() - 1.0;
}

}  // namespace

std::vector<LineSegment> detect_line_segments(const BinaryMask& skeleton, const LineDetectionParams& params) {
    constexpr int kBins = 180;
    const int diag = static_cast<int>(std::ceil(std::hypot(skeleton.width(), skeleton.height())));
    const int rho_bins = 2 * diag + 1;
    std::array<double, kBins> cs{}, sn{};
    for (int t = 0; t < kBins; ++t) {
        cs[static_cast<std::size_t>(t)] = std::cos(t * kPi / 180.0);
        sn[static_cast<std::size_t>(t)] = std::sin(t * kPi / 180.0);
    }
    std::vector<int> acc(static_cast<std::size_t>(kBins * rho_bins), 0);
    std::vector<std::uint8_t> blocked(acc.size(), 0);
    auto bin = [&](int t, double rho) {
        return static_cast<std::size_t>(t * rho_bins + static_cast<int>(std::lround(rho)) + diag);
    };
    std::vector<Point> pts;
    for (std::size_t i = 0; i < skeleton.size(); ++i)
        if (skeleton.pixels()[i]) pts.push_back(skeleton.point_at(i));
    std::vector<std::uint8_t> alive(pts.size(), 1);
    auto vote = [&](const Point& p, int delta) {
        for (int t = 0; t < kBins; ++t)
            acc[bin(t, p.x * cs[static_cast<std::size_t>(t)] + p.y * sn[static_cast<std::size_t>(t)])] += delta;
    };
    for (const Point& p : pts) vote(p, 1);

    std::vector<LineSegment> out;
    for (;;) {
        std::size_t best = 0;
        int votes = -1;
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (!blocked[i] && acc[i] > votes) {
                votes = acc[i];
                best = i;
            }
        }
        if (votes < params.min_segment_length) break;
        blocked[best] = 1;
        const int t = static_cast<int>(best) / rho_bins;
        const double rho = static_cast<int>(best) % rho_bins - diag;
        const double c = cs[static_cast<std::size_t>(t)];
        const double s = sn[static_cast<std::size_t>(t)];

        std::vector<std::pair<double, std::size_t>> on_line;
        // consumed pixels still bridge gaps, so a crossing line does not split this one
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (std::abs(pts[i].x * c + pts[i].y * s - rho) <= params.line_tolerance)
                on_line.push_back({-pts[i].x * s + pts[i].y * c, i});
        }
        std::sort(on_line.begin(), on_line.end());
        std::size_t run_start = 0;
        for (std::size_t k = 1; k <= on_line.size(); ++k) {
            if (k < on_line.size() && on_line[k].first - on_line[k - 1].first <= params.max_gap) continue;
            const double t0 = on_line[run_start].first;
            const double t1 = on_line[k - 1].first;
            const bool fresh = std::any_of(on_line.begin() + static_cast<std::ptrdiff_t>(run_start),
                                           on_line.begin() + static_cast<std::ptrdiff_t>(k),
                                           [&](const auto& e) { return alive[e.second] != 0; });
            if (fresh && t1 - t0 + 1.0 >= params.min_segment_length) {
                const Vec2 foot{rho * c, rho * s};
                const Vec2 dir{-s, c};
                out.push_back({foot + t0 * dir, foot + t1 * dir});
                for (std::size_t m = run_start; m < k; ++m) {
                    if (!alive[on_line[m].second]) continue;
                    alive[on_line[m].second] = 0;
                    vote(pts[on_line[m].second], -1);
                }
            }
            run_start = k;
        }
    }
    return out;
}

std::vector<BranchAngle> line_detection_method(const BinaryMask& mask, const LineDetectionParams& params) {
    const BinaryMask skel = thin(mask);
    const auto segs = detect_line_segments(skel, params);
    std::vector<BranchAngle> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const Vec2 d1 = segs[i].b - segs[i].a;
            const Vec2 d2 = segs[j].b - segs[j].a;
            const double cross = d1.x * d2.y - d1.y * d2.x;
            const double sep = std::asin(std::min(1.0, std::abs(cross) / (norm(d1) * norm(d2)))) * 180.0 / kPi;
            if (sep < params.min_separation_deg) continue;
            const Vec2 w = segs[j].a - segs[i].a;
            const double u = (w.x * d2.y - w.y * d2.x) / cross;
            const Vec2 x = segs[i].a + u * d1;
            if (!in_image(mask, x)) continue;
            if (point_segment_distance(x, segs[i]) > params.segment_reach ||
                point_segment_distance(x, segs[j]) > params.segment_reach)
                continue;
            if (!near_foreground(mask, x, params.foreground_reach)) continue;
            const Vec2 fa = distance(x, segs[i].a) > distance(x, segs[i].b) ? segs[i].a : segs[i].b;
            const Vec2 fc = distance(x, segs[j].a) > distance(x, segs[j].b) ? segs[j].a : segs[j].b;
            if (distance(x, fa) == 0.0 || distance(x, fc) == 0.0) continue;
            BranchAngle a;
            a.bifurcation = x;
            a.anchor_a = fa;
            a.anchor_c = fc;
            a.theta_deg = vector_angle(x, fa, fc);
            out.push_back(a);
        }
    }
    return out;
}

std::vector<Point> roi_candidates(const BinaryMask& mask, Point root, int neighbor_thresh) {
    if (!mask.contains(root) || !mask[root]) throw DomainError("roi_window_method: root is not foreground");
    const BinaryMask comp = component_of(mask, root);
    std::vector<Point> out;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (comp(x, y) && neighbor_count(mask, {x, y}) >= neighbor_thresh) out.push_back({x, y});
    return out;
}

std::vector<BranchAngle> roi_window_method(const BinaryMask& mask, Point root, int neighbor_thresh, int roi) {
    if (roi < 3) throw ParameterError("roi window must be at least 3 px");
    const auto cand = roi_candidates(mask, root, neighbor_thresh);
    Flags flag(mask.width(), mask.height());
    for (const Point& p : cand) flag[p] = 1;
    Ints owner;
    const auto clusters = cluster_pixels(flag, owner);

    // trace from the root; record through which pixel each cluster was entered
    std::vector<std::optional<Point>> entered_from(clusters.size());
    std::vector<std::uint8_t> reached(clusters.size(), 0);
    {
        Flags seen(mask.width(), mask.height());
        std::deque<Point> q{root};
        seen[root] = 1;
        if (owner[root] >= 0) reached[static_cast<std::size_t>(owner[root])] = 1;
        while (!q.empty()) {
            const Point p = q.front();
            q.pop_front();
            for (std::size_t i = 0; i < 8; ++i) {
                const Point n{p.x + kDx[i], p.y + kDy[i]};
                if (!mask.value_or(n.x, n.y, 0) || seen[n]) continue;
                seen[n] = 1;
                q.push_back(n);
                const int o = owner[n];
                if (o >= 0 && !reached[static_cast<std::size_t>(o)]) {
                    reached[static_cast<std::size_t>(o)] = 1;
                    if (owner[p] != o) entered_from[static_cast<std::size_t>(o)] = p;
                }
            }
        }
    }

    const int half = roi / 2;
    std::vector<BranchAngle> out;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const Cluster& cl = clusters[ci];
        const Point b = cl.center;
        auto in_window = [&](Point p) { return std::max(std::abs(p.x - b.x), std::abs(p.y - b.y)) <= half; };
        auto on_border = [&](Point p) { return std::max(std::abs(p.x - b.x), std::abs(p.y - b.y)) == half; };

        // label window components, BFS distance from the cluster
        Ints label(mask.width(), mask.height(), -1);
        Ints dist(mask.width(), mask.height(), -1);
        struct Branch {
            Point tail;
            int tail_dist = -1;
            bool tail_on_border = false;
            bool parent = false;
        };
        std::vector<Branch> branches;
        for (const Point& cp : cl.pixels) {
            for (std::size_t i = 0; i < 8; ++i) {
                const Point s{cp.x + kDx[i], cp.y + kDy[i]};
                if (!mask.value_or(s.x, s.y, 0) || owner[s] == static_cast<int>(ci) || !in_window(s) || label[s] >= 0)
                    continue;
                const int id = static_cast<int>(branches.size());
                branches.push_back({});
                std::deque<Point> q{s};
                label[s] = id;
                dist[s] = 1;
                while (!q.empty()) {
                    const Point p = q.front();
                    q.pop_front();
                    Branch& br = branches.back();
                    const bool border = on_border(p);
                    // prefer border pixels, then the farthest
                    if ((border && !br.tail_on_border) || (border == br.tail_on_border && dist[p] > br.tail_dist)) {
                        br.tail = p;
                        br.tail_dist = dist[p];
                        br.tail_on_border = border;
                    }
                    if (entered_from[ci] && p == *entered_from[ci]) br.parent = true;
                    for (std::size_t k = 0; k < 8; ++k) {
                        const Point n{p.x + kDx[k], p.y + kDy[k]};
                        if (!mask.value_or(n.x, n.y, 0) || owner[n] == static_cast<int>(ci) || !in_window(n) || label[n] >= 0)
                            continue;
                        label[n] = id;
                        dist[n] = dist[p] + 1;
                        q.push_back(n);
                    }
                }
            }
        }
        std::vector<Point> tails;
        for (const Branch& br : branches)
            if (!br.parent && br.tail != b) tails.push_back(br.tail);
        for (std::size_t i = 0; i < tails.size(); ++i) {
            for (std::size_t j = i + 1; j < tails.size(); ++j) {
                BranchAngle a;
                a.bifurcation = b;
                a.anchor_a = tails[i];
                a.anchor_c = tails[j];
                a.theta_deg = vector_angle(a.bifurcation, a.anchor_a, a.anchor_c);
                out.push_back(a);
            }
        }
    }
    return out;
}

std::vector<BranchAngle> rule_based_method(const BinaryMask& mask, int tangent_window) {
    if (tangent_window < 2) throw ParameterError("tangent window must be at least 2 px");
    const BinaryMask skel = thin(mask);
    Flags flag(skel.width(), skel.height());
    for (int y = 0; y < skel.height(); ++y)
        for (int x = 0; x < skel.width(); ++x)
            if (skel(x, y) && neighbor_count(skel, {x, y}) > 3) flag(x, y) = 1;
    Ints owner;
    const auto clusters = cluster_pixels(flag, owner);

    std::vector<BranchAngle> out;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const Cluster& cl = clusters[ci];
        const Vec2 b = cl.center;
        Flags used(skel.width(), skel.height());
        for (const Point& p : cl.pixels) used[p] = 1;
        std::vector<Vec2> dirs;
        for (const Point& cp : cl.pixels) {
            for (std::size_t i = 0; i < 8; ++i) {
                Point cur{cp.x + kDx[i], cp.y + kDy[i]};
                if (!skel.value_or(cur.x, cur.y, 0) || used[cur]) continue;
                std::vector<Point> branch;
                for (;;) {
                    used[cur] = 1;
                    branch.push_back(cur);
                    if (static_cast<int>(branch.size()) >= tangent_window) break;
                    bool moved = false;
                    for (std::size_t k = 0; k < 8; ++k) {
                        const Point n{cur.x + kDx[k], cur.y + kDy[k]};
                        if (skel.value_or(n.x, n.y, 0) && !used[n]) {
                            cur = n;
                            moved = true;
                            break;
                        }
                    }
                    if (!moved) break;
                }
                // principal axis of the branch pixels
                Vec2 mean{};
                for (const Point& p : branch) mean = mean + Vec2(p);
                mean = (1.0 / static_cast<double>(branch.size())) * mean;
                Vec2 dir;
                if (branch.size() == 1) {
                    dir = mean - b;
                } else {
                    double sxx = 0, sxy = 0, syy = 0;
                    for (const Point& p : branch) {
                        const Vec2 d = Vec2(p) - mean;
                        sxx += d.x * d.x;
                        sxy += d.x * d.y;
                        syy += d.y * d.y;
                    }
                    const double ang = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
                    dir = {std::cos(ang), std::sin(ang)};
                    if (dot(dir, mean - b) < 0) dir = -1.0 * dir;
                }
                if (norm(dir) > 0) dirs.push_back((1.0 / norm(dir)) * dir);
            }
        }
        if (dirs.size() < 2) continue;
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                const double t = std::acos(std::clamp(dot(dirs[i], dirs[j]), -1.0, 1.0));
                if (t < best - 1e-12) {
                    best = t;
                    bi = i;
                    bj = j;
                }
            }
        }
        const double reach = tangent_window;
        const Vec2 da = dirs[bi];
        Vec2 dc = dirs[bj];
        if (dot(da, dc) < 0) dc = -1.0 * dc;  // acute fold: reflect the second ray through b
        BranchAngle a;
        a.bifurcation = b;
        a.anchor_a = fit_in_bounds(b, b + reach * da, skel.width(), skel.height());
        a.anchor_c = fit_in_bounds(b, b + reach * dc, skel.width(), skel.height());
        if (distance(a.anchor_a, b) == 0.0 || distance(a.anchor_c, b) == 0.0) continue;
        a.theta_deg = vector_angle(a.bifurcation, a.anchor_a, a.anchor_c);
        out.push_back(a);
    }
    return out;
}

}  // namespace rba
