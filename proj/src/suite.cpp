#include <cmath>
#include <numbers>

#include "mcfs/app.hpp"

namespace mcfs {

namespace {

Ring polar(int n, Point2 c, double (*radius)(double)) {
    Ring ring;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        const double r = radius(t);
        ring.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    return ring;
}

Ring circle(int n, Point2 c, double r) {
    Ring ring;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        ring.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    return ring;
}

Ring ellipse(int n, Point2 c, double a, double b) {
    Ring ring;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        ring.push_back({c.x + a * std::cos(t), c.y + b * std::sin(t)});
    }
    return ring;
}

Ring rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

}  // namespace

std::vector<std::string> suite_names() {
    return {"disc", "annulus", "two_lobes", "office", "double_hole", "disc_two_obstacles", "letter_p"};
}

Workspace suite_workspace(const std::string& name) {
    if (name == "disc") return Workspace::make(name, circle(256, {0, 0}, 1.0));
    if (name == "annulus") return Workspace::make(name, circle(256, {0, 0}, 2.0), {circle(128, {0, 0}, 0.7)});
    if (name == "two_lobes") {
        return Workspace::make(name, polar(256, {0, 0}, [](double t) { return 1.0 + 0.45 * std::cos(2.0 * t); }));
    }
    if (name == "office") {
        const Ring outer{{0, 0}, {8, 0}, {8, 5.5}, {5.5, 5.5}, {5.5, 8}, {0, 8}};
        return Workspace::make(name, outer, {rect(2.4, 2.4, 3.4, 3.2), rect(5.4, 2.0, 6.0, 2.8)});
    }
    if (name == "double_hole") {
        return Workspace::make(name, ellipse(256, {0, 0}, 3.0, 2.2),
                               {circle(96, {-1.4, 0.0}, 0.6), circle(96, {1.4, 0.0}, 0.6)});
    }
    if (name == "disc_two_obstacles") {
        return Workspace::make(name, polar(256, {0, 0}, [](double t) { return 2.0 + 0.15 * std::sin(3.0 * t); }),
                               {circle(64, {-0.8, 0.5}, 0.35), circle(64, {0.9, -0.4}, 0.3)});
    }
    if (name == "letter_p") {
        const Ring outer{{0, 0}, {2.2, 0}, {2.2, 2.4}, {3.4, 2.4}, {4.4, 2.9}, {4.9, 4.2},
                         {4.4, 5.5}, {3.4, 6.0}, {0, 6.0}};
        return Workspace::make(name, outer, {rect(2.2, 3.6, 3.2, 4.8)});
    }
    throw InvalidInput("unknown suite workspace: " + name, "app");
}

}  // namespace mcfs
