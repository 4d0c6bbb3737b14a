#include "mcfs/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace mcfs {

namespace {

Ring ring_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array()) {
        throw InvalidInput(what + " must be an array of [x,y] pairs", "geom");
    }
    Ring ring;
    ring.reserve(j.size());
    for (const auto& pt : j) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
            throw InvalidInput(what + " contains a malformed point", "geom");
        }
        ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    // tolerate an explicitly repeated closing vertex
    if (ring.size() > 1 && ring.front() == ring.back()) {
        ring.pop_back();
    }
    return ring;
}

nlohmann::json ring_to_json(const Ring& ring) {
    auto out = nlohmann::json::array();
    for (const Point2& p : ring) {
        out.push_back({p.x, p.y});
    }
    return out;
}

}  // namespace

Workspace Workspace::make(std::string name, Ring exterior, std::vector<Ring> holes) {
    Workspace ws{std::move(name), std::move(exterior), std::move(holes)};
    if (ws.exterior.size() >= 3 && signed_area(ws.exterior) < 0.0) {
        std::reverse(ws.exterior.begin(), ws.exterior.end());
    }
    for (Ring& hole : ws.holes) {
        if (hole.size() >= 3 && signed_area(hole) > 0.0) {
            std::reverse(hole.begin(), hole.end());
        }
    }
    ws.validate();
    return ws;
}

void Workspace::validate() const {
    auto check_ring = [](const Ring& ring, const std::string& what) {
        if (ring.size() < 3) {
            throw InvalidInput(what + " needs at least 3 vertices", "geom");
        }
        for (const Point2& p : ring) {
            if (!is_finite(p)) throw InvalidInput(what + " has a non-finite coordinate", "geom");
        }
        if (!ring_is_simple(ring)) {
            throw InvalidInput(what + " is not a simple ring", "geom");
        }
    };
    check_ring(exterior, "exterior");
    if (!(signed_area(exterior) > 0.0)) {
        throw InvalidInput("degenerate workspace: exterior ring has zero or negative area", "geom");
    }
    for (std::size_t h = 0; h < holes.size(); ++h) {
        const std::string what = "hole " + std::to_string(h);
        check_ring(holes[h], what);
        if (!(signed_area(holes[h]) < 0.0)) {
            throw InvalidInput(what + " must have negative signed area", "geom");
        }
        for (const Point2& p : holes[h]) {
            if (!point_in_ring(p, exterior) || point_ring_distance(p, exterior) == 0.0) {
                throw InvalidInput(what + " is not strictly inside the exterior", "geom");
            }
        }
        for (std::size_t i = 0; i < holes[h].size(); ++i) {
            if (segment_hits_ring(holes[h][i], holes[h][(i + 1) % holes[h].size()], exterior)) {
                throw InvalidInput(what + " touches the exterior", "geom");
            }
        }
    }
    for (std::size_t a = 0; a < holes.size(); ++a) {
        for (std::size_t b = a + 1; b < holes.size(); ++b) {
            const Ring& ra = holes[a];
            const Ring& rb = holes[b];
            bool overlap = point_in_ring(ra.front(), rb) || point_in_ring(rb.front(), ra);
            for (std::size_t i = 0; !overlap && i < ra.size(); ++i) {
                overlap = segment_hits_ring(ra[i], ra[(i + 1) % ra.size()], rb);
            }
            if (overlap) {
                throw InvalidInput("holes " + std::to_string(a) + " and " + std::to_string(b) + " overlap", "geom");
            }
        }
    }
    if (!(area() > 0.0)) {
        throw InvalidInput("degenerate workspace: zero area", "geom");
    }
}

std::vector<const Ring*> Workspace::rings() const {
    std::vector<const Ring*> out{&exterior};
    for (const Ring& h : holes) out.push_back(&h);
    return out;
}

double Workspace::area() const {
    double a = signed_area(exterior);
    for (const Ring& h : holes) a += signed_area(h);
    return a;
}

bool Workspace::contains(Point2 p) const {
    if (!point_in_ring(p, exterior)) return false;
    for (const Ring& h : holes) {
        if (point_in_ring(p, h)) return false;
    }
    return true;
}

double Workspace::boundary_distance(Point2 p) const {
    double d = point_ring_distance(p, exterior);
    for (const Ring& h : holes) d = std::min(d, point_ring_distance(p, h));
    return d;
}

Point2 Workspace::bbox_min() const {
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const Point2& p : exterior) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
    }
    return lo;
}

Point2 Workspace::bbox_max() const {
    Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Point2& p : exterior) {
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    return hi;
}

double Workspace::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < exterior.size(); ++i) {
        for (std::size_t j = i + 1; j < exterior.size(); ++j) {
            best = std::max(best, dist(exterior[i], exterior[j]));
        }
    }
    return best;
}

Workspace workspace_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("workspace JSON: ") + e.what(), "geom");
    }
    if (!j.is_object() || !j.contains("exterior")) {
        throw InvalidInput("workspace JSON needs an \"exterior\" ring", "geom");
    }
    std::string name = j.value("name", std::string("workspace"));
    Ring exterior = ring_from_json(j.at("exterior"), "exterior");
    std::vector<Ring> holes;
    if (j.contains("holes")) {
        if (!j.at("holes").is_array()) throw InvalidInput("\"holes\" must be an array of rings", "geom");
        for (std::size_t h = 0; h < j.at("holes").size(); ++h) {
            holes.push_back(ring_from_json(j.at("holes")[h], "hole " + std::to_string(h)));
        }
    }
    return Workspace::make(std::move(name), std::move(exterior), std::move(holes));
}

std::string workspace_to_json_text(const Workspace& ws) {
    nlohmann::json j;
    j["name"] = ws.name;
    j["exterior"] = ring_to_json(ws.exterior);
    j["holes"] = nlohmann::json::array();
    for (const Ring& h : ws.holes) j["holes"].push_back(ring_to_json(h));
    return j.dump(1);
}

Workspace load_workspace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open workspace file " + path.string(), "geom");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return workspace_from_json_text(buffer.str());
}

void save_workspace(const Workspace& ws, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string(), "geom");
    out << workspace_to_json_text(ws) << '\n';
}

}  // namespace mcfs
