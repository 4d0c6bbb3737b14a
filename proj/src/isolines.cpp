#include "mcfs/isolines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mcfs {

double DistanceField::max_value() const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (inside[k]) best = std::max(best, values[k]);
    }
    return best;
}

DistanceField build_distance_field(const Workspace& ws, double cell_size, Exec exec) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
        throw InvalidInput("cell_size must be positive", "geom");
    }
    if (!(ws.area() > 0.0)) {
        throw InvalidInput("degenerate workspace (zero area)", "geom");
    }
    const Point2 lo = ws.bbox_min();
    const Point2 hi = ws.bbox_max();
    DistanceField df;
    df.grid.cell = cell_size;
    df.grid.origin = {lo.x - cell_size, lo.y - cell_size};
    df.grid.nx = static_cast<int>(std::ceil((hi.x - lo.x) / cell_size)) + 3;
    df.grid.ny = static_cast<int>(std::ceil((hi.y - lo.y) / cell_size)) + 3;
    df.values.assign(df.grid.size(), 0.0);
    df.inside.assign(df.grid.size(), 0);
    if (exec == Exec::parallel) {
        kernels::signed_distance_omp(df.grid, ws, df.values, df.inside);
    } else {
        kernels::signed_distance_serial(df.grid, ws, df.values, df.inside);
    }
    return df;
}

std::vector<Ring> marching_squares(const DistanceField& df, double level) {
    const int nx = df.grid.nx;
    const int ny = df.grid.ny;
    // Crossing points live on grid edges: id 2*(j*nx+i) is the horizontal edge
    // (i,j)-(i+1,j), id 2*(j*nx+i)+1 the vertical edge (i,j)-(i,j+1).
    const std::size_t n_ids = static_cast<std::size_t>(nx) * ny * 2;
    std::vector<std::array<int, 2>> links(n_ids, {-1, -1});
    std::vector<Point2> position(n_ids);

    auto above = [&](int i, int j) { return df.at(i, j) > level; };
    auto edge_point = [&](int id) {
        const int cell = id / 2;
        const int i = cell % nx;
        const int j = cell / nx;
        const int i2 = (id % 2 == 0) ? i + 1 : i;
        const int j2 = (id % 2 == 0) ? j : j + 1;
        const double a = df.at(i, j);
        const double b = df.at(i2, j2);
        const double t = (level - a) / (b - a);
        const Point2 pa = df.grid.node(i, j);
        const Point2 pb = df.grid.node(i2, j2);
        return pa + t * (pb - pa);
    };
    auto link = [&](int a, int b) {
        auto attach = [&](int from, int to) {
            if (links[from][0] < 0) {
                links[from][0] = to;
            } else {
                links[from][1] = to;
            }
        };
        attach(a, b);
        attach(b, a);
    };

    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int code = (above(i, j) ? 1 : 0) | (above(i + 1, j) ? 2 : 0) | (above(i + 1, j + 1) ? 4 : 0) |
                             (above(i, j + 1) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const int bottom = 2 * (j * nx + i);
            const int top = 2 * ((j + 1) * nx + i);
            const int left = 2 * (j * nx + i) + 1;
            const int right = 2 * (j * nx + i + 1) + 1;
            if (code == 5 || code == 10) {
                const double center = 0.25 * (df.at(i, j) + df.at(i + 1, j) + df.at(i + 1, j + 1) + df.at(i, j + 1));
                const bool center_above = center > level;
                // corners 0 and 2 share a state in case 5; 1 and 3 in case 10
                const bool cut_corners_02 = (code == 5) != center_above;
                if (cut_corners_02) {
                    link(bottom, left);
                    link(right, top);
                } else {
                    link(bottom, right);
                    link(left, top);
                }
                continue;
            }
            std::array<int, 4> crossing{};
            int count = 0;
            const bool b0 = code & 1, b1 = code & 2, b2 = code & 4, b3 = code & 8;
            if (b0 != b1) crossing[count++] = bottom;
            if (b1 != b2) crossing[count++] = right;
            if (b2 != b3) crossing[count++] = top;
            if (b3 != b0) crossing[count++] = left;
            link(crossing[0], crossing[1]);
        }
    }

    std::vector<Ring> loops;
    std::vector<std::uint8_t> visited(n_ids, 0);
    for (int start = 0; start < static_cast<int>(n_ids); ++start) {
        if (links[start][0] < 0 || visited[start]) continue;
        Ring loop;
        int prev = -1;
        int curr = start;
        while (!visited[curr]) {
            visited[curr] = 1;
            loop.push_back(edge_point(curr));
            const int next = (links[curr][0] != prev) ? links[curr][0] : links[curr][1];
            if (next < 0) break;
            prev = curr;
            curr = next;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

Isoline resample_equidistant(const Isoline& raw, double l) {
    if (!(l > 0.0)) throw InvalidInput("isoline step must be positive", "geom");
    Ring pts;
    for (const Point2& p : raw.points) {
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
    while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    const double total = perimeter(pts);
    if (pts.size() < 3 || total < 1.5 * l) {
        throw InvalidInput("isoline perimeter below 1.5*l", "geom");
    }
    if (signed_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());
    const auto smallest = std::min_element(pts.begin(), pts.end());
    std::rotate(pts.begin(), smallest, pts.end());

    const std::size_t n = std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(total / l)));
    const double step = total / static_cast<double>(n);

    Isoline out;
    out.layer = raw.layer;
    out.spacing = step;
    out.points.reserve(n);
    std::size_t seg = 0;
    double seg_start = 0.0;
    double seg_len = dist(pts[0], pts[1 % pts.size()]);
    for (std::size_t k = 0; k < n; ++k) {
        const double target = step * static_cast<double>(k);
        while (seg + 1 < pts.size() && seg_start + seg_len < target) {
            seg_start += seg_len;
            ++seg;
            seg_len = dist(pts[seg], pts[(seg + 1) % pts.size()]);
        }
        const double t = seg_len > 0.0 ? std::clamp((target - seg_start) / seg_len, 0.0, 1.0) : 0.0;
        const Point2 a = pts[seg];
        const Point2 b = pts[(seg + 1) % pts.size()];
        out.points.push_back(a + t * (b - a));
    }
    return out;
}

std::vector<Isoline> extract_isolines(const DistanceField& df, double l) {
    if (!(l > 0.0)) throw InvalidInput("isoline step must be positive", "geom");
    const double l_max = df.max_value();
    const int layers = l_max > 0.0 ? static_cast<int>(std::floor(l_max / l)) : 0;
    if (layers == 0) {
        throw InvalidInput("no coverable layers (workspace thinner than 2l everywhere)", "geom");
    }
    std::vector<Isoline> out;
    const double min_area = 0.25 * l * l;
    for (int layer = 1; layer <= layers; ++layer) {
        for (Ring& loop : marching_squares(df, layer * l)) {
            if (loop.size() < 3 || std::abs(signed_area(loop)) <= min_area || perimeter(loop) < 1.5 * l) {
                continue;
            }
            out.push_back(resample_equidistant(Isoline{layer, std::move(loop), 0.0}, l));
        }
    }
    std::sort(out.begin(), out.end(), [](const Isoline& a, const Isoline& b) {
        if (a.layer != b.layer) return a.layer < b.layer;
        return a.points.front() < b.points.front();
    });
    return out;
}

}  // namespace mcfs
