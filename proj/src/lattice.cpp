#include "spoqc/lattice.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace spoqc {

char check_pauli(Color c) {
    switch (c) {
        case Color::Red:
            return 'X';
        case Color::Green:
            return 'Y';
        case Color::Blue:
            return 'Z';
    }
    return '?';
}

const char* color_name(Color c) {
    switch (c) {
        case Color::Red:
            return "red";
        case Color::Green:
            return "green";
        case Color::Blue:
            return "blue";
    }
    return "?";
}

std::vector<uint32_t> HoneycombLattice::edges_of_color(Color c) const {
    std::vector<uint32_t> out;
    for (uint32_t e = 0; e < edges.size(); e++) {
        if (edges[e].color == c) {
            out.push_back(e);
        }
    }
    return out;
}

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int mod3(int a) { return ((a % 3) + 3) % 3; }

struct Torus {
    int L;
    // Reduce a triangular-lattice point into the fundamental parallelogram.
    std::pair<int, int> reduce(int i, int j) const {
        int a = floor_div(i - j, 3 * L);
        int b = floor_div(i + 2 * j, 3 * L);
        return {i - a * 2 * L - b * L, j + a * L - b * L};
    }
};

}  // namespace

HoneycombLattice make_honeycomb_lattice(int L) {
    if (L < 2) {
        throw std::invalid_argument("honeycomb lattice needs L >= 2");
    }
    Torus torus{L};
    std::map<std::pair<int, int>, uint32_t> cell_index;
    std::vector<std::pair<int, int>> cells;
    for (int i = -3 * L; i <= 3 * L; i++) {
        for (int j = -3 * L; j <= 3 * L; j++) {
            auto r = torus.reduce(i, j);
            if (!cell_index.count(r)) {
                cell_index[r] = static_cast<uint32_t>(cells.size());
                cells.push_back(r);
            }
        }
    }
    if (cells.size() != static_cast<std::size_t>(3 * L * L)) {
        throw std::logic_error("torus enumeration produced the wrong cell count");
    }
    auto cell = [&](int i, int j) { return cell_index.at(torus.reduce(i, j)); };
    // Vertex 2k is the up-triangle {p, p+(1,0), p+(0,1)}, 2k+1 the down-triangle
    // {p+(1,0), p+(0,1), p+(1,1)}, where p is cell k.
    auto up = [&](int i, int j) { return 2 * cell(i, j); };
    auto down = [&](int i, int j) { return 2 * cell(i, j) + 1; };
    auto color_at = [&](int i, int j) { return static_cast<Color>(mod3(i - j)); };

    HoneycombLattice lat;
    lat.L = L;
    lat.num_vertices = 2 * cells.size();
    lat.vertex_xy.resize(lat.num_vertices);
    // Plane embedding: a1 = (1, 0), a2 = (1/2, sqrt(3)/2).
    const double h = std::sqrt(3.0) / 2;
    auto plane = [&](double i, double j) { return std::pair<double, double>{i + 0.5 * j, h * j}; };
    for (uint32_t k = 0; k < cells.size(); k++) {
        auto [i, j] = cells[k];
        lat.vertex_xy[2 * k] = plane(i + 1.0 / 3, j + 1.0 / 3);
        lat.vertex_xy[2 * k + 1] = plane(i + 2.0 / 3, j + 2.0 / 3);
    }
    for (uint32_t k = 0; k < cells.size(); k++) {
        auto [i, j] = cells[k];
        // Each up-triangle owns its three edges; each edge crosses one lattice bond.
        lat.edges.push_back({up(i, j), down(i, j), color_at(i, j), {cell(i + 1, j), cell(i, j + 1)}});
        lat.edges.push_back({up(i, j), down(i, j - 1), color_at(i, j + 1), {cell(i, j), cell(i + 1, j)}});
        lat.edges.push_back({up(i, j), down(i - 1, j), color_at(i + 1, j), {cell(i, j), cell(i, j + 1)}});
    }
    lat.plaquettes.resize(cells.size());
    std::vector<int> fill(cells.size(), 0);
    for (uint32_t k = 0; k < cells.size(); k++) {
        auto [i, j] = cells[k];
        auto& p = lat.plaquettes[k];
        p.color = color_at(i, j);
        p.vertices = {up(i, j), down(i - 1, j), up(i - 1, j), down(i - 1, j - 1), up(i, j - 1), down(i, j - 1)};
        auto xy = plane(i, j);
        p.x = xy.first;
        p.y = xy.second;
    }
    for (uint32_t e = 0; e < lat.edges.size(); e++) {
        for (uint32_t p : lat.edges[e].plaquettes) {
            if (fill[p] >= 6) {
                throw std::logic_error("plaquette with more than six boundary edges");
            }
            lat.plaquettes[p].edges[fill[p]++] = e;
        }
    }
    return lat;
}

SurfaceLayout make_surface_layout(int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("surface code distance must be odd and >= 3");
    }
    SurfaceLayout lay;
    lay.d = d;
    // Check at (cx + 1/2, cy + 1/2) touches data (cx..cx+1, cy..cy+1). X-type on even
    // parity. Weight-2 X checks sit on the left/right edges, Z checks on top/bottom,
    // so the X logical runs along a row.
    for (int cy = -1; cy < d; cy++) {
        for (int cx = -1; cx < d; cx++) {
            bool x_type = ((cx + cy) % 2 + 2) % 2 == 0;
            bool inside_x = cx >= 0 && cx < d - 1;
            bool inside_y = cy >= 0 && cy < d - 1;
            if (!inside_x && !inside_y) {
                continue;
            }
            if (!inside_x && !x_type) {
                continue;
            }
            if (!inside_y && x_type) {
                continue;
            }
            auto at = [&](int x, int y) { return (x >= 0 && x < d && y >= 0 && y < d) ? lay.data_index(x, y) : -1; };
            SurfaceLayout::Check c;
            c.x_type = x_type;
            c.x = cx + 0.5;
            c.y = cy + 0.5;
            int ll = at(cx, cy), lr = at(cx + 1, cy), ul = at(cx, cy + 1), ur = at(cx + 1, cy + 1);
            // X checks go column by column, Z checks row by row: the two orders
            // interleave correctly and leave Z-check hooks parallel to the X logical.
            if (x_type) {
                c.data = {ll, ul, lr, ur};
            } else {
                c.data = {ll, lr, ul, ur};
            }
            lay.checks.push_back(c);
        }
    }
    return lay;
}

}  // namespace spoqc
