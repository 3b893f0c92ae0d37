#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace spoqc {

enum class Color : uint8_t { Red = 0, Green = 1, Blue = 2 };

/// Pauli measured by an edge of this color: red XX, green YY, blue ZZ.
char check_pauli(Color c);
const char* color_name(Color c);

/// Honeycomb lattice on a torus whose plaquette centers form the triangular
/// lattice modulo T1 = (2L, -L), T2 = (L, L). The twist makes the plaquette
/// 3-coloring periodic for every L: 3L^2 plaquettes, 6L^2 vertices, 9L^2 edges.
struct HoneycombLattice {
    struct Edge {
        uint32_t u;
        uint32_t v;
        Color color;
        /// The two plaquettes whose boundary contains this edge.
        std::array<uint32_t, 2> plaquettes;
    };
    struct Plaquette {
        Color color;
        std::array<uint32_t, 6> vertices;
        std::array<uint32_t, 6> edges;
        double x;
        double y;
    };

    int L = 0;
    std::size_t num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<Plaquette> plaquettes;
    std::vector<std::pair<double, double>> vertex_xy;

    std::vector<uint32_t> edges_of_color(Color c) const;
};

HoneycombLattice make_honeycomb_lattice(int L);

/// Rotated planar surface code layout with d x d data qubits and d^2 - 1 checks.
struct SurfaceLayout {
    struct Check {
        bool x_type;
        double x;
        double y;
        /// Data qubits in CZ schedule order; -1 marks an absent corner on the boundary.
        std::array<int, 4> data;
    };
    int d = 0;
    std::vector<Check> checks;
    std::size_t num_data() const { return static_cast<std::size_t>(d) * d; }
    int data_index(int x, int y) const { return y * d + x; }
};

SurfaceLayout make_surface_layout(int d);

}  // namespace spoqc
