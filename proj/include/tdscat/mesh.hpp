#pragma once

// Triangle surface meshes for hole shapes: construction of refined sphere
// meshes, closedness/orientation validation, and a plain ASCII round-trip
// format (vertex count + triangle count, vertex rows, index triples).

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tdscat/geometry.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

struct SurfaceMesh {
    std::vector<vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    std::size_t panel_count() const { return triangles.size(); }

    vec3 centroid(std::size_t t) const {
        const auto& tri = triangles[t];
        return (1.0 / 3.0) *
               (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]);
    }

    double area(std::size_t t) const {
        const auto& tri = triangles[t];
        const vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
        const vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
        return 0.5 * norm(cross(e1, e2));
    }

    double total_area() const {
        double a = 0.0;
        for (std::size_t t = 0; t < triangles.size(); ++t) a += area(t);
        return a;
    }

    // Largest vertex distance from the origin. Shapes are described in a
    // frame where the body contains the origin, so this bounds the body.
    double bounding_radius() const {
        double r = 0.0;
        for (const auto& v : vertices) r = std::max(r, norm(v));
        return r;
    }

    double diameter() const {
        double d = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (std::size_t j = i + 1; j < vertices.size(); ++j)
                d = std::max(d, dist(vertices[i], vertices[j]));
        return d;
    }
};

// Checks that the mesh is a closed orientable surface: every undirected edge
// is shared by exactly two triangles, every directed edge appears exactly
// once (consistent winding), indices are in range, and no panel is
// degenerate. Throws with the violated property named.
inline void validate_mesh(const SurfaceMesh& mesh) {
    const int nv = int(mesh.vertices.size());
    require(nv >= 4, "mesh: at least four vertices required");
    require(!mesh.triangles.empty(), "mesh: no triangles");
    double scale = 0.0;
    for (const auto& v : mesh.vertices) scale = std::max(scale, norm(v));
    require(scale > 0.0, "mesh: all vertices at the origin");

    std::map<std::pair<int, int>, int> directed;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int c = 0; c < 3; ++c) {
            require(tri[c] >= 0 && tri[c] < nv, "mesh: vertex index out of range");
            const int a = tri[c], b = tri[(c + 1) % 3];
            require(a != b, "mesh: triangle repeats a vertex");
            directed[{a, b}] += 1;
        }
        require(mesh.area(t) > 1e-14 * scale * scale, "mesh: degenerate (zero-area) triangle");
    }
    for (const auto& [edge, count] : directed) {
        require(count == 1, "mesh: directed edge repeated, inconsistent orientation");
        require(directed.count({edge.second, edge.first}) == 1,
                "mesh: boundary edge found, surface is not closed");
    }
}

inline SurfaceMesh scale_mesh(const SurfaceMesh& mesh, double s) {
    require(s > 0.0, "scale_mesh: scale must be positive");
    SurfaceMesh out = mesh;
    for (auto& v : out.vertices) v = s * v;
    return out;
}

inline SurfaceMesh translate_mesh(const SurfaceMesh& mesh, const vec3& shift) {
    SurfaceMesh out = mesh;
    for (auto& v : out.vertices) v = v + shift;
    return out;
}

// Unit-sphere mesh built by recursive midpoint subdivision of an icosahedron
// with projection onto the sphere: 20 * 4^level panels.
inline SurfaceMesh icosphere(int level) {
    require(level >= 0 && level <= 6, "icosphere: level must be in [0, 6]");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    SurfaceMesh m;
    m.vertices = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                  {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                  {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& v : m.vertices) v = (1.0 / norm(v)) * v;
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                   {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                   {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                   {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            vec3 v = m.vertices[a] + m.vertices[b];
            v = (1.0 / norm(v)) * v;
            m.vertices.push_back(v);
            const int idx = int(m.vertices.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(m.triangles.size() * 4);
        for (const auto& tri : m.triangles) {
            const int ab = mid(tri[0], tri[1]);
            const int bc = mid(tri[1], tri[2]);
            const int ca = mid(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.triangles = std::move(next);
    }
    return m;
}

inline std::string serialize_mesh(const SurfaceMesh& mesh) {
    std::ostringstream out;
    out << "# surface mesh: <vertex count> <triangle count>, vertex rows, index triples\n";
    out << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
    for (const auto& v : mesh.vertices)
        out << fmt_g17(v.x) << ' ' << fmt_g17(v.y) << ' ' << fmt_g17(v.z) << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    return out.str();
}

inline SurfaceMesh parse_mesh(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_data_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            return line;
        }
        throw std::invalid_argument("mesh file: unexpected end of data");
    };
    std::size_t nv = 0, nt = 0;
    {
        std::istringstream head(next_data_line());
        if (!(head >> nv >> nt)) throw std::invalid_argument("mesh file: bad count line");
    }
    SurfaceMesh m;
    m.vertices.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        std::istringstream row(next_data_line());
        if (!(row >> m.vertices[i].x >> m.vertices[i].y >> m.vertices[i].z))
            throw std::invalid_argument("mesh file: bad vertex row");
    }
    m.triangles.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        std::istringstream row(next_data_line());
        if (!(row >> m.triangles[i][0] >> m.triangles[i][1] >> m.triangles[i][2]))
            throw std::invalid_argument("mesh file: bad triangle row");
    }
    return m;
}

}  // namespace tdscat
