#include "chernweil/mesh.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cw {

namespace {

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

long euler_char_oracle(const SimplicialMesh& mesh) {
    if (mesh.has_explicit) {
        // every (k-1)-face of every k-cell must itself be listed
        std::vector<std::set<std::vector<int>>> present(mesh.cells.size());
        for (std::size_t k = 0; k < mesh.cells.size(); ++k)
            for (const auto& cell : mesh.cells[k]) present[k].insert(sorted(cell));
        for (std::size_t k = 1; k < mesh.cells.size(); ++k) {
            for (const auto& cell : mesh.cells[k]) {
                auto s = sorted(cell);
                for (std::size_t drop = 0; drop < s.size(); ++drop) {
                    std::vector<int> face;
                    for (std::size_t i = 0; i < s.size(); ++i)
                        if (i != drop) face.push_back(s[i]);
                    if (!present[k - 1].count(face))
                        throw std::invalid_argument("mesh incidence data inconsistent");
                }
            }
        }
        long chi = 0;
        for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
            long n = static_cast<long>(mesh.cells[k].size());
            chi += (k % 2 == 0) ? n : -n;
        }
        return chi;
    }
    long chi = 0;
    for (std::size_t k = 0; k < mesh.counts.size(); ++k)
        chi += (k % 2 == 0) ? mesh.counts[k] : -mesh.counts[k];
    return chi;
}

SimplicialMesh octahedron_sphere() {
    SimplicialMesh m;
    m.has_explicit = true;
    // vertices 0..5: poles 4 (top), 5 (bottom); equator 0..3
    std::vector<std::vector<int>> verts;
    for (int i = 0; i < 6; ++i) verts.push_back({i});
    std::vector<std::vector<int>> faces;
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4;
        faces.push_back({i, j, 4});
        faces.push_back({i, j, 5});
    }
    std::set<std::vector<int>> edge_set;
    for (const auto& f : faces) {
        auto s = sorted(f);
        edge_set.insert({s[0], s[1]});
        edge_set.insert({s[0], s[2]});
        edge_set.insert({s[1], s[2]});
    }
    std::vector<std::vector<int>> edges(edge_set.begin(), edge_set.end());
    m.cells = {verts, edges, faces};
    m.counts = {6, static_cast<long>(edges.size()), static_cast<long>(faces.size())};
    return m;
}

SimplicialMesh grid_torus(int n) {
    // n x n periodic quad grid, each quad split into two triangles:
    // V = n^2, E = 3n^2, F = 2n^2
    SimplicialMesh m;
    m.has_explicit = true;
    auto vid = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    std::vector<std::vector<int>> verts;
    for (int i = 0; i < n * n; ++i) verts.push_back({i});
    std::set<std::vector<int>> edge_set;
    std::vector<std::vector<int>> faces;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
        }
    for (const auto& f : faces) {
        auto s = sorted(f);
        edge_set.insert({s[0], s[1]});
        edge_set.insert({s[0], s[2]});
        edge_set.insert({s[1], s[2]});
    }
    std::vector<std::vector<int>> edges(edge_set.begin(), edge_set.end());
    m.cells = {verts, edges, faces};
    m.counts = {static_cast<long>(n) * n, static_cast<long>(edges.size()),
                static_cast<long>(faces.size())};
    return m;
}

SimplicialMesh product_mesh(const SimplicialMesh& a, const SimplicialMesh& b) {
    // product CW complex: N_k = sum_{i+j=k} n_i m_j (counts only)
    SimplicialMesh m;
    m.has_explicit = false;
    m.counts.assign(a.counts.size() + b.counts.size() - 1, 0);
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        for (std::size_t j = 0; j < b.counts.size(); ++j) m.counts[i + j] += a.counts[i] * b.counts[j];
    return m;
}

} // namespace cw
