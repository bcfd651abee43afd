#pragma once

#include <vector>

namespace cw {

// Cell complex for the combinatorial Euler-characteristic oracle. Cells can
// be given explicitly (vertex index lists per dimension, simplices) or as
// bare counts for product complexes.
struct SimplicialMesh {
    std::vector<long> counts;                          // cells per dimension
    std::vector<std::vector<std::vector<int>>> cells;  // optional explicit lists
    bool has_explicit = false;
};

long euler_char_oracle(const SimplicialMesh& mesh);

SimplicialMesh octahedron_sphere();
SimplicialMesh grid_torus(int n);
SimplicialMesh product_mesh(const SimplicialMesh& a, const SimplicialMesh& b);

} // namespace cw
