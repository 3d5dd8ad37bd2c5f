#pragma once

namespace hch {

enum class BoundaryKind { NeumannHomogeneous, DirichletWells };

// Dirichlet runs pin u(a), u(b) to left_sign/right_sign times the outer well
// magnitude (wells are +-1 for every supported profile path).
struct BoundaryMode {
    BoundaryKind kind = BoundaryKind::NeumannHomogeneous;
    int left_sign = -1;
    int right_sign = -1;
};

}  // namespace hch
