#pragma once

// Harmonic and standard realizations, energies and tension tensors.
//
// All sums over oriented edge orbits in the definitions are evaluated over
// the stored unoriented orbits, so the energy is Σ w |Φ(e)|^2 and the global
// tension is Σ w Φ(e) Φ(e)^T with each orbit visited once.

#include <utility>

#include "netelast/graph.hpp"
#include "netelast/linalg.hpp"

namespace netelast {

// Symmetric positive semi-definite N×N tensor.
struct TensionTensor {
    Matrix matrix;

    [[nodiscard]] double trace() const { return matrix.trace(); }
    [[nodiscard]] std::size_t dimension() const { return matrix.rows(); }
};

// Reduced weighted Laplacian with the gauge x_0 = 0: rows and columns for
// vertex orbits 1..n only. Self-edges cancel from both sides.
struct LaplacianSystem {
    Matrix b00;  // n×n
    Matrix rhs;  // n×N, row i-1 is c_i
};

LaplacianSystem laplacian_system(const QuotientGraph& g, const PeriodMap& period);

// Throws SingularSystemError when the positive-weight graph is disconnected.
Realization harmonic_realize(const QuotientGraph& g, const PeriodMap& period);

// Σ_{o(e)=v} w(e) Φ(e) at every vertex.
std::vector<Vector> harmonic_residuals(const QuotientGraph& g, const Realization& r);

double energy(const QuotientGraph& g, const Realization& r);
TensionTensor local_tension(const QuotientGraph& g, const Realization& r, std::size_t v);
TensionTensor global_tension(const QuotientGraph& g, const Realization& r);
TensionTensor per_weight_tension(const QuotientGraph& g, const Realization& r);

// T_w^{-1}; the ellipsoid is {x : x^T M x = 1}.
Matrix ellipsoid_matrix(const QuotientGraph& g, const Realization& r);

// Left-multiplies positions and period basis by A.
Realization apply_linear(const Realization& r, const Matrix& a);

TensionTensor conjugated(const TensionTensor& t, const Matrix& a);  // A T A^T

struct Standardized {
    Realization realization;
    Matrix transform;  // det = 1
};

// Harmonic solve followed by one whitening step A = det(S)^{-1/N} S with
// S = T^{-1/2}. Covolume is preserved and the rotational freedom is fixed by
// the symmetric root.
Standardized standardize(const QuotientGraph& g, const PeriodMap& period);

}  // namespace netelast
