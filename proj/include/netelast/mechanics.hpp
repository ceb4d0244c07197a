#pragma once

// Stress and uniaxial-extension quantities derived from a reference tension
// tensor. The harmonic realization transforms linearly under the period, so
// every λ-dependent quantity is a closed form in the reference tensor.

#include "netelast/linalg.hpp"
#include "netelast/solver.hpp"

namespace netelast {

// Counter-clockwise rotation by theta (radians).
Matrix rotation_2d(double theta);

// R diag(λ, λ^{-1/(N-1)}, ...) R^T. Requires N >= 2 and R orthogonal.
Matrix uniaxial_map(double lambda, std::size_t N, const Matrix& rotation);

// The extension direction is the first column of `rotation`.
struct UniaxialFamily {
    std::size_t dimension = 2;
    Matrix rotation = Matrix::identity(2);

    [[nodiscard]] Matrix map(double lambda) const { return uniaxial_map(lambda, dimension, rotation); }
};

struct StressState {
    Matrix cauchy;
    Matrix deviatoric;
    double volume = 0.0;
};

StressState cauchy_stress(const TensionTensor& t, double volume);

struct EnergyProfile {
    double energy = 0.0;
    double derivative = 0.0;  // dE/dλ
};

// E(λ) = τ11 λ² + (τ22 + ... + τNN) λ^{-2/(N-1)} with τ = R^T T R.
EnergyProfile energy_profile(const TensionTensor& t_ref, double lambda, const Matrix& rotation);

double engineering_stress(const TensionTensor& t_ref, double volume, double lambda, const Matrix& rotation);
double true_stress(const TensionTensor& t_ref, double volume, double lambda, const Matrix& rotation);

// λ - 1 at which the engineering stress vanishes.
double permanent_strain(const TensionTensor& t_ref, const Matrix& rotation);

// 4 E0 / ((N - 1) V), valid for a standard net.
double youngs_modulus(double energy0, double volume, std::size_t N);

}  // namespace netelast
