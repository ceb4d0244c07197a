#include "netelast/mechanics.hpp"

#include <cmath>

#include "netelast/error.hpp"

namespace netelast {

namespace {

void check_orthogonal(const Matrix& r, std::size_t N) {
    if (r.rows() != N || r.cols() != N) throw ValidationError("rotation has the wrong size");
    const Matrix d = r.transposed() * r - Matrix::identity(N);
    if (d.max_abs() > 1e-10) throw ValidationError("rotation matrix is not orthogonal");
}

// R^T T R
Matrix to_frame(const TensionTensor& t, const Matrix& rotation) {
    return rotation.transposed() * t.matrix * rotation;
}

}  // namespace

Matrix rotation_2d(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return Matrix(2, 2, {c, -s, s, c});
}

Matrix uniaxial_map(double lambda, std::size_t N, const Matrix& rotation) {
    if (!(lambda > 0.0)) throw ValidationError("stretch ratio must be positive");
    if (N < 2) throw ValidationError("uniaxial extension needs dimension >= 2");
    check_orthogonal(rotation, N);
    Vector diag(N, std::pow(lambda, -1.0 / static_cast<double>(N - 1)));
    diag[0] = lambda;
    return rotation * Matrix::diagonal(diag) * rotation.transposed();
}

StressState cauchy_stress(const TensionTensor& t, double volume) {
    if (!(volume > 0.0)) throw ValidationError("volume must be positive");
    const std::size_t N = t.dimension();
    StressState s{t.matrix * (2.0 / volume), Matrix(), volume};
    s.deviatoric = s.cauchy - Matrix::identity(N) * (s.cauchy.trace() / static_cast<double>(N));
    return s;
}

EnergyProfile energy_profile(const TensionTensor& t_ref, double lambda, const Matrix& rotation) {
    const std::size_t N = t_ref.dimension();
    if (N < 2) throw ValidationError("uniaxial extension needs dimension >= 2");
    if (!(lambda > 0.0)) throw ValidationError("stretch ratio must be positive");
    check_orthogonal(rotation, N);
    const Matrix tau = to_frame(t_ref, rotation);
    const double t11 = tau(0, 0);
    const double rest = tau.trace() - t11;
    const double q = 2.0 / static_cast<double>(N - 1);
    EnergyProfile p;
    p.energy = t11 * lambda * lambda + rest * std::pow(lambda, -q);
    p.derivative = 2.0 * (t11 * lambda - rest / static_cast<double>(N - 1) * std::pow(lambda, -1.0 - q));
    return p;
}

double engineering_stress(const TensionTensor& t_ref, double volume, double lambda, const Matrix& rotation) {
    if (!(volume > 0.0)) throw ValidationError("volume must be positive");
    return energy_profile(t_ref, lambda, rotation).derivative / volume;
}

double true_stress(const TensionTensor& t_ref, double volume, double lambda, const Matrix& rotation) {
    return lambda * engineering_stress(t_ref, volume, lambda, rotation);
}

double permanent_strain(const TensionTensor& t_ref, const Matrix& rotation) {
    const std::size_t N = t_ref.dimension();
    if (N < 2) throw ValidationError("uniaxial extension needs dimension >= 2");
    check_orthogonal(rotation, N);
    const Matrix tau = to_frame(t_ref, rotation);
    const double t11 = tau(0, 0);
    if (!(t11 > 0.0)) throw ValidationError("permanent strain needs a positive tension along the extension axis");
    const double rest = tau.trace() - t11;
    const double n = static_cast<double>(N);
    return std::pow(rest / ((n - 1.0) * t11), (n - 1.0) / (2.0 * n)) - 1.0;
}

double youngs_modulus(double energy0, double volume, std::size_t N) {
    if (!(energy0 > 0.0) || !(volume > 0.0) || N < 2) throw ValidationError("Young's modulus needs E0, V > 0 and N >= 2");
    return 4.0 * energy0 / (static_cast<double>(N - 1) * volume);
}

}  // namespace netelast
