#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "entroposep/errors.hpp"
#include "entroposep/tolerances.hpp"

namespace entroposep {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using VectorXr = Eigen::VectorXd;

/// Dense self-adjoint matrix. Construction validates the conjugate-symmetry
/// invariant; the stored entries are kept as given (no silent repair).
class HermitianMatrix {
public:
    explicit HermitianMatrix(MatrixXc entries, const Tolerances& tols = default_tolerances())
        : m_(std::move(entries)) {
        if (m_.rows() < 1 || m_.rows() != m_.cols())
            throw validation_error("HermitianMatrix: need a square matrix with dim >= 1");
        double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (!(dev <= tols.hermiticity))
            throw validation_error("HermitianMatrix: not Hermitian, max |H - H*| = " + std::to_string(dev));
    }

    /// (M + M*)/2, which is Hermitian bit-exactly at any magnitude. Used for
    /// matrices assembled from floating-point arithmetic rather than user input.
    static HermitianMatrix symmetrized(const MatrixXc& m) {
        return HermitianMatrix(0.5 * (m + m.adjoint().eval()));
    }

    static HermitianMatrix zero(Eigen::Index n) { return HermitianMatrix(MatrixXc::Zero(n, n)); }
    static HermitianMatrix identity(Eigen::Index n) { return HermitianMatrix(MatrixXc::Identity(n, n)); }
    static HermitianMatrix diagonal(const VectorXr& d) {
        return HermitianMatrix(MatrixXc(d.cast<Complex>().asDiagonal()));
    }

    Eigen::Index dim() const { return m_.rows(); }
    const MatrixXc& mat() const { return m_; }

    double trace() const { return m_.trace().real(); }

private:
    MatrixXc m_;
};

/// Spectral data of a Hermitian matrix: ascending eigenvalues and the
/// matching unitary of column eigenvectors.
struct SpectralData {
    VectorXr eigenvalues;
    MatrixXc eigenvectors;

    MatrixXc reconstruct() const {
        return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
    }
};

inline SpectralData eig_hermitian(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h.mat());
    if (solver.info() != Eigen::Success)
        throw numeric_error("eig_hermitian: eigendecomposition did not converge");
    return SpectralData{solver.eigenvalues(), solver.eigenvectors()};
}

/// Positive-semidefinite unit-trace state. `dims` is set for bipartite use
/// and must satisfy dims.first * dims.second == dim.
class DensityMatrix {
public:
    explicit DensityMatrix(HermitianMatrix base,
                           std::optional<std::pair<Eigen::Index, Eigen::Index>> dims = std::nullopt,
                           const Tolerances& tols = default_tolerances())
        : base_(std::move(base)), dims_(dims) {
        if (std::abs(base_.trace() - 1.0) > tols.unit_trace)
            throw validation_error("DensityMatrix: trace = " + std::to_string(base_.trace()) + ", expected 1");
        double min_eig = eig_hermitian(base_).eigenvalues.minCoeff();
        if (min_eig < tols.psd_floor)
            throw validation_error("DensityMatrix: smallest eigenvalue " + std::to_string(min_eig) +
                                   " below PSD floor; input rejected, not repaired");
        if (dims_ && dims_->first * dims_->second != base_.dim())
            throw usage_error("DensityMatrix: dims product does not match matrix dimension");
    }

    Eigen::Index dim() const { return base_.dim(); }
    const HermitianMatrix& base() const { return base_; }
    const MatrixXc& mat() const { return base_.mat(); }
    const std::optional<std::pair<Eigen::Index, Eigen::Index>>& dims() const { return dims_; }

private:
    HermitianMatrix base_;
    std::optional<std::pair<Eigen::Index, Eigen::Index>> dims_;
};

/// Unit vector in C^n.
class UnitVector {
public:
    explicit UnitVector(VectorXc amplitudes, const Tolerances& tols = default_tolerances())
        : v_(std::move(amplitudes)) {
        if (v_.size() < 1) throw validation_error("UnitVector: dim >= 1 required");
        double sq = v_.squaredNorm();
        if (std::abs(sq - 1.0) > tols.unit_norm)
            throw validation_error("UnitVector: squared norm = " + std::to_string(sq));
    }

    Eigen::Index dim() const { return v_.size(); }
    const VectorXc& vec() const { return v_; }

private:
    VectorXc v_;
};

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
    const Eigen::Index na = a.dim(), nb = b.dim();
    MatrixXc out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index k = 0; k < na; ++k)
            out.block(i * nb, k * nb, nb, nb) = a.mat()(i, k) * b.mat();
    return HermitianMatrix::symmetrized(out);
}

/// Product vector phi (x) psi with index (i,i') -> i*dim(psi)+i'.
inline UnitVector kron(const UnitVector& phi, const UnitVector& psi) {
    const Eigen::Index n = phi.dim(), np = psi.dim();
    VectorXc out(n * np);
    for (Eigen::Index i = 0; i < n; ++i)
        out.segment(i * np, np) = phi.vec()(i) * psi.vec();
    return UnitVector(std::move(out));
}

enum class Side { left, right };

/// Partial trace of a general Hermitian operator on a product space.
inline HermitianMatrix partial_trace_herm(const HermitianMatrix& h, Eigen::Index n, Eigen::Index np,
                                          Side keep) {
    if (n * np != h.dim()) throw usage_error("partial_trace: dims product mismatch");
    if (keep == Side::left) {
        MatrixXc out = MatrixXc::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index j = 0; j < np; ++j)
                    out(i, k) += h.mat()(i * np + j, k * np + j);
        return HermitianMatrix::symmetrized(out);
    }
    MatrixXc out = MatrixXc::Zero(np, np);
    for (Eigen::Index ip = 0; ip < np; ++ip)
        for (Eigen::Index kp = 0; kp < np; ++kp)
            for (Eigen::Index j = 0; j < n; ++j)
                out(ip, kp) += h.mat()(j * np + ip, j * np + kp);
    return HermitianMatrix::symmetrized(out);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, Side keep) {
    if (!rho.dims()) throw usage_error("partial_trace: density matrix has no dims set");
    auto [n, np] = *rho.dims();
    return DensityMatrix(partial_trace_herm(rho.base(), n, np, keep));
}

/// Transpose of the second tensor factor: (i,i'),(k,k') -> (i,k'),(k,i').
inline HermitianMatrix partial_transpose(const HermitianMatrix& h, Eigen::Index n, Eigen::Index np) {
    if (n * np != h.dim()) throw usage_error("partial_transpose: dims product mismatch");
    MatrixXc out(h.dim(), h.dim());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index ip = 0; ip < np; ++ip)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index kp = 0; kp < np; ++kp)
                    out(i * np + ip, k * np + kp) = h.mat()(i * np + kp, k * np + ip);
    return HermitianMatrix::symmetrized(out);
}

/// Smallest eigenvalue of the partial transpose on the second factor.
/// >= -1e-10 indicates PPT; on 2x2 systems this decides separability.
inline double ppt_min_eigenvalue(const DensityMatrix& rho) {
    if (!rho.dims()) throw usage_error("ppt_min_eigenvalue: density matrix has no dims set");
    auto [n, np] = *rho.dims();
    return eig_hermitian(partial_transpose(rho.base(), n, np)).eigenvalues.minCoeff();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw usage_error("trace_distance: dimension mismatch");
    HermitianMatrix diff = HermitianMatrix::symmetrized(a.mat() - b.mat());
    return 0.5 * eig_hermitian(diff).eigenvalues.cwiseAbs().sum();
}

} // namespace entroposep
