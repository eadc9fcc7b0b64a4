#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "entroposep/matrix.hpp"
#include "entroposep/qmc.hpp"
#include "entroposep/rng.hpp"

namespace entroposep {

/// Operator-valued Monte-Carlo mean with per-entry standard errors.
/// std_err is conservative: the larger of the real- and imaginary-part
/// standard errors of the complex sample mean.
struct McEstimate {
    HermitianMatrix mean;
    Eigen::MatrixXd std_err;
    long samples = 0;
    std::uint64_t seed = 0;

    double max_std_err() const { return std_err.maxCoeff(); }
    /// Root sum of squares of per-entry standard errors.
    double aggregate_std_err() const { return std::sqrt(std_err.array().square().sum()); }
};

struct McOptions {
    int threads = 0; // 0 = machine parallelism
    bool low_discrepancy = false;
};

/// Uniform (unitarily invariant, total mass 1) draw from the unit sphere of
/// C^n: 2n standard Gaussian reals, normalized.
inline UnitVector sample_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
    if (n < 1) throw usage_error("sample_unit_vector: n >= 1 required");
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXc v(n);
    double norm2 = 0.0;
    do {
        for (Eigen::Index i = 0; i < n; ++i) {
            double re = gauss(rng);
            double im = gauss(rng);
            v(i) = Complex(re, im);
        }
        norm2 = v.squaredNorm();
    } while (!(norm2 > 1e-280));
    v /= std::sqrt(norm2);
    return UnitVector(std::move(v));
}

namespace detail {

struct ScalarWelford {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    void merge(const ScalarWelford& o) {
        if (o.count == 0) return;
        if (count == 0) { *this = o; return; }
        double total = static_cast<double>(count) + static_cast<double>(o.count);
        double delta = o.mean - mean;
        mean += delta * (static_cast<double>(o.count) / total);
        m2 += o.m2 + delta * delta * (static_cast<double>(count) * static_cast<double>(o.count) / total);
        count += o.count;
    }
    double std_err() const {
        if (count < 2) return 0.0;
        double var = m2 / static_cast<double>(count - 1);
        return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    }
};

/// Streaming accumulator for weighted projector means w * phi phi^*.
/// Maintains Welford mean/M2 for the real and imaginary part of every entry
/// of the upper triangle; merging is associative, and merges are always done
/// in shard order so results are thread-count independent.
class HermitianWelford {
public:
    explicit HermitianWelford(Eigen::Index dim = 0)
        : dim_(dim),
          mean_re_(Eigen::MatrixXd::Zero(dim, dim)),
          mean_im_(Eigen::MatrixXd::Zero(dim, dim)),
          m2_re_(Eigen::MatrixXd::Zero(dim, dim)),
          m2_im_(Eigen::MatrixXd::Zero(dim, dim)) {}

    void add(double weight, const VectorXc& v) {
        ++count_;
        const double inv_count = 1.0 / static_cast<double>(count_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            for (Eigen::Index j = i; j < dim_; ++j) {
                const Complex c = weight * v(i) * std::conj(v(j));
                double dre = c.real() - mean_re_(i, j);
                mean_re_(i, j) += dre * inv_count;
                m2_re_(i, j) += dre * (c.real() - mean_re_(i, j));
                double dim_part = c.imag() - mean_im_(i, j);
                mean_im_(i, j) += dim_part * inv_count;
                m2_im_(i, j) += dim_part * (c.imag() - mean_im_(i, j));
            }
        }
    }

    void merge(const HermitianWelford& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) { *this = o; return; }
        const double na = static_cast<double>(count_), nb = static_cast<double>(o.count_);
        const double total = na + nb;
        for (Eigen::Index i = 0; i < dim_; ++i) {
            for (Eigen::Index j = i; j < dim_; ++j) {
                double dre = o.mean_re_(i, j) - mean_re_(i, j);
                mean_re_(i, j) += dre * (nb / total);
                m2_re_(i, j) += o.m2_re_(i, j) + dre * dre * (na * nb / total);
                double dim_part = o.mean_im_(i, j) - mean_im_(i, j);
                mean_im_(i, j) += dim_part * (nb / total);
                m2_im_(i, j) += o.m2_im_(i, j) + dim_part * dim_part * (na * nb / total);
            }
        }
        count_ += o.count_;
    }

    long count() const { return count_; }

    McEstimate finalize(std::uint64_t seed) const {
        if (count_ < 2) throw usage_error("McEstimate: at least 2 samples required");
        MatrixXc mean(dim_, dim_);
        Eigen::MatrixXd err(dim_, dim_);
        const double denom = static_cast<double>(count_) * static_cast<double>(count_ - 1);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            for (Eigen::Index j = i; j < dim_; ++j) {
                Complex c(mean_re_(i, j), i == j ? 0.0 : mean_im_(i, j));
                mean(i, j) = c;
                mean(j, i) = std::conj(c);
                double se = std::sqrt(std::max(std::max(m2_re_(i, j), m2_im_(i, j)), 0.0) / denom);
                err(i, j) = se;
                err(j, i) = se;
            }
        }
        return McEstimate{HermitianMatrix(std::move(mean)), std::move(err), count_, seed};
    }

private:
    Eigen::Index dim_;
    long count_ = 0;
    Eigen::MatrixXd mean_re_, mean_im_, m2_re_, m2_im_;
};

inline std::string describe_sample(const VectorXc& v) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v(i).real() << (v(i).imag() < 0 ? "-" : "+") << std::abs(v(i).imag()) << "i";
    }
    os << "]";
    return os.str();
}

/// Fill `v` (n complex amplitudes) from 2n sequence Gaussians, normalized.
inline void qmc_unit_vector(const ScrambledGaussianSequence& seq, std::uint64_t index,
                            std::size_t coord_offset, Eigen::Index n, double* buffer, VectorXc& v) {
    seq.gaussian_point(index, buffer);
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double re = buffer[coord_offset + 2 * static_cast<std::size_t>(i)];
        double im = buffer[coord_offset + 2 * static_cast<std::size_t>(i) + 1];
        v(i) = Complex(re, im);
        norm2 += re * re + im * im;
    }
    if (!(norm2 > 0.0)) throw numeric_error("qmc_unit_vector: degenerate sequence point");
    v /= std::sqrt(norm2);
}

} // namespace detail

/// Estimate of the operator integral of weight(phi) * |phi><phi| over the
/// unit sphere of C^n with the uniform unit-mass measure.
inline McEstimate mc_projector_mean(const std::function<double(const UnitVector&)>& weight,
                                    Eigen::Index n, std::size_t m_samples, std::uint64_t seed,
                                    const McOptions& opts = {}) {
    if (m_samples < 2) throw usage_error("mc_projector_mean: m_samples >= 2 required");
    ShardPlan plan{m_samples};
    std::vector<detail::HermitianWelford> acc(plan.shard_count(), detail::HermitianWelford(n));
    std::unique_ptr<ScrambledGaussianSequence> seq;
    if (opts.low_discrepancy)
        seq = std::make_unique<ScrambledGaussianSequence>(2 * static_cast<std::size_t>(n), seed);

    run_sharded(plan.shard_count(), opts.threads, [&](std::size_t shard) {
        auto& a = acc[shard];
        const std::size_t count = plan.shard_size(shard);
        const std::size_t base = plan.shard_begin(shard);
        if (opts.low_discrepancy) {
            std::vector<double> buffer(2 * static_cast<std::size_t>(n));
            VectorXc v(n);
            for (std::size_t i = 0; i < count; ++i) {
                detail::qmc_unit_vector(*seq, base + i, 0, n, buffer.data(), v);
                UnitVector phi(v);
                double w = weight(phi);
                if (!std::isfinite(w))
                    throw numeric_error("mc_projector_mean: non-finite weight at sample " +
                                        std::to_string(base + i) + ", phi = " + detail::describe_sample(v));
                a.add(w, phi.vec());
            }
        } else {
            auto engine = make_engine(seed, SeedStream::sphere, shard);
            for (std::size_t i = 0; i < count; ++i) {
                UnitVector phi = sample_unit_vector(n, engine);
                double w = weight(phi);
                if (!std::isfinite(w))
                    throw numeric_error("mc_projector_mean: non-finite weight at sample " +
                                        std::to_string(base + i) + ", phi = " +
                                        detail::describe_sample(phi.vec()));
                a.add(w, phi.vec());
            }
        }
    });

    detail::HermitianWelford total(n);
    for (const auto& a : acc) total.merge(a);
    return total.finalize(seed);
}

/// Estimate of the integral of weight(phi, psi) * |phi psi><phi psi| over the
/// Cartesian product of the unit spheres of C^n and C^n'.
inline McEstimate mc_product_projector_mean(
    const std::function<double(const UnitVector&, const UnitVector&)>& weight, Eigen::Index n,
    Eigen::Index n_prime, std::size_t m_samples, std::uint64_t seed, const McOptions& opts = {}) {
    if (m_samples < 2) throw usage_error("mc_product_projector_mean: m_samples >= 2 required");
    const Eigen::Index d = n * n_prime;
    ShardPlan plan{m_samples};
    std::vector<detail::HermitianWelford> acc(plan.shard_count(), detail::HermitianWelford(d));
    std::unique_ptr<ScrambledGaussianSequence> seq;
    const std::size_t qmc_dims = 2 * static_cast<std::size_t>(n + n_prime);
    if (opts.low_discrepancy) seq = std::make_unique<ScrambledGaussianSequence>(qmc_dims, seed);

    run_sharded(plan.shard_count(), opts.threads, [&](std::size_t shard) {
        auto& a = acc[shard];
        const std::size_t count = plan.shard_size(shard);
        const std::size_t base = plan.shard_begin(shard);
        VectorXc product(d);
        auto accumulate = [&](const UnitVector& phi, const UnitVector& psi, std::size_t index) {
            double w = weight(phi, psi);
            if (!std::isfinite(w))
                throw numeric_error("mc_product_projector_mean: non-finite weight at sample " +
                                    std::to_string(index) + ", phi = " + detail::describe_sample(phi.vec()) +
                                    ", psi = " + detail::describe_sample(psi.vec()));
            for (Eigen::Index i = 0; i < n; ++i)
                product.segment(i * n_prime, n_prime) = phi.vec()(i) * psi.vec();
            a.add(w, product);
        };
        if (opts.low_discrepancy) {
            std::vector<double> buffer(qmc_dims);
            VectorXc vphi(n), vpsi(n_prime);
            for (std::size_t i = 0; i < count; ++i) {
                seq->gaussian_point(base + i, buffer.data());
                double norm_phi = 0.0, norm_psi = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    vphi(k) = Complex(buffer[2 * static_cast<std::size_t>(k)],
                                      buffer[2 * static_cast<std::size_t>(k) + 1]);
                    norm_phi += std::norm(vphi(k));
                }
                for (Eigen::Index k = 0; k < n_prime; ++k) {
                    std::size_t off = 2 * static_cast<std::size_t>(n + k);
                    vpsi(k) = Complex(buffer[off], buffer[off + 1]);
                    norm_psi += std::norm(vpsi(k));
                }
                if (!(norm_phi > 0.0) || !(norm_psi > 0.0))
                    throw numeric_error("mc_product_projector_mean: degenerate sequence point");
                vphi /= std::sqrt(norm_phi);
                vpsi /= std::sqrt(norm_psi);
                accumulate(UnitVector(vphi), UnitVector(vpsi), base + i);
            }
        } else {
            auto engine = make_engine(seed, SeedStream::product_sphere, shard);
            for (std::size_t i = 0; i < count; ++i) {
                UnitVector phi = sample_unit_vector(n, engine);
                UnitVector psi = sample_unit_vector(n_prime, engine);
                accumulate(phi, psi, base + i);
            }
        }
    });

    detail::HermitianWelford total(d);
    for (const auto& a : acc) total.merge(a);
    return total.finalize(seed);
}

/// Closed form of the integral of |<e|phi>|^{2m} |phi><phi| over the sphere:
/// m! (n-1)! / (m+n)! * (m |e><e| + I), evaluated in log space so the
/// factorial ratio never overflows for m*n <= 1e4.
inline HermitianMatrix moment_projector_integral(const UnitVector& e, long m, Eigen::Index n) {
    if (m < 0) throw usage_error("moment_projector_integral: m >= 0 required");
    if (e.dim() != n) throw usage_error("moment_projector_integral: e has wrong dimension");
    double log_coeff = std::lgamma(static_cast<double>(m) + 1.0) + std::lgamma(static_cast<double>(n)) -
                       std::lgamma(static_cast<double>(m + n) + 1.0);
    double coeff = std::exp(log_coeff);
    MatrixXc out = coeff * (static_cast<double>(m) * (e.vec() * e.vec().adjoint()) +
                            MatrixXc::Identity(n, n));
    return HermitianMatrix::symmetrized(out);
}

/// Trace of moment_projector_integral: m! (n-1)! / (m+n-1)!.
inline double moment_projector_trace(long m, Eigen::Index n) {
    return std::exp(std::lgamma(static_cast<double>(m) + 1.0) + std::lgamma(static_cast<double>(n)) -
                    std::lgamma(static_cast<double>(m + n)));
}

} // namespace entroposep
