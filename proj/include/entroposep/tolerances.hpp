#pragma once

namespace entroposep {

/// Central tolerance record. Every structural validation in the library reads
/// from one of these; tests that stress validation override single fields.
struct Tolerances {
    double hermiticity = 1e-12;    // |H_ij - conj(H_ji)| allowed
    double unit_trace = 1e-10;     // |tr(rho) - 1| allowed
    double psd_floor = -1e-10;     // smallest eigenvalue a density matrix may have
    double unit_norm = 1e-12;      // | ||phi||^2 - 1 | allowed
    double unitarity = 1e-10;      // ||U*U - I||_max allowed
    double reconstruction = 1e-10; // ||U diag(l) U* - H||_max allowed
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

} // namespace entroposep
