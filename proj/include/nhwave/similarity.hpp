#pragma once

// Diagonal similarity transform S with H' = S^-1 H S Hermitian, for the clean
// open Hatano-Nelson and SSH chains.

#include "nhwave/lattice.hpp"

#include <vector>

namespace nhwave {

struct SimilarityTransform {
    std::vector<mp::Real> diag;   ///< strictly positive entries s_i
    std::vector<double> log_diag; ///< ln s_i, finite where s_i would leave double range
    mp::Real r;
    Bits precision_bits = mp::kDoubleBits;

    std::size_t dim() const noexcept { return diag.size(); }
};

/// Geometric ratio r of the model at the requested precision.
mp::Real similarity_ratio(const ModelSpec& spec, Bits bits);

SimilarityTransform make_transform(const ModelSpec& spec, Bits bits);
/// Same diagonal pattern as make_transform but with a caller-supplied ratio.
SimilarityTransform make_transform_with_ratio(const ModelSpec& spec, const mp::Real& r);

Hamiltonian hermitian_counterpart(const Hamiltonian& h, const SimilarityTransform& s);

/// max |H^dagger - eta^-1 H eta| with eta = S S^dagger, using only the band.
double pseudo_hermiticity_residual(const Hamiltonian& h, const SimilarityTransform& s);
/// max |H - H^dagger| over the band.
double hermiticity_residual(const Hamiltonian& h);

/// v <- S^-1 v and v <- S v, in place.
void apply_inverse_transform(const SimilarityTransform& s, std::vector<mp::Complex>& v);
void apply_transform(const SimilarityTransform& s, std::vector<mp::Complex>& v);

}  // namespace nhwave
