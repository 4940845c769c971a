#pragma once

// Hatano-Nelson and non-Hermitian SSH chains: parameters, banded realization
// at a chosen precision, analytic spectra and seeded on-site disorder.

#include "nhwave/mpreal.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nhwave {

using mp::Bits;

/// A real model parameter that remembers the decimal text it was given in,
/// so that it can be realized exactly (correctly rounded) at any precision.
class Decimal {
  public:
    Decimal() : Decimal(0.0) {}
    Decimal(double v);  // NOLINT: implicit on purpose, 0.2 stays "0.2"
    explicit Decimal(std::string text);

    double value() const noexcept { return value_; }
    const std::string& text() const noexcept { return text_; }
    mp::Real at(Bits bits) const { return mp::Real::from_string(text_, bits); }

    friend bool operator==(const Decimal& a, const Decimal& b) { return a.text_ == b.text_; }

  private:
    std::string text_;
    double value_;
};

enum class Variant { HatanoNelson, NhSsh };
enum class Boundary { Open, Periodic };

struct DisorderSpec {
    double w = 0.0;           ///< draws are uniform on [-w, w]
    std::uint64_t seed = 0;
};

struct HnParams {
    Decimal t_l{1.0};
    Decimal t_r{1.0};
};

struct SshParams {
    Decimal t1{1.0};
    Decimal t2{1.0};
    Decimal gamma{0.0};
};

struct ModelSpec {
    Variant variant = Variant::HatanoNelson;
    int N = 2;                ///< sites (HN) or unit cells (SSH)
    double a = 1.0;
    Boundary boundary = Boundary::Open;
    HnParams hn;
    SshParams ssh;
    std::optional<DisorderSpec> disorder;

    static ModelSpec hatano_nelson(int N, Decimal t_l, Decimal t_r, Boundary b = Boundary::Open);
    static ModelSpec nh_ssh(int cells, Decimal t1, Decimal t2, Decimal gamma, Boundary b = Boundary::Open);

    /// Matrix dimension: N for HN, 2N for SSH.
    int dim() const noexcept { return variant == Variant::HatanoNelson ? N : 2 * N; }
    /// Signed geometric-mean hopping sqrt(t_l t_r) (HN only).
    double t0() const;
    /// Effective intra-cell hopping of the Hermitized SSH chain.
    double ssh_t1_tilde() const;
    bool clean() const noexcept { return !disorder || disorder->w == 0.0; }
    ModelSpec with_disorder(DisorderSpec d) const;

    /// Throws InvalidParameter / DimensionError when invariants fail.
    void validate() const;
};

std::string to_string(Variant v);
std::string to_string(Boundary b);

/// Real tridiagonal matrix with optional wrap-around corners.
struct BandedMatrix {
    std::vector<mp::Real> diag;   ///< (n, n)
    std::vector<mp::Real> upper;  ///< (n, n+1)
    std::vector<mp::Real> lower;  ///< (n+1, n)
    std::optional<mp::Real> corner_upper;  ///< (0, dim-1)
    std::optional<mp::Real> corner_lower;  ///< (dim-1, 0)

    std::size_t dim() const noexcept { return diag.size(); }
    /// Entry (i, j); zero outside the band.
    mp::Real at(std::size_t i, std::size_t j) const;
    BandedMatrix transpose() const;
};

struct Hamiltonian {
    BandedMatrix matrix;
    Bits precision_bits = mp::kDoubleBits;
    ModelSpec model;

    std::size_t dim() const noexcept { return matrix.dim(); }
    mp::Real at(std::size_t i, std::size_t j) const { return matrix.at(i, j); }
    /// Hermitian conjugate; entries are real so this is the transpose.
    Hamiltonian adjoint() const;
};

enum class SpectrumBasis { PbcBloch, ObcAnalytic, Numeric };

struct SpectrumResult {
    std::vector<std::complex<double>> energies;
    std::vector<double> labels;  ///< k_m for Bloch, mode index m for OBC
    SpectrumBasis basis = SpectrumBasis::Numeric;
};

Hamiltonian build_hamiltonian(const ModelSpec& spec, Bits precision_bits);

SpectrumResult pbc_spectrum(const ModelSpec& spec);
SpectrumResult obc_spectrum_hn(const ModelSpec& spec);
/// OBC eigenvector m (1-based) of clean HN: sqrt(2/(N+1)) r^n sin(theta_m n).
std::vector<mp::Real> obc_eigenvector_hn(const ModelSpec& spec, int m, Bits bits);

/// Deterministic uniform draws on [-w, w]; see rng.hpp for the generator.
std::vector<double> disorder_realization(const DisorderSpec& d, int N);

}  // namespace nhwave
