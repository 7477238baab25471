#pragma once

#include <cstdint>
#include <vector>

#include "factored.hpp"
#include "quaternion.hpp"
#include "series.hpp"

namespace qjensen {

struct SingularNode : DomainError {
    using DomainError::DomainError;
};

struct GridSpec {
    int n_psi = 48;
    int n_theta = 48;
    int n_phi = 96;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Product rule on the unit 3-sphere in hyperspherical angles: Gauss-Chebyshev
/// (second kind) in psi so that the sin^2 psi Jacobian is integrated exactly,
/// Gauss-Legendre in cos theta, midpoint in the periodic phi. Weights sum to
/// 2 pi^2 rho^3.
class S3Grid {
public:
    S3Grid(const GridSpec& spec, double rho);

    double rho() const { return rho_; }
    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return dirs_.size(); }
    const std::vector<Quaternion>& unit_directions() const { return dirs_; }
    const std::vector<double>& weights() const { return weights_; }  // include rho^3
    double surface_area() const;                                     // 2 pi^2 rho^3

    /// Grid with every node rotated by x -> p x q (p, q unit quaternions).
    S3Grid rotated(const Quaternion& p, const Quaternion& q) const;

private:
    GridSpec spec_;
    double rho_ = 1.0;
    std::vector<Quaternion> dirs_;   // unit nodes
    std::vector<double> weights_;    // sum = 2 pi^2 rho^3
};

/// Outcome metadata for singularity-driven grid rotation retries.
struct MeanMetadata {
    int rotations_tried = 0;
    std::uint64_t seed = 0;
    double min_node_clearance = -1.0;  // -1 when no ledger was supplied
};

/// Weighted average of g over the sphere |y| = rho. Rotates the grid up to
/// five times (seeded) when a node lands within 1e-6 of a ledger singularity
/// or g is non-finite at a node; throws SingularNode if all retries fail.
double mean_on_s3(const RealEvaluator& g, double rho, const S3Grid& grid,
                  const ZeroPoleLedger* ledger = nullptr, std::uint64_t seed = 0,
                  MeanMetadata* meta = nullptr);

/// Monte-Carlo cross-check (Gaussian direction sampling); never the default path.
struct MonteCarloMean {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};
MonteCarloMean mc_mean_on_s3(const RealEvaluator& g, double rho, std::size_t samples,
                             std::uint64_t seed);

/// Average of I -> g(alpha + I beta) over the unit 2-sphere of imaginary units.
double mean_on_s2_units(const RealEvaluator& g, double alpha, double beta, int n_theta = 32,
                        int n_phi = 64);
Quaternion mean_on_s2_units_q(const Evaluator& g, double alpha, double beta, int n_theta = 32,
                              int n_phi = 64);
/// Total integral against the unit-sphere area measure (average times 4 pi).
double integral_on_s2_units(const RealEvaluator& g, double alpha, double beta, int n_theta = 32,
                            int n_phi = 64);

struct BallResolution {
    int n_radial = 128;
    GridSpec sphere{24, 24, 48};
};

/// Integral of g over the solid ball B(center, radius): Gauss-Legendre radial
/// shells times the S3 rule.
double ball4_integral(const RealEvaluator& g, const Quaternion& center, double radius,
                      const BallResolution& res = {});

/// Smooth compactly supported bump A exp(-1/(1-t^2)), t = |x-center|/radius,
/// zero outside. Default amplitude e makes the center value 1.
class BumpFunction {
public:
    BumpFunction(const Quaternion& center, double radius, double amplitude = 2.718281828459045235);

    const Quaternion& center() const { return center_; }
    double radius() const { return radius_; }
    double amplitude() const { return amplitude_; }

    double operator()(const Quaternion& x) const { return profile((x - center_).norm()); }
    double profile(double r) const;

    /// First four radial derivatives of the profile, exact up to rounding
    /// (the profile is exp of a rational function).
    struct Jet {
        double value = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
    };
    Jet profile_jet(double r) const;

    /// Radial 4D Laplacian w'' + 3w'/r and bilaplacian
    /// w'''' + 6w'''/r + 3w''/r^2 - 3w'/r^3 from the analytic jet.
    double laplacian(const Quaternion& x) const;
    double bilaplacian(const Quaternion& x) const;

private:
    Quaternion center_{};
    double radius_ = 1.0;
    double amplitude_ = 1.0;
};

/// Deterministic pairwise-tree reduction (bit-stable across thread counts).
double pairwise_sum(const std::vector<double>& values);

/// Evaluates fn(i) for i in [0, n) with at most QJ_THREADS workers; results
/// must be written to caller-owned slots so the reduction order stays fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Unit quaternion pair (p, q) drawn from a seeded generator; x -> p x q
/// ranges over SO(4).
std::pair<Quaternion, Quaternion> random_rotation(std::uint64_t seed);

} // namespace qjensen
