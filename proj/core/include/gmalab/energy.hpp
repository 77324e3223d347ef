#pragma once

#include <cstdint>
#include <vector>

#include "gmalab/gma.hpp"
#include "gmalab/spectra.hpp"
#include "gmalab/torus.hpp"

namespace gmalab {

// Nodes and weights of the Gauss-Legendre rule on [0, 1], computed by
// Newton iteration on the Legendre polynomial (exact for polynomial
// integrands of degree <= 2*count - 1).
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre_unit(int count);

// Monge-Ampere energy primitive
//   I(phi) = (n+1)^{-1} sum_{j=0}^{n} mean( phi * [t^j] det(t*chi + chi_phi) / binom(n,j) ),
// the standard functional with I(0) = 0 whose directional derivative at phi
// is mean(psi * det chi_phi).  Determinants are taken in the lattice frame,
// i.e. all values are ratios against the standard volume.  Throws
// DegenerateField when chi_phi loses pointwise positivity.
double ma_energy(const HermitianMatrix& background, const PotentialField& phi);

// Same integral without the positivity precondition, for diagnostics along
// states where chi_phi (or alpha_phi) may be indefinite.
double ma_energy_primitive(const HermitianMatrix& background,
                           const PotentialField& phi);

// Path energy J(phi) = int_0^1 mean( phi * [ sum_k c_k S_k(lambda_t)/binom(n,k)
//   + c_0 - S_n(lambda_t) ] ) dt, where lambda_t is the relative spectrum of
// chi + t*i_ddbar(phi) against omega.  Gauss-Legendre quadrature in t
// (default 16 nodes); pointwise positivity of chi_{t*phi} is checked at the
// quadrature nodes and a violation throws DegenerateField carrying the
// failing t.
double gma_j_energy(const HermitianMatrix& background,
                    const HermitianMatrix& omega, const GmaCoefficients& coeffs,
                    const PotentialField& phi, int quadrature_nodes = 16);

// Path energy for the phase equation:
//   J(phi) = int_0^1 mean( phi * Im( e^{-i theta} Prod_j (lambda_j(x,t)+i) ) ) dt,
// lambda relative to omega along alpha + t*i_ddbar(phi).  The pointwise
// phase sum must stay in (0, pi) at the quadrature nodes, else
// DegenerateField with the failing t.
double dhym_j_energy(const HermitianMatrix& alpha_background,
                     const HermitianMatrix& omega, double theta,
                     const PotentialField& phi, int quadrature_nodes = 16);

// Positivity coefficient of one coordinate subtorus: the p-subset of the
// relative spectrum selected by `mask`, scored by
//   n! e_p - sum_{k=n-p}^{n-1} c_k k! (n-k)! e_{k-n+p}
// (c_0 enters only at p = n, where the forced value makes the margin 0).
struct IntersectionEntry {
    int p = 0;
    std::uint32_t mask = 0;
    double margin = 0.0;
};

struct IntersectionReport {
    // Constant term forced by the total-mass constraint:
    //   c_0 = S_n(lambda) - sum_{k>=1} c_k S_k(lambda) / binom(n,k).
    double forced_c0 = 0.0;
    // One entry per p = 1..n and per p-element subset of the spectrum.
    std::vector<IntersectionEntry> entries;
    // Smallest margin over the proper subsets (p < n); +infinity when n = 1.
    double min_proper_margin = 0.0;
};

// Class-level positivity data for constant backgrounds.  The backgrounds
// must commute (commutator max-norm below 1e-12) unless pencil_reduce is
// set, in which case the relative spectrum is used directly; non-commuting
// inputs without the flag throw std::domain_error.  The c0 stored in
// `coeffs` is ignored in favor of the forced value.
IntersectionReport intersection_numbers(const HermitianMatrix& chi_bg,
                                        const HermitianMatrix& omega_bg,
                                        const GmaCoefficients& coeffs,
                                        bool pencil_reduce = false);

} // namespace gmalab
