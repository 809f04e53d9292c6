#pragma once

// Exact verification of the linear reduction (matrix T), the five Lie-series
// generators F0..F4, the resulting degree-5 normal form
//   H^5 = -I1 + (I2/2 + eps I3/8 + (eta/4) I3^2) + (eps I1/8 + (mu/2) I1 I3),
// and numeric evaluation of the closed-form normal-form separatrix.

#include "gshe/exactpoly.hpp"
#include "gshe/mp.hpp"

namespace gshe {

// Original Hamiltonian (kappa, eps symbolic).
ExactPoly gshe_hamiltonian_exact();

// Linear reduction matrix; entries are rational multiples of sqrt(2).
std::array<std::array<ExactPoly, 4>, 4> reduction_matrix();

// H(T x); throws NotSymplectic unless T^T J T = J exactly.
ExactPoly linear_reduce(const ExactPoly& h);

std::array<ExactPoly, 5> lie_generators();

struct NormalFormReport {
    ExactPoly h2;          // after the linear reduction
    ExactPoly h5;          // after the five Lie flows, weight <= wcut + 3
    ExactPoly eta;         // extracted, polynomial in kappa
    ExactPoly mu;
    ExactPoly residual;    // weight <= 5 part of h5 minus the normal form (empty on success)
};

NormalFormReport psi5_normalize(int wcut = 5);

// I1 = q2 p1 - q1 p2, I2 = q1^2 + q2^2, I3 = p1^2 + p2^2
ExactPoly invariant_I(int which);

struct NFSeparatrix {
    BigComplex r5;        // sqrt(2/eta)/cosh z
    BigComplex R5;        // sqrt(2/eta) sinh z/cosh^2 z
    BigComplex theta5;    // phi - (delta mu/eta) tanh z
    BigComplex u_leading; // two-term u^- approximation
};

NFSeparatrix nf_separatrix(const BigReal& delta, const BigReal& kappa, const BigReal& phi,
                           const BigComplex& z, const Precision& prec);

void write_normal_form_report(std::ostream& os, const NormalFormReport& rep);

} // namespace gshe
