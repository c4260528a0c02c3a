#pragma once

#include <functional>
#include <vector>

#include "henon_rings/jet.hpp"
#include "henon_rings/params.hpp"

namespace hr {

using CJet = Jet2<cplx>;
using CJetPair = JetPair<cplx>;

using ResonanceMask = std::function<bool(int k, int l)>;

// (k+l)/2·β − β + (l−k)α ≈ (l−1)/3 is an integer iff l ≡ 1 mod 3
bool ushiki_resonance(int k, int l);

struct CohomologicalSolution {
    CJet Y;
    CJet residual;
};

// e^{−2πiβ} Y∘diag(λ₁,λ₂) − Y = G − residual
CohomologicalSolution cohomological_solve(const CJet& G, cplx alpha, cplx beta,
                                          const ResonanceMask& resonant = ushiki_resonance);

// h^mod as a jet pair of the given degree
CJetPair henon_mod_jet(const Params& p, int max_degree = 6);

struct BnfResult {
    cplx b21;
    cplx b04;
    std::vector<CJet> generator_jets;  // Y₁ (cubic), then Y₂ (quartic) when order = 4
    CJet F_prime;                      // generating function of diag⁻¹∘h^mod
    CJet F_normal;                     // generating function after the last step
    CJetPair conjugated;               // Φ_Y⁻¹∘h^mod∘Φ_Y for the steps taken
};

BnfResult resonant_bnf(const Params& p, int order = 4, int max_degree = 6);

// μ, ν read from b21 = iμ and −4i·b04 = ν
inline cplx bnf_mu(const BnfResult& r) { return r.b21 / I; }
inline cplx bnf_nu(const BnfResult& r) { return -4.0 * I * r.b04; }

}  // namespace hr
