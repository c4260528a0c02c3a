#include "henon_rings/bnf.hpp"

#include "henon_rings/henon.hpp"

namespace hr {

bool ushiki_resonance(int, int l) { return l % 3 == 1; }

CohomologicalSolution cohomological_solve(const CJet& G, cplx alpha, cplx beta,
                                          const ResonanceMask& resonant) {
    const int d = G.max_degree();
    const cplx l1 = std::exp(2.0 * pi * I * (-alpha + beta / 2.0));
    const cplx l2 = std::exp(2.0 * pi * I * (alpha + beta / 2.0));
    const cplx eb = std::exp(-2.0 * pi * I * beta);
    CohomologicalSolution s{CJet(d), CJet(d)};
    for (int k = 0; k <= d; ++k)
        for (int l = 0; k + l <= d; ++l) {
            const cplx g = G(k, l);
            if (g == cplx(0)) continue;
            if (resonant(k, l)) {
                s.residual(k, l) = g;
                continue;
            }
            const cplx div = eb * std::pow(l1, k) * std::pow(l2, l) - 1.0;
            if (std::abs(div) < 1e-8)
                throw NumericalError("SmallDivisor", "cohomological_solve: divisor below 1e-8 at (" +
                                                         std::to_string(k) + "," + std::to_string(l) + ")");
            s.Y(k, l) = g / div;
        }
    return s;
}

CJetPair henon_mod_jet(const Params& p, int max_degree) {
    auto [a, b] = henon_mod_map(CJet::z(max_degree), CJet::w(max_degree), p);
    return {a, b};
}

namespace {

CJetPair undo_linear(const CJetPair& m, const Params& p) {
    return {m[0] / p.lambda1, m[1] / p.lambda2};
}

CJetPair conjugate(const CJetPair& h, const CJet& Y) {
    return jet_compose(lie_flow<cplx>(-Y), jet_compose(h, lie_flow(Y)));
}

}  // namespace

BnfResult resonant_bnf(const Params& p, int order, int max_degree) {
    if (order != 3 && order != 4) throw std::invalid_argument("resonant_bnf: order must be 3 or 4");
    if (max_degree < order) throw std::invalid_argument("resonant_bnf: max_degree below order");
    BnfResult r;
    CJetPair h = henon_mod_jet(p, max_degree);
    r.F_prime = generating_function(undo_linear(h, p));
    CJet F = r.F_prime;
    for (int deg = 3; deg <= order; ++deg) {
        auto sol = cohomological_solve(F.homogeneous(deg), p.alpha, p.beta);
        h = conjugate(h, sol.Y);
        r.generator_jets.push_back(sol.Y);
        F = generating_function(undo_linear(h, p));
    }
    r.F_normal = F;
    r.conjugated = h;
    r.b21 = F(2, 1);
    r.b04 = F(0, 4);
    return r;
}

}  // namespace hr
