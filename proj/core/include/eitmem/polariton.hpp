#pragma once

#include "eitmem/grid.hpp"

namespace eitmem {

/// Dark (Psi) and bright (Phi) superpositions of the probe field and the
/// ground-state coherence at mixing angle theta.
struct PolaritonPair
{
    FieldGrid psi;
    FieldGrid phi;
};

struct FieldAtomPair
{
    FieldGrid e;
    FieldGrid sigma_bc;
};

/// Psi = cos E - sqrt(N) sin sigma_bc,  Phi = sin E + sqrt(N) cos sigma_bc
PolaritonPair to_polaritons(const FieldGrid& e, const FieldGrid& sigma_bc, double theta, double N);

/// E = cos Psi + sin Phi,  sigma_bc = -(sin Psi - cos Phi) / sqrt(N)
FieldAtomPair from_polaritons(const FieldGrid& psi, const FieldGrid& phi, double theta, double N);

} // namespace eitmem
