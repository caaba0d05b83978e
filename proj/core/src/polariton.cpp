#include "eitmem/polariton.hpp"

#include <cmath>

#include "eitmem/error.hpp"

namespace eitmem {

PolaritonPair to_polaritons(const FieldGrid& e, const FieldGrid& sigma_bc, double theta, double N)
{
    require(e.grid == sigma_bc.grid, ErrorCategory::invalid_input, "field grids differ");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double rootN = std::sqrt(N);
    PolaritonPair out{FieldGrid(e.grid), FieldGrid(e.grid)};
    for (std::size_t j = 0; j < e.size(); ++j) {
        const cplx atoms = rootN * sigma_bc.values[j];
        out.psi.values[j] = c * e.values[j] - s * atoms;
        out.phi.values[j] = s * e.values[j] + c * atoms;
    }
    return out;
}

FieldAtomPair from_polaritons(const FieldGrid& psi, const FieldGrid& phi, double theta, double N)
{
    require(psi.grid == phi.grid, ErrorCategory::invalid_input, "field grids differ");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double inv_rootN = 1.0 / std::sqrt(N);
    FieldAtomPair out{FieldGrid(psi.grid), FieldGrid(psi.grid)};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        out.e.values[j] = c * psi.values[j] + s * phi.values[j];
        out.sigma_bc.values[j] = -(s * psi.values[j] - c * phi.values[j]) * inv_rootN;
    }
    return out;
}

} // namespace eitmem
