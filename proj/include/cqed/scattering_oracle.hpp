#pragma once

// Independent numerical route to the same steady states: the emitter-mirror
// system is assembled as a small complex linear system (unitary beamsplitter
// relations at the mirrors, explicit propagation phases on each leg, and a
// delta-coupled emitter with midpoint regularization) and solved by dense
// LU elimination with partial pivoting.  No closed-form result enters the
// construction, so this module serves as the oracle for the cascaded_solver
// formulas: magnitudes of phi0..phi4, phi_ref and phi_trans must match.
//
// Port conventions:
//   * mirror k maps (external in, internal in) -> (external out, internal out)
//     via the unitary [[i r, t], [i t, -r]];
//   * each region amplitude is defined at the start of its leg; internal
//     phases are therefore the oracle's own convention and only magnitudes
//     are contractual for phi1..phi4.

#include <string>
#include <vector>

#include "cqed/cascaded_solver.hpp"
#include "cqed/common.hpp"
#include "cqed/params.hpp"

namespace cqed {

struct EmitterScatterCoeffs {
    Complex t_at;         // transmission past the emitter, 1 - 2 b1 g/(g + i d0)
    Complex r_at;         // reflection, -2 sqrt(b1 b2) g/(g + i d0)
    Complex phi0_per_in;  // emitter amplitude per unit input
};

// Free-space scattering of a single delta-coupled emitter (no mirrors).
EmitterScatterCoeffs emitter_scatter(double beta1, double beta2, double gamma,
                                     double delta0);

// Optional override of how the propagation phase is distributed over the
// legs.  Only the sums theta_in + theta_out per cavity side are physical;
// observables are invariant under redistribution (tested).
struct LegPhases {
    double theta_m1_em;  // mirror1 <-> emitter legs (regions 1 and 4)
    double theta_em_m2;  // emitter <-> mirror2 legs (regions 2 and 3)
};

struct NetworkSystem {
    int n = 0;
    std::vector<Complex> matrix;  // row-major n x n
    std::vector<Complex> rhs;
    std::vector<std::string> unknowns;
};

// Assemble the steady-state boundary conditions for the given spec.  The
// construction is total; singularities surface at solve time.
NetworkSystem build_network(const SystemSpec& spec);
NetworkSystem build_network(const SystemSpec& spec, const LegPhases& phases);

struct OracleResult {
    FpSteadyState state;
    double condition;  // infinity-norm condition estimate of the system
};

// Dense complex LU solve (partial pivoting, extended precision internally).
// Throws SingularityError when the condition estimate exceeds 1e12.
OracleResult oracle_solve(const SystemSpec& spec);
OracleResult oracle_solve(const SystemSpec& spec, const LegPhases& phases);

// Solve an already-built system (exposed for the network-level tests).
std::vector<Complex> solve_dense(const NetworkSystem& sys, double* condition = nullptr);

}  // namespace cqed
