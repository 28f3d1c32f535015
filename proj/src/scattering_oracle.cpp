#include "cqed/scattering_oracle.hpp"

#include <cmath>

namespace cqed {

namespace {

using Cld = std::complex<long double>;

constexpr double kConditionLimit = 1e12;

Complex to_d(Cld z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// LU decomposition with partial pivoting on a dense complex matrix.
// n is at most 7 here, so the O(n^3) cost and the explicit inverse used for
// the condition estimate are negligible.
struct Lu {
    int n;
    std::vector<Cld> a;  // factored in place
    std::vector<int> piv;

    explicit Lu(int n_, std::vector<Cld> m) : n(n_), a(std::move(m)), piv(n_) {
        for (int k = 0; k < n; ++k) {
            int p = k;
            long double best = std::abs(a[k * n + k]);
            for (int r = k + 1; r < n; ++r) {
                const long double v = std::abs(a[r * n + k]);
                if (v > best) { best = v; p = r; }
            }
            piv[k] = p;
            if (p != k) {
                for (int c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
            }
            if (best == 0.0L) {
                throw SingularityError("scattering network matrix is exactly singular");
            }
            const Cld inv_piv = 1.0L / a[k * n + k];
            for (int r = k + 1; r < n; ++r) {
                const Cld f = a[r * n + k] * inv_piv;
                a[r * n + k] = f;
                for (int c = k + 1; c < n; ++c) a[r * n + c] -= f * a[k * n + c];
            }
        }
    }

    std::vector<Cld> solve(std::vector<Cld> b) const {
        // apply the full pivot sequence first; the stored L rows are already
        // in post-permutation order
        for (int k = 0; k < n; ++k) {
            if (piv[k] != k) std::swap(b[k], b[piv[k]]);
        }
        for (int k = 0; k < n; ++k) {
            for (int r = k + 1; r < n; ++r) b[r] -= a[r * n + k] * b[k];
        }
        for (int r = n - 1; r >= 0; --r) {
            for (int c = r + 1; c < n; ++c) b[r] -= a[r * n + c] * b[c];
            b[r] /= a[r * n + r];
        }
        return b;
    }
};

long double inf_norm(int n, const std::vector<Cld>& m) {
    long double best = 0.0L;
    for (int r = 0; r < n; ++r) {
        long double s = 0.0L;
        for (int c = 0; c < n; ++c) s += std::abs(m[r * n + c]);
        best = std::max(best, s);
    }
    return best;
}

struct DenseSolve {
    std::vector<Cld> x;
    double condition;
};

DenseSolve lu_solve_with_condition(int n, const std::vector<Cld>& m,
                                   const std::vector<Cld>& rhs) {
    Lu lu(n, m);
    DenseSolve out;
    out.x = lu.solve(rhs);

    // ||A||_inf * ||A^-1||_inf via the explicit inverse (n <= 7).
    std::vector<Cld> inv(n * n);
    for (int c = 0; c < n; ++c) {
        std::vector<Cld> e(n, Cld(0.0L));
        e[c] = 1.0L;
        const std::vector<Cld> col = lu.solve(std::move(e));
        for (int r = 0; r < n; ++r) inv[r * n + c] = col[r];
    }
    out.condition = static_cast<double>(inf_norm(n, m) * inf_norm(n, inv));
    return out;
}

// One assembler for both precisions: the public NetworkSystem carries double
// entries, while the solver assembles the same system directly in long double
// (near resonance the solution amplifies entry rounding by the buildup).
template <typename C>
struct Assembled {
    int n = 0;
    std::vector<C> matrix;
    std::vector<C> rhs;
    std::vector<std::string> unknowns;
};

// Pass phases = nullptr to derive the default leg phases in the working
// precision R (the long-double solve path needs them at full precision).
template <typename C>
Assembled<C> assemble(const SystemSpec& spec, const LegPhases* phases) {
    using R = typename C::value_type;
    spec.validate();
    const R gamma = spec.emitter.gamma;
    const R gamma_l = spec.emitter.gamma_l();
    const R v1 = std::sqrt(R(2) * R(spec.emitter.beta1) * gamma);
    const R v2 = std::sqrt(R(2) * R(spec.emitter.beta2) * gamma);
    const R r1 = spec.mirror1.r, t1 = spec.mirror1.t;
    const R r2 = spec.mirror2.r, t2 = spec.mirror2.t;
    const R d0 = spec.probe.delta0;
    const C amp(spec.probe.amp_in, R(0));
    const C i(R(0), R(1));
    R th1, th2;
    if (phases) {
        th1 = phases->theta_m1_em;
        th2 = phases->theta_em_m2;
    } else {
        const R roundtrip = -R(spec.probe.delta_a) / R(spec.cavity.nu_fsr);
        const R alpha = R(spec.cavity.alpha0) +
                        roundtrip * (R(1) - R(spec.cavity.xa_frac));
        th1 = (roundtrip - alpha) / R(2);
        th2 = alpha / R(2);
    }
    const C e1(std::cos(th1), std::sin(th1));
    const C e2(std::cos(th2), std::sin(th2));

    Assembled<C> sys;
    if (spec.geometry == Geometry::FabryPerot) {
        // Unknowns at region starts; legs: 1,4 <-> theta1 and 2,3 <-> theta2.
        sys.n = 7;
        sys.unknowns = {"phi1", "phi2", "phi3", "phi4", "phi0", "phi_ref", "phi_trans"};
        sys.matrix.assign(49, C(R(0)));
        sys.rhs.assign(7, C(R(0)));
        auto at = [&](int r, int c) -> C& { return sys.matrix[r * 7 + c]; };

        // mirror 1, internal output: phi1 = i t1 phi_in - r1 e1 phi4
        at(0, 0) = C(R(1));
        at(0, 3) = r1 * e1;
        sys.rhs[0] = i * t1 * amp;
        // emitter pass 1 jump: phi2 = e1 phi1 - i V1 phi0
        at(1, 0) = -e1;
        at(1, 1) = C(R(1));
        at(1, 4) = i * v1;
        // mirror 2, internal reflection: phi3 = -r2 e2 phi2
        at(2, 1) = r2 * e2;
        at(2, 2) = C(R(1));
        // emitter pass 2 jump: phi4 = e2 phi3 - i V2 phi0
        at(3, 2) = -e2;
        at(3, 3) = C(R(1));
        at(3, 4) = i * v2;
        // emitter steady state with the midpoint field (in + out)/2 per pass:
        // V1 (e1 phi1 + phi2)/2 + V2 (e2 phi3 + phi4)/2 + (d0 - i gamma_l) phi0 = 0
        at(4, 0) = v1 * e1 / R(2);
        at(4, 1) = C(v1 / R(2));
        at(4, 2) = v2 * e2 / R(2);
        at(4, 3) = C(v2 / R(2));
        at(4, 4) = C(d0, -gamma_l);
        // mirror 1, external output: phi_ref = i r1 phi_in + t1 e1 phi4
        at(5, 3) = -t1 * e1;
        at(5, 5) = C(R(1));
        sys.rhs[5] = i * r1 * amp;
        // mirror 2, external output: phi_trans = t2 e2 phi2
        at(6, 1) = -t2 * e2;
        at(6, 6) = C(R(1));
    } else {
        // Chiral ring: one pass per roundtrip, the back stretch is a single
        // region (phi3 = phi4).  Leg coupler2 -> coupler1 carries the phase
        // remainder so the loop total is -delta_a/nu_fsr.
        const R total = -R(spec.probe.delta_a) / R(spec.cavity.nu_fsr);
        const R th3 = total - th1 - th2;
        const C e3(std::cos(th3), std::sin(th3));
        sys.n = 6;
        sys.unknowns = {"phi1", "phi2", "phi34", "phi0", "phi_ref", "phi_trans"};
        sys.matrix.assign(36, C(R(0)));
        sys.rhs.assign(6, C(R(0)));
        auto at = [&](int r, int c) -> C& { return sys.matrix[r * 6 + c]; };

        // coupler 1: phi1 = i t1 phi_in - r1 e3 phi34
        at(0, 0) = C(R(1));
        at(0, 2) = r1 * e3;
        sys.rhs[0] = i * t1 * amp;
        // emitter jump: phi2 = e1 phi1 - i V1 phi0
        at(1, 0) = -e1;
        at(1, 1) = C(R(1));
        at(1, 3) = i * v1;
        // coupler 2: phi34 = -r2 e2 phi2
        at(2, 1) = r2 * e2;
        at(2, 2) = C(R(1));
        // emitter steady state (single pass)
        at(3, 0) = v1 * e1 / R(2);
        at(3, 1) = C(v1 / R(2));
        at(3, 3) = C(d0, -gamma_l);
        // external outputs
        at(4, 2) = -t1 * e3;
        at(4, 4) = C(R(1));
        sys.rhs[4] = i * r1 * amp;
        at(5, 1) = -t2 * e2;
        at(5, 5) = C(R(1));
    }
    return sys;
}

}  // namespace

EmitterScatterCoeffs emitter_scatter(double beta1, double beta2, double gamma,
                                     double delta0) {
    if (beta1 < 0.0 || beta2 < 0.0 || beta1 + beta2 > 1.0 + 1e-12) {
        throw InvalidSpec("emitter_scatter requires beta1, beta2 >= 0 and beta1+beta2 <= 1");
    }
    if (!(gamma > 0.0)) throw InvalidSpec("gamma must be positive");
    const Complex lorentz = 1.0 / Complex(gamma, delta0);
    EmitterScatterCoeffs c;
    c.t_at = 1.0 - 2.0 * beta1 * gamma * lorentz;
    c.r_at = -2.0 * std::sqrt(beta1 * beta2) * gamma * lorentz;
    c.phi0_per_in = Complex(0.0, -1.0) * std::sqrt(2.0 * beta1 * gamma) * lorentz;
    return c;
}

NetworkSystem build_network(const SystemSpec& spec) {
    const Assembled<Complex> a = assemble<Complex>(spec, nullptr);
    NetworkSystem sys;
    sys.n = a.n;
    sys.matrix = a.matrix;
    sys.rhs = a.rhs;
    sys.unknowns = a.unknowns;
    return sys;
}

NetworkSystem build_network(const SystemSpec& spec, const LegPhases& phases) {
    const Assembled<Complex> a = assemble<Complex>(spec, &phases);
    NetworkSystem sys;
    sys.n = a.n;
    sys.matrix = a.matrix;
    sys.rhs = a.rhs;
    sys.unknowns = a.unknowns;
    return sys;
}

std::vector<Complex> solve_dense(const NetworkSystem& sys, double* condition) {
    std::vector<Cld> m(sys.matrix.size());
    std::vector<Cld> b(sys.rhs.size());
    for (size_t k = 0; k < sys.matrix.size(); ++k) {
        m[k] = Cld(sys.matrix[k].real(), sys.matrix[k].imag());
    }
    for (size_t k = 0; k < sys.rhs.size(); ++k) {
        b[k] = Cld(sys.rhs[k].real(), sys.rhs[k].imag());
    }
    const DenseSolve res = lu_solve_with_condition(sys.n, m, b);
    if (condition) *condition = res.condition;
    if (!(res.condition < kConditionLimit)) {
        throw SingularityError("scattering network is numerically singular "
                               "(condition estimate " + std::to_string(res.condition) + ")");
    }
    std::vector<Complex> x(sys.n);
    for (int k = 0; k < sys.n; ++k) x[k] = to_d(res.x[k]);
    return x;
}

namespace {

OracleResult oracle_solve_impl(const SystemSpec& spec, const LegPhases* phases) {
    const Assembled<Cld> sys = assemble<Cld>(spec, phases);
    const DenseSolve res = lu_solve_with_condition(sys.n, sys.matrix, sys.rhs);
    if (!(res.condition < kConditionLimit)) {
        throw SingularityError("scattering network is numerically singular "
                               "(condition estimate " + std::to_string(res.condition) + ")");
    }

    OracleResult out;
    out.condition = res.condition;
    FpSteadyState& s = out.state;
    const std::vector<Cld>& x = res.x;
    if (spec.geometry == Geometry::FabryPerot) {
        s.phi1 = to_d(x[0]);
        s.phi2 = to_d(x[1]);
        s.phi3 = to_d(x[2]);
        s.phi4 = to_d(x[3]);
        s.phi0 = to_d(x[4]);
        s.phi_ref = to_d(x[5]);
        s.phi_trans = to_d(x[6]);
    } else {
        s.phi1 = to_d(x[0]);
        s.phi2 = to_d(x[1]);
        s.phi3 = to_d(x[2]);
        s.phi4 = to_d(x[2]);
        s.phi0 = to_d(x[3]);
        s.phi_ref = to_d(x[4]);
        s.phi_trans = to_d(x[5]);
    }
    if (!is_finite(s.phi1) || !is_finite(s.phi0) || !is_finite(s.phi_ref) ||
        !is_finite(s.phi_trans)) {
        throw SingularityError("scattering network solution is not finite");
    }
    // Diagnostic slot: the determinant is not tracked, expose the reciprocal
    // condition as a scale-free singularity measure instead.
    s.denom_N = Complex(1.0 / out.condition, 0.0);
    return out;
}

}  // namespace

OracleResult oracle_solve(const SystemSpec& spec) {
    return oracle_solve_impl(spec, nullptr);
}

OracleResult oracle_solve(const SystemSpec& spec, const LegPhases& phases) {
    return oracle_solve_impl(spec, &phases);
}

}  // namespace cqed
