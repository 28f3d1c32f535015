#pragma once

// SIMD implementation of the detuning-sweep kernels, templated on the simd
// vector type so each ISA translation unit instantiates its own copy with
// its native width.  The algebra mirrors the closed-form solvers with two
// mechanical changes: complex arithmetic on split re/im lanes, and the
// exp(i phase) factors built from one sincos of the half angle each
// (full angles via double-angle identities).

#include <experimental/simd>

#include "cqed/kernels.hpp"
#include "cqed/params.hpp"

namespace cqed::kernels::detail {

namespace stdx = std::experimental;

template <class V>
struct CV {  // complex with vector lanes
    V re, im;
};

template <class V>
inline CV<V> cmul(const CV<V>& a, const CV<V>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class V>
inline CV<V> conj(const CV<V>& a) {
    return {a.re, -a.im};
}

template <class V>
inline CV<V> cscale(double s, const CV<V>& a) {
    return {V(s) * a.re, V(s) * a.im};
}

template <class V>
inline CV<V> cadd(const CV<V>& a, const CV<V>& b) {
    return {a.re + b.re, a.im + b.im};
}

template <class V>
inline CV<V> csub(const CV<V>& a, const CV<V>& b) {
    return {a.re - b.re, a.im - b.im};
}

// i * a
template <class V>
inline CV<V> itimes(const CV<V>& a) {
    return {-a.im, a.re};
}

template <class V>
inline CV<V> cinv(const CV<V>& a) {
    const V n = a.re * a.re + a.im * a.im;
    return {a.re / n, -a.im / n};
}

// Shared per-point phases and emitter response.
template <class V>
struct Common {
    CV<V> tb;    // tilde beta
    CV<V> z;     // e^{-i da/nu}
    CV<V> zh;    // e^{-i da/(2 nu)}
    CV<V> root;  // sqrt(beta gamma) / (gamma + i d0) = sqrt(tb/(gamma + i d0))
};

template <class V>
inline Common<V> common_terms(const V& x, double ecd, double beta, double gamma,
                              double nu) {
    Common<V> c;
    const V d0 = x + V(ecd);
    const V da = x;
    const V denom = V(gamma * gamma) + d0 * d0;
    c.tb.re = V(beta * gamma * gamma) / denom;
    c.tb.im = -V(beta * gamma) * d0 / denom;

    const V half_rt = da * V(-0.5 / nu);  // -da/(2 nu)
    c.zh.re = stdx::cos(half_rt);
    c.zh.im = stdx::sin(half_rt);
    c.z.re = V(2.0) * c.zh.re * c.zh.re - V(1.0);
    c.z.im = V(2.0) * c.zh.re * c.zh.im;

    const double sqrt_bg = std::sqrt(beta * gamma);
    const V n2 = denom;  // |gamma + i d0|^2
    c.root.re = V(sqrt_bg * gamma) / n2;
    c.root.im = -V(sqrt_bg) * d0 / n2;
    return c;
}

template <class V>
inline void store(std::vector<Complex>& dst, std::size_t at, std::size_t count,
                  const CV<V>& v) {
    for (std::size_t l = 0; l < count; ++l) {
        dst[at + l] = Complex(v.re[l], v.im[l]);
    }
}

template <class V>
struct FpConstants {
    double gamma, beta, nu, alpha0, xa_frac, r1, t1, r2, t2, amp, ecd;
};

template <class V>
inline void fp_point_block(const FpConstants<V>& k, const V& x, std::size_t at,
                           std::size_t count, CascadeBatch& out) {
    const Common<V> c = common_terms<V>(x, k.ecd, k.beta, k.gamma, k.nu);

    const V alpha_half =
        V(0.5 * k.alpha0) + x * V(-0.5 * (1.0 - k.xa_frac) / k.nu);
    CV<V> eh;  // e^{i alpha/2}
    eh.re = stdx::cos(alpha_half);
    eh.im = stdx::sin(alpha_half);
    CV<V> eia;  // e^{i alpha}
    eia.re = V(2.0) * eh.re * eh.re - V(1.0);
    eia.im = V(2.0) * eh.re * eh.im;

    const CV<V> two_tb_m1 = {V(2.0) * c.tb.re - V(1.0), V(2.0) * c.tb.im};
    const CV<V> n_term1 = cmul(cmul(c.z, conj(eia)), cscale(k.r1, c.tb));
    const CV<V> n_term2 = cmul(eia, cscale(k.r2, c.tb));
    const CV<V> n_term3 = cmul(c.z, cscale(k.r1 * k.r2, two_tb_m1));
    CV<V> N = {V(1.0) - n_term1.re - n_term2.re + n_term3.re,
               -n_term1.im - n_term2.im + n_term3.im};
    const CV<V> invN = cinv(N);

    const CV<V> amp_invN = cscale(k.amp, invN);
    const CV<V> r2tb_eia = cmul(eia, cscale(k.r2, c.tb));
    const CV<V> num1 = {r2tb_eia.re - V(1.0), r2tb_eia.im};
    const CV<V> num2 = {c.tb.re - V(1.0), c.tb.im};
    const CV<V> num4a = cscale(k.r2, two_tb_m1);
    const CV<V> num4b = cmul(conj(eia), c.tb);
    const CV<V> num4 = csub(num4a, num4b);

    const CV<V> phi1 = cscale(-k.t1, itimes(cmul(num1, amp_invN)));
    const CV<V> phi2 = cscale(-k.t1, itimes(cmul(num2, amp_invN)));
    const CV<V> phi3 = cscale(k.t1 * k.r2, itimes(cmul(num2, amp_invN)));
    const CV<V> phi4 = cscale(k.t1, itimes(cmul(num4, amp_invN)));

    // (e^{ia/2} r2 - e^{-ia/2})
    const CV<V> standing = {k.r2 * eh.re - eh.re, k.r2 * eh.im + eh.im};
    const CV<V> phi0 =
        cscale(-k.t1, cmul(cmul(c.zh, c.root), cmul(standing, amp_invN)));

    CV<V> phi_ref = cmul(c.z, cscale(k.t1, phi4));
    phi_ref.im += V(k.r1 * k.amp);
    const CV<V> phi_trans = cmul(c.zh, cscale(k.t2, phi2));

    store(out.phi1, at, count, phi1);
    store(out.phi2, at, count, phi2);
    store(out.phi3, at, count, phi3);
    store(out.phi4, at, count, phi4);
    store(out.phi0, at, count, phi0);
    store(out.phi_ref, at, count, phi_ref);
    store(out.phi_trans, at, count, phi_trans);
}

template <class V>
inline void ring_point_block(const FpConstants<V>& k, const V& x, std::size_t at,
                             std::size_t count, CascadeBatch& out) {
    const Common<V> c = common_terms<V>(x, k.ecd, k.beta, k.gamma, k.nu);

    const CV<V> two_tb_m1 = {V(2.0) * c.tb.re - V(1.0), V(2.0) * c.tb.im};
    const CV<V> loop = cmul(c.z, cscale(k.r1 * k.r2, two_tb_m1));
    const CV<V> N = {V(1.0) + loop.re, loop.im};
    const CV<V> amp_invN = cscale(k.amp, cinv(N));

    const CV<V> one_m_2tb = {V(1.0) - V(2.0) * c.tb.re, -V(2.0) * c.tb.im};
    const CV<V> phi1 = cscale(-k.t1, itimes(amp_invN));
    const CV<V> phi2 = cscale(-k.t1, itimes(cmul(one_m_2tb, amp_invN)));
    const CV<V> phi34 = cscale(k.r2, phi2);

    const V alpha_half =
        V(0.5 * k.alpha0) + x * V(-0.5 * (1.0 - k.xa_frac) / k.nu);
    CV<V> emh;  // e^{-i alpha/2}
    emh.re = stdx::cos(alpha_half);
    emh.im = -stdx::sin(alpha_half);
    // root for the ring carries the chiral coupling 2 beta:
    // sqrt(2 tb/(gamma+i d0)) = sqrt(2) * root
    const CV<V> phi0 = cscale(-k.t1 * std::sqrt(2.0),
                              cmul(cmul(c.zh, c.root), cmul(emh, amp_invN)));

    CV<V> phi_ref = cmul(c.z, cscale(k.t1, phi34));
    phi_ref.im += V(k.r1 * k.amp);
    const CV<V> phi_trans = cmul(c.zh, cscale(k.t2, phi2));

    store(out.phi1, at, count, phi1);
    store(out.phi2, at, count, phi2);
    store(out.phi3, at, count, phi34);
    store(out.phi4, at, count, phi34);
    store(out.phi0, at, count, phi0);
    store(out.phi_ref, at, count, phi_ref);
    store(out.phi_trans, at, count, phi_trans);
}

template <class V>
struct JcConstants {
    double gamma, beta, nu, amp, ecd;
    double t1, loss_half;  // l_tot^2 / 2
    double coupling4s2;    // 4 sin^2(alpha0/2) (FP) or 2 (ring)
    double phi0_pref;      // -2 t1 |sin(alpha0/2)| (FP) or -sqrt(2) t1 (ring)
    double sqrt_2k1, sqrt_2k2, inv_sqrt_nu;
};

template <class V>
inline void jc_point_block(const JcConstants<V>& k, const V& x, std::size_t at,
                           std::size_t count, JcBatch& out) {
    const Common<V> c = common_terms<V>(x, k.ecd, k.beta, k.gamma, k.nu);
    const CV<V> one_m_tb = {V(1.0) - c.tb.re, -c.tb.im};
    const CV<V> loss = {V(k.loss_half), x * V(1.0 / k.nu)};  // l_tot^2/2 + i da/nu
    const CV<V> N = cadd(cmul(one_m_tb, loss), cscale(k.coupling4s2, c.tb));
    const CV<V> amp_invN = cscale(k.amp, cinv(N));

    const CV<V> phi_local = cscale(-k.t1, itimes(cmul(one_m_tb, amp_invN)));
    const CV<V> phi0 = cscale(k.phi0_pref, cmul(c.root, amp_invN));
    const CV<V> phi_a = cscale(k.inv_sqrt_nu, phi_local);
    CV<V> phi_ref = cscale(-k.sqrt_2k1, itimes(phi_a));
    phi_ref.re += V(k.amp);
    const CV<V> phi_trans = cscale(-k.sqrt_2k2, itimes(phi_a));

    store(out.phi_local, at, count, phi_local);
    store(out.phi0, at, count, phi0);
    store(out.phi_ref, at, count, phi_ref);
    store(out.phi_trans, at, count, phi_trans);
}

template <class V>
inline V load_block(std::span<const double> xs, std::size_t at, std::size_t count) {
    V x(0.0);
    for (std::size_t l = 0; l < count; ++l) x[l] = xs[at + l];
    for (std::size_t l = count; l < V::size(); ++l) x[l] = xs[at + count - 1];
    return x;
}

template <class V>
void cascaded_sweep(const SystemSpec& base, double ecd, std::span<const double> xs,
                    CascadeBatch& out) {
    base.validate();
    out.resize(xs.size());
    FpConstants<V> k;
    k.gamma = base.emitter.gamma;
    k.beta = base.geometry == Geometry::FabryPerot ? base.emitter.beta_total()
                                                   : base.emitter.beta1;
    k.nu = base.cavity.nu_fsr;
    k.alpha0 = base.cavity.alpha0;
    k.xa_frac = base.cavity.xa_frac;
    k.r1 = base.mirror1.r;
    k.t1 = base.mirror1.t;
    k.r2 = base.mirror2.r;
    k.t2 = base.mirror2.t;
    k.amp = base.probe.amp_in;
    k.ecd = ecd;

    const std::size_t W = V::size();
    for (std::size_t i = 0; i < xs.size(); i += W) {
        const std::size_t count = std::min(W, xs.size() - i);
        const V x = load_block<V>(xs, i, count);
        if (base.geometry == Geometry::FabryPerot) {
            fp_point_block<V>(k, x, i, count, out);
        } else {
            ring_point_block<V>(k, x, i, count, out);
        }
    }
}

template <class V>
void jc_sweep(const SystemSpec& base, double ecd, std::span<const double> xs,
              JcBatch& out) {
    base.validate();
    out.resize(xs.size());
    const DerivedParams d = derive_params(base);
    JcConstants<V> k;
    k.gamma = base.emitter.gamma;
    k.beta = d.beta_total;
    k.nu = base.cavity.nu_fsr;
    k.amp = base.probe.amp_in;
    k.ecd = ecd;
    k.t1 = base.mirror1.t;
    k.loss_half = d.l_tot_sq / 2.0;
    const double s_half = std::sin(base.cavity.alpha0 / 2.0);
    if (base.geometry == Geometry::FabryPerot) {
        k.coupling4s2 = 4.0 * s_half * s_half;
        k.phi0_pref = -2.0 * base.mirror1.t * std::abs(s_half);
    } else {
        k.coupling4s2 = 2.0;
        k.phi0_pref = -std::sqrt(2.0) * base.mirror1.t;
    }
    k.sqrt_2k1 = std::sqrt(2.0 * d.kappa1);
    k.sqrt_2k2 = std::sqrt(2.0 * d.kappa2);
    k.inv_sqrt_nu = 1.0 / std::sqrt(k.nu);

    const std::size_t W = V::size();
    for (std::size_t i = 0; i < xs.size(); i += W) {
        const std::size_t count = std::min(W, xs.size() - i);
        const V x = load_block<V>(xs, i, count);
        jc_point_block<V>(k, x, i, count, out);
    }
}

}  // namespace cqed::kernels::detail
