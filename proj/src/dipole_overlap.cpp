#include "cqed/dipole_overlap.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace cqed {

namespace {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Newton iteration on P_n with the usual downward recurrence; plenty for the
// orders used here (<= a few thousand).
GaussLegendre gauss_legendre(int n) {
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[k] = -x;
        q.nodes[n - 1 - k] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[k] = w;
        q.weights[n - 1 - k] = w;
    }
    return q;
}

// Tensor-product integral of f(theta, phi) sin(theta) over the sphere:
// Gauss-Legendre in theta on [0, pi], uniform (periodic trapezoid) in phi.
double sphere_integral(int n_theta, int n_phi,
                       const std::function<double(double, double)>& f) {
    const GaussLegendre gl = gauss_legendre(n_theta);
    const double dphi = 2.0 * kPi / n_phi;
    double total = 0.0;
    for (int it = 0; it < n_theta; ++it) {
        const double theta = kPi * (gl.nodes[it] + 1.0) / 2.0;
        const double wt = gl.weights[it] * kPi / 2.0 * std::sin(theta);
        double row = 0.0;
        for (int ip = 0; ip < n_phi; ++ip) {
            row += f(theta, ip * dphi);
        }
        total += wt * row * dphi;
    }
    return total;
}

// Polarization unit vector of the x-polarized paraxial beam, decomposed on
// (theta_hat, phi_hat): e_G = cos(phi) theta_hat - sin(phi) phi_hat.
// The transverse dipole pattern (e_r x x_hat) x e_r decomposes as
// cos(theta)cos(phi) theta_hat - sin(phi) phi_hat (unnormalized).
double gauss_dot_dipole(double theta, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return c * (std::cos(theta) * c) + (-s) * (-s);
}

double dipole_intensity(double theta, double phi) {
    const double ct = std::cos(theta) * std::cos(phi);
    const double s = std::sin(phi);
    return ct * ct + s * s;
}

struct OverlapAtOrder {
    double beta_one_lobe;
    double gauss_norm;
    double dipole_norm;
};

OverlapAtOrder overlap_at(double theta0, int n_theta, int n_phi) {
    OverlapAtOrder o;
    o.gauss_norm = sphere_integral(n_theta, n_phi, [&](double th, double) {
        const double a = std::exp(-th * th / (theta0 * theta0));
        return a * a;
    });
    o.dipole_norm = sphere_integral(n_theta, n_phi, dipole_intensity);
    const double cross = sphere_integral(n_theta, n_phi, [&](double th, double ph) {
        return std::exp(-th * th / (theta0 * theta0)) * gauss_dot_dipole(th, ph);
    });
    o.beta_one_lobe = cross * cross / (o.gauss_norm * o.dipole_norm);
    return o;
}

}  // namespace

void OverlapConfig::validate() const {
    if (!(w0_over_lambda > 0.0)) {
        throw InvalidSpec("waist w0 must be positive, got " +
                          std::to_string(w0_over_lambda));
    }
    if (theta_points < 16 || phi_points < 16) {
        throw InvalidSpec("quadrature orders must be >= 16");
    }
}

double beta_analytic(double w0_over_lambda, Warnings* warnings) {
    if (!(w0_over_lambda > 0.0)) {
        throw InvalidSpec("waist w0 must be positive, got " +
                          std::to_string(w0_over_lambda));
    }
    if (w0_over_lambda < 1.0) {
        warn(warnings, "beta_analytic assumes w0 >~ lambda; result at w0/lambda = " +
                           std::to_string(w0_over_lambda) + " is extrapolated");
    }
    return 3.0 / (2.0 * kPi * kPi) / (w0_over_lambda * w0_over_lambda);
}

double dipole_self_overlap(int theta_points, int phi_points) {
    return sphere_integral(theta_points, phi_points, dipole_intensity);
}

double gauss_self_overlap(double theta0, int theta_points, int phi_points) {
    return sphere_integral(theta_points, phi_points, [&](double th, double) {
        const double a = std::exp(-th * th / (theta0 * theta0));
        return a * a;
    });
}

BetaNumericResult beta_numeric(const OverlapConfig& config) {
    config.validate();
    const double theta0 = 1.0 / (kPi * config.w0_over_lambda);

    const OverlapAtOrder coarse = overlap_at(theta0, config.theta_points, config.phi_points);
    const OverlapAtOrder fine =
        overlap_at(theta0, 2 * config.theta_points, 2 * config.phi_points);

    BetaNumericResult r;
    r.beta_coarse = 2.0 * coarse.beta_one_lobe;
    r.beta = 2.0 * fine.beta_one_lobe;
    r.theta_points_used = 2 * config.theta_points;
    r.phi_points_used = 2 * config.phi_points;
    const double dipole_exact = 8.0 * kPi / 3.0;
    r.dipole_norm_error = std::abs(fine.dipole_norm - dipole_exact) / dipole_exact;
    r.gauss_norm_change =
        std::abs(fine.gauss_norm - coarse.gauss_norm) / std::abs(fine.gauss_norm);

    if (std::abs(r.beta - r.beta_coarse) > 1e-6) {
        throw AccuracyError(
            "overlap quadrature has not converged: doubling the orders moved beta by " +
            std::to_string(std::abs(r.beta - r.beta_coarse)) +
            " (> 1e-6); increase theta_points/phi_points");
    }
    return r;
}

}  // namespace cqed
