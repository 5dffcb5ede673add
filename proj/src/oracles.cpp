// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsd/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsd {

namespace {

using Bloch = std::array<double, 3>;

double dot(const Bloch &a, const Bloch &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Bloch bloch_vector(const CMatrix &rho) {
    return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

Bloch normalized(const Bloch &v) {
    const double n = std::sqrt(dot(v, v));
    return {v[0] / n, v[1] / n, v[2] / n};
}

// Orthonormal pair spanning the Bloch vectors of the two states (any
// completion when they are parallel or zero).
std::pair<Bloch, Bloch> state_plane(const Bloch &r1, const Bloch &r2) {
    Bloch e1 = dot(r1, r1) > 1e-24 ? normalized(r1) : (dot(r2, r2) > 1e-24 ? normalized(r2) : Bloch{0, 0, 1});
    Bloch rest = r2;
    double along = dot(rest, e1);
    for (int c = 0; c < 3; ++c) {
        rest[static_cast<std::size_t>(c)] -= along * e1[static_cast<std::size_t>(c)];
    }
    if (dot(rest, rest) < 1e-24) {
        // Any unit vector orthogonal to e1.
        rest = std::abs(e1[0]) < 0.9 ? Bloch{1, 0, 0} : Bloch{0, 1, 0};
        along = dot(rest, e1);
        for (int c = 0; c < 3; ++c) {
            rest[static_cast<std::size_t>(c)] -= along * e1[static_cast<std::size_t>(c)];
        }
    }
    return {e1, normalized(rest)};
}

struct QubitPair {
    double p1, p2;
    Bloch r1, r2;
};

QubitPair qubit_pair(const ProblemSpec &spec, double lambda) {
    if (spec.dim() != 2 || spec.num_states() != 2) {
        throw std::invalid_argument("brute-force oracle needs two qubit states");
    }
    const auto noisy = spec.noisy_states(lambda);
    return {spec.priors()[0], spec.priors()[1], bloch_vector(noisy[0]), bloch_vector(noisy[1])};
}

double brute_med(const QubitPair &q, int grid) {
    const double pi = std::numbers::pi;
    double best = 0.0;
    for (int a = 0; a < grid; ++a) {
        const double theta = pi * a / (grid - 1);
        for (int b = 0; b < grid; ++b) {
            const double phi = 2.0 * pi * b / grid;
            const Bloch n{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
            // Tr(rho |n><n|) = (1 + r.n) / 2 and Tr(rho |-n><-n|) = (1 - r.n) / 2.
            const double up1 = 0.5 * (1.0 + dot(q.r1, n));
            const double down1 = 1.0 - up1;
            const double down2 = 0.5 * (1.0 - dot(q.r2, n));
            for (int c = 0; c < grid; ++c) {
                const double e = static_cast<double>(c) / (grid - 1);
                best = std::max(best, q.p1 * (up1 + e * down1) + q.p2 * (1.0 - e) * down2);
            }
        }
    }
    return best;
}

double brute_frio(const QubitPair &q, const Frio &frio, int grid) {
    const double pi = std::numbers::pi;
    const auto [e1, e2] = state_plane(q.r1, q.r2);
    const Bloch mean{q.p1 * q.r1[0] + q.p2 * q.r2[0], q.p1 * q.r1[1] + q.p2 * q.r2[1],
                     q.p1 * q.r1[2] + q.p2 * q.r2[2]};
    auto direction = [&](int t) {
        const double ang = 2.0 * pi * t / grid;
        return Bloch{std::cos(ang) * e1[0] + std::sin(ang) * e2[0], std::cos(ang) * e1[1] + std::sin(ang) * e2[1],
                     std::cos(ang) * e1[2] + std::sin(ang) * e2[2]};
    };
    double best = -1.0;
    for (int a = 0; a < grid; ++a) {
        const Bloch n1 = direction(a);
        const double hit1 = 0.5 * (1.0 + dot(q.r1, n1));
        const double mass1 = 0.5 * (1.0 + dot(mean, n1));
        for (int b = 0; b < grid; ++b) {
            const Bloch n2 = direction(b);
            const double hit2 = 0.5 * (1.0 + dot(q.r2, n2));
            const double mass2 = 0.5 * (1.0 + dot(mean, n2));
            // |<n1|n2>|^2 for the two qubit states.
            const double overlap = 0.5 * (1.0 + dot(n1, n2));
            for (int c = 0; c < grid; ++c) {
                const double w1 = static_cast<double>(c) / (grid - 1);
                // Largest w2 with I - w1 P1 - w2 P2 >= 0 is 1 / <n2|(I - w1 P1)^-1|n2>.
                double w2 = 0.0;
                if (w1 < 1.0) {
                    w2 = 1.0 / (1.0 + w1 / (1.0 - w1) * overlap);
                } else {
                    w2 = overlap < 1e-12 ? 1.0 : 0.0;
                }
                const double inc_without_2 = 1.0 - w1 * mass1;
                if (frio.bound == RateBound::AtLeast) {
                    if (inc_without_2 < frio.rate) {
                        continue;
                    }
                    if (mass2 > 0.0) {
                        w2 = std::min(w2, (inc_without_2 - frio.rate) / mass2);
                    }
                } else if (inc_without_2 - w2 * mass2 > frio.rate) {
                    continue;
                }
                best = std::max(best, q.p1 * w1 * hit1 + q.p2 * w2 * hit2);
            }
        }
    }
    if (best < 0.0) {
        throw std::invalid_argument("no grid point satisfies the inconclusive-rate bound");
    }
    return best;
}

}  // namespace

double helstrom_two_state(const DensityMatrix &rho1, const DensityMatrix &rho2, double p1) {
    if (rho1.dim() != rho2.dim()) {
        throw std::invalid_argument("states must share one dimension");
    }
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument("prior must lie in [0, 1]");
    }
    const RVector ev = hermitian_eigenvalues(p1 * rho1.matrix() - (1.0 - p1) * rho2.matrix());
    return 0.5 * (1.0 + ev.cwiseAbs().sum());
}

double uqsd_two_pure(const PureState &psi1, const PureState &psi2, double p1) {
    if (psi1.dim() != psi2.dim()) {
        throw std::invalid_argument("states must share one dimension");
    }
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument("prior must lie in [0, 1]");
    }
    const double s = std::min(1.0, std::abs(psi1.amplitudes().dot(psi2.amplitudes())));
    if (p1 == 0.5) {
        return 1.0 - s;
    }
    const double p2 = 1.0 - p1;
    const double s2 = s * s;
    if (s2 <= 0.0) {
        return 1.0;
    }
    auto value = [&](double q1) { return p1 * (1.0 - q1) + p2 * (1.0 - s2 / q1); };
    constexpr int kScan = 1000;
    double lo = s2;
    double hi = 1.0;
    int best = 0;
    double best_val = value(lo);
    for (int t = 1; t <= kScan; ++t) {
        const double q1 = s2 + (1.0 - s2) * t / kScan;
        if (const double v = value(q1); v > best_val) {
            best_val = v;
            best = t;
        }
    }
    lo = s2 + (1.0 - s2) * std::max(0, best - 1) / kScan;
    hi = s2 + (1.0 - s2) * std::min(kScan, best + 1) / kScan;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (value(m1) < value(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    return std::max(best_val, value(0.5 * (lo + hi)));
}

double brute_force_qubit_povm(const ProblemSpec &spec, const SchemeConfig &config, int grid) {
    if (grid < 2) {
        throw std::invalid_argument("grid must have at least two points per axis");
    }
    const QubitPair q = qubit_pair(spec, config.lambda_eval);
    if (std::holds_alternative<Med>(config.scheme)) {
        return brute_med(q, grid);
    }
    if (const auto *frio = std::get_if<Frio>(&config.scheme)) {
        return brute_frio(q, *frio, grid);
    }
    throw std::invalid_argument("brute-force oracle supports med and frio only");
}

}  // namespace qsd
