#include "polyopt/local_search.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "polyopt/instance_io.hpp"

namespace polyopt {

namespace {

struct Quadratic {
    std::size_t n;
    double c0 = 0.0;
    std::vector<double> lin;
    std::vector<double> quad;  // row-major symmetric, halves on off-diagonals

    explicit Quadratic(const PopInstance& inst) : n(inst.n), lin(n, 0.0), quad(n * n, 0.0) {
        for (const auto& [m, coef] : inst.objective.terms()) {
            double c = coef.to_double();
            int deg = m.degree();
            if (deg == 0) {
                c0 += c;
            } else if (deg == 1) {
                for (std::size_t i = 0; i < n; ++i)
                    if (m.exponent(i)) lin[i] += c;
            } else if (deg == 2) {
                int a = -1, b = -1;
                for (std::size_t i = 0; i < n; ++i) {
                    if (m.exponent(i) == 2) a = b = static_cast<int>(i);
                    if (m.exponent(i) == 1) (a < 0 ? a : b) = static_cast<int>(i);
                }
                if (a == b) {
                    quad[a * n + a] += c;
                } else {
                    quad[a * n + b] += c / 2.0;
                    quad[b * n + a] += c / 2.0;
                }
            } else {
                throw std::invalid_argument("ball_upper_bound expects a quadratic objective");
            }
        }
    }

    double value(const std::vector<double>& x) const {
        double v = c0;
        for (std::size_t i = 0; i < n; ++i) {
            v += lin[i] * x[i];
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += quad[i * n + j] * x[j];
            v += x[i] * row;
        }
        return v;
    }

    void gradient(const std::vector<double>& x, std::vector<double>& g) const {
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += quad[i * n + j] * x[j];
            g[i] = lin[i] + 2.0 * row;
        }
    }
};

void project_shell(std::vector<double>& x) {
    double nrm2 = 0.0;
    for (auto& v : x) {
        if (v < 0.0) v = 0.0;
        nrm2 += v * v;
    }
    double nrm = std::sqrt(nrm2);
    if (nrm < 1e-12) {
        x[0] = 0.6;
        return;
    }
    if (nrm < 0.6)
        for (auto& v : x) v *= 0.6 / nrm;
    else if (nrm > 1.0)
        for (auto& v : x) v *= 1.0 / nrm;
}

}  // namespace

double ball_upper_bound(const PopInstance& inst, int starts, std::uint64_t seed) {
    Quadratic q(inst);
    const std::size_t n = inst.n;
    std::uint64_t state = seed ^ 0xA3C59AC2B791ED4DULL;
    auto uniform = [&]() {
        return static_cast<double>(splitmix64(state) >> 11) / 9007199254740992.0;
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> x(n), g(n), trial(n);
    for (int s = 0; s < starts; ++s) {
        for (auto& v : x) v = uniform();
        project_shell(x);
        double fx = q.value(x);
        double step = 0.5;
        for (int iter = 0; iter < 400; ++iter) {
            q.gradient(x, g);
            bool moved = false;
            while (step > 1e-12) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
                project_shell(trial);
                double ft = q.value(trial);
                if (ft < fx - 1e-14) {
                    x = trial;
                    fx = ft;
                    moved = true;
                    step *= 1.6;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        best = std::min(best, fx);
    }
    return best;
}

}  // namespace polyopt
