#include "polyopt/conic_program.hpp"

#include <stdexcept>

namespace polyopt {

void ConicProgram::validate() const {
    std::vector<char> seen(num_vars, 0);
    auto touch = [&](std::int32_t v) {
        if (v < 0 || v >= num_vars) throw std::invalid_argument("cone variable out of range");
        if (seen[v]) throw std::invalid_argument("variable in more than one cone block");
        seen[v] = 1;
    };
    for (const auto& cone : cones) {
        if (const auto* nn = std::get_if<NonnegCone>(&cone)) {
            for (auto v : nn->vars) touch(v);
        } else if (const auto* lc = std::get_if<LorentzCone>(&cone)) {
            if (lc->vars.size() < 2) throw std::invalid_argument("Lorentz cone needs dim >= 2");
            for (auto v : lc->vars) touch(v);
        } else if (const auto* pc = std::get_if<PsdCone>(&cone)) {
            std::size_t want = static_cast<std::size_t>(pc->size) * (pc->size + 1) / 2;
            if (pc->vars.size() != want)
                throw std::invalid_argument("PSD block must pack k(k+1)/2 variables");
            for (auto v : pc->vars) touch(v);
        }
    }
    for (const auto& row : rows) {
        if (row.index.size() != row.coeff.size())
            throw std::invalid_argument("ragged row");
        for (auto v : row.index)
            if (v < 0 || v >= num_vars) throw std::invalid_argument("row references unknown variable");
    }
    for (auto v : objective_index)
        if (v < 0 || v >= num_vars)
            throw std::invalid_argument("objective references unknown variable");
}

}  // namespace polyopt
