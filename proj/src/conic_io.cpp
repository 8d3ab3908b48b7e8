#include "polyopt/conic_io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace polyopt {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct VarPlacement {
    int block = -1;  // SDPA block (0-based)
    int i = 0, j = 0;
    int neg_i = -1;  // second diagonal slot of a split free variable
};

std::string export_sdpa(const ConicProgram& cp) {
    for (const auto& cone : cp.cones)
        if (std::holds_alternative<LorentzCone>(cone))
            throw UnsupportedCone("SDPA sparse cannot carry Lorentz cones; use CBF");

    std::vector<char> in_psd(cp.num_vars, 0);
    std::vector<VarPlacement> place(cp.num_vars);
    std::vector<int> block_sizes;
    for (const auto& cone : cp.cones)
        if (const auto* pc = std::get_if<PsdCone>(&cone)) {
            int blk = static_cast<int>(block_sizes.size());
            block_sizes.push_back(pc->size);
            for (std::int32_t i = 0; i < pc->size; ++i)
                for (std::int32_t j = i; j < pc->size; ++j) {
                    auto v = pc->vars[ConicProgram::tri_index(pc->size, i, j)];
                    in_psd[v] = 1;
                    place[v] = {blk, static_cast<int>(i) + 1, static_cast<int>(j) + 1, -1};
                }
        }
    std::vector<char> nonneg(cp.num_vars, 0);
    for (const auto& cone : cp.cones)
        if (const auto* nn = std::get_if<NonnegCone>(&cone))
            for (auto v : nn->vars) nonneg[v] = 1;
    // diagonal block: nonneg variables first, then (u, v) pairs per free var
    int diag_size = 0;
    for (std::int32_t v = 0; v < cp.num_vars; ++v) {
        if (in_psd[v]) continue;
        if (nonneg[v]) {
            place[v] = {static_cast<int>(block_sizes.size()), ++diag_size, diag_size, -1};
            place[v].j = place[v].i;
        } else {
            place[v].block = static_cast<int>(block_sizes.size());
            place[v].i = ++diag_size;
            place[v].j = place[v].i;
            place[v].neg_i = ++diag_size;
        }
    }
    bool have_diag = diag_size > 0;

    std::ostringstream os;
    os << "*POLYOPT OBJSENSE " << (cp.maximize ? "MAX" : "MIN") << "\n";
    os << "*POLYOPT OFFSET " << fmt(cp.objective_constant) << "\n";
    const auto p = cp.rows.size();
    os << p << " = mDIM\n";
    os << (block_sizes.size() + (have_diag ? 1 : 0)) << " = nBLOCK\n";
    for (std::size_t b = 0; b < block_sizes.size(); ++b)
        os << block_sizes[b] << (b + 1 < block_sizes.size() || have_diag ? " " : "");
    if (have_diag) os << -diag_size;
    os << "\n";
    for (std::size_t r = 0; r < p; ++r) os << (r ? " " : "") << fmt(cp.rows[r].rhs);
    os << "\n";

    double sense = cp.maximize ? -1.0 : 1.0;
    auto emit = [&](std::size_t matno, std::int32_t var, double coeff) {
        const VarPlacement& pl = place[var];
        if (pl.neg_i >= 0) {
            os << matno << " " << pl.block + 1 << " " << pl.i << " " << pl.i << " " << fmt(coeff)
               << "\n";
            os << matno << " " << pl.block + 1 << " " << pl.neg_i << " " << pl.neg_i << " "
               << fmt(-coeff) << "\n";
        } else {
            double v = pl.i == pl.j ? coeff : coeff / 2.0;
            os << matno << " " << pl.block + 1 << " " << pl.i << " " << pl.j << " " << fmt(v)
               << "\n";
        }
    };
    // F0 = -c (minimization sense), so reading the file back as the dual side
    // reproduces the original objective.
    {
        std::map<std::int32_t, double> c;
        for (std::size_t k = 0; k < cp.objective_index.size(); ++k)
            c[cp.objective_index[k]] += sense * cp.objective_coeff[k];
        for (const auto& [var, coeff] : c)
            if (coeff != 0.0) emit(0, var, -coeff);
    }
    for (std::size_t r = 0; r < p; ++r) {
        std::map<std::int32_t, double> row;
        for (std::size_t k = 0; k < cp.rows[r].index.size(); ++k)
            row[cp.rows[r].index[k]] += cp.rows[r].coeff[k];
        for (const auto& [var, coeff] : row)
            if (coeff != 0.0) emit(r + 1, var, coeff);
    }
    return os.str();
}

ConicProgram import_sdpa(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool sense_max = false;
    double offset = 0.0;
    std::vector<std::string> data_lines;
    while (std::getline(in, line)) {
        if (line.rfind("*POLYOPT OBJSENSE", 0) == 0) {
            sense_max = line.find("MAX") != std::string::npos;
            continue;
        }
        if (line.rfind("*POLYOPT OFFSET", 0) == 0) {
            offset = std::stod(line.substr(15));
            continue;
        }
        if (!line.empty() && (line[0] == '*' || line[0] == '"')) continue;
        data_lines.push_back(line);
    }
    std::ostringstream joined;
    for (auto& l : data_lines) {
        for (char& ch : l)
            if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}' || ch == '=') ch = ' ';
        joined << l << "\n";
    }
    std::istringstream ds(joined.str());
    std::size_t mdim, nblock;
    std::string tok;
    if (!(ds >> mdim)) throw std::runtime_error("SDPA: missing mDIM");
    // swallow a possible trailing token like "mDIM"
    while (ds >> tok && (tok == "mDIM" || tok == "nBLOCK")) {}
    std::istringstream rest(tok);
    if (!(rest >> nblock)) throw std::runtime_error("SDPA: missing nBLOCK");
    // skip the optional "nBLOCK" word
    auto read_int = [&](long long& v) {
        std::string t;
        while (ds >> t) {
            try {
                std::size_t pos;
                v = std::stoll(t, &pos);
                if (pos == t.size()) return true;
            } catch (...) {
            }
        }
        return false;
    };
    std::vector<long long> sizes(nblock);
    for (auto& s : sizes)
        if (!read_int(s)) throw std::runtime_error("SDPA: bad block sizes");
    std::vector<double> b(mdim);
    for (auto& v : b)
        if (!(ds >> v)) throw std::runtime_error("SDPA: bad objective vector");

    ConicProgram cp;
    cp.objective_constant = offset;
    // allocate variables per block
    struct BlockInfo {
        bool diag;
        long long size;
        std::vector<std::int32_t> vars;
    };
    std::vector<BlockInfo> blocks;
    for (auto s : sizes) {
        BlockInfo bi;
        bi.diag = s < 0;
        bi.size = std::llabs(s);
        if (bi.diag) {
            bi.vars = cp.new_vars(static_cast<std::int32_t>(bi.size));
            cp.cones.push_back(NonnegCone{bi.vars});
        } else {
            bi.vars = cp.new_vars(static_cast<std::int32_t>(bi.size * (bi.size + 1) / 2));
            cp.cones.push_back(PsdCone{static_cast<std::int32_t>(bi.size), bi.vars});
        }
        blocks.push_back(std::move(bi));
    }
    cp.rows.resize(mdim);
    for (std::size_t r = 0; r < mdim; ++r) cp.rows[r].rhs = b[r];
    std::map<std::int32_t, double> obj;
    long long matno, blkno, ei, ej;
    double val;
    while (ds >> matno >> blkno >> ei >> ej >> val) {
        const BlockInfo& bi = blocks.at(blkno - 1);
        std::int32_t var;
        double coeff;
        if (bi.diag) {
            if (ei != ej) throw std::runtime_error("SDPA: off-diagonal entry in diagonal block");
            var = bi.vars[ei - 1];
            coeff = val;
        } else {
            var = bi.vars[ConicProgram::tri_index(static_cast<std::int32_t>(bi.size),
                                                  static_cast<std::int32_t>(std::min(ei, ej) - 1),
                                                  static_cast<std::int32_t>(std::max(ei, ej) - 1))];
            coeff = ei == ej ? val : 2.0 * val;
        }
        if (matno == 0)
            obj[var] += -coeff;  // F0 = -c
        else
            cp.rows.at(matno - 1).add(var, coeff);
    }
    for (const auto& [var, c] : obj) {
        double v = sense_max ? -c : c;
        if (v != 0.0) cp.set_objective_term(var, v);
    }
    cp.maximize = sense_max;
    return cp;
}

// ---------------------------------------------------------------------------
// CBF version 1
// ---------------------------------------------------------------------------

struct CbfScalarGroup {
    std::string cone;
    std::vector<std::int32_t> vars;  // original variable ids in emission order
};

std::string export_cbf(const ConicProgram& cp) {
    std::vector<char> in_psd(cp.num_vars, 0);
    std::vector<int> psd_block(cp.num_vars, -1);
    std::vector<int> psd_row(cp.num_vars), psd_col(cp.num_vars);
    std::vector<int> psd_sizes;
    for (const auto& cone : cp.cones)
        if (const auto* pc = std::get_if<PsdCone>(&cone)) {
            int blk = static_cast<int>(psd_sizes.size());
            psd_sizes.push_back(pc->size);
            for (std::int32_t i = 0; i < pc->size; ++i)
                for (std::int32_t j = i; j < pc->size; ++j) {
                    auto v = pc->vars[ConicProgram::tri_index(pc->size, i, j)];
                    in_psd[v] = 1;
                    psd_block[v] = blk;
                    psd_row[v] = j;  // store lower triangle (r >= c)
                    psd_col[v] = i;
                }
        }
    std::vector<char> covered = in_psd;
    std::vector<CbfScalarGroup> groups;
    // free variables (everything in no cone), then nonneg, then each Lorentz
    CbfScalarGroup free_group{"F", {}};
    std::vector<char> nonneg(cp.num_vars, 0), soc(cp.num_vars, 0);
    for (const auto& cone : cp.cones) {
        if (const auto* nn = std::get_if<NonnegCone>(&cone))
            for (auto v : nn->vars) nonneg[v] = 1;
        else if (const auto* lc = std::get_if<LorentzCone>(&cone))
            for (auto v : lc->vars) soc[v] = 1;
    }
    for (std::int32_t v = 0; v < cp.num_vars; ++v)
        if (!covered[v] && !nonneg[v] && !soc[v]) free_group.vars.push_back(v);
    if (!free_group.vars.empty()) groups.push_back(free_group);
    CbfScalarGroup nn_group{"L+", {}};
    for (std::int32_t v = 0; v < cp.num_vars; ++v)
        if (nonneg[v]) nn_group.vars.push_back(v);
    if (!nn_group.vars.empty()) groups.push_back(nn_group);
    for (const auto& cone : cp.cones)
        if (const auto* lc = std::get_if<LorentzCone>(&cone))
            groups.push_back(CbfScalarGroup{"Q", lc->vars});

    std::vector<std::int64_t> scalar_id(cp.num_vars, -1);
    std::int64_t next = 0;
    for (const auto& g : groups)
        for (auto v : g.vars) scalar_id[v] = next++;

    std::ostringstream os;
    os << "VER\n1\n\n";
    os << "OBJSENSE\n" << (cp.maximize ? "MAX" : "MIN") << "\n\n";
    if (!psd_sizes.empty()) {
        os << "PSDVAR\n" << psd_sizes.size() << "\n";
        for (int s : psd_sizes) os << s << "\n";
        os << "\n";
    }
    if (next > 0) {
        os << "VAR\n" << next << " " << groups.size() << "\n";
        for (const auto& g : groups) os << g.cone << " " << g.vars.size() << "\n";
        os << "\n";
    }
    if (!cp.rows.empty()) {
        os << "CON\n" << cp.rows.size() << " 1\nL= " << cp.rows.size() << "\n\n";
    }

    // objective coordinates
    std::map<std::int32_t, double> obj;
    for (std::size_t k = 0; k < cp.objective_index.size(); ++k)
        obj[cp.objective_index[k]] += cp.objective_coeff[k];
    std::vector<std::string> objf, obja;
    for (const auto& [v, c] : obj) {
        if (c == 0.0) continue;
        if (in_psd[v]) {
            double val = psd_row[v] == psd_col[v] ? c : c / 2.0;
            objf.push_back(std::to_string(psd_block[v]) + " " + std::to_string(psd_row[v]) + " " +
                           std::to_string(psd_col[v]) + " " + fmt(val));
        } else {
            obja.push_back(std::to_string(scalar_id[v]) + " " + fmt(c));
        }
    }
    if (!objf.empty()) {
        os << "OBJFCOORD\n" << objf.size() << "\n";
        for (auto& s : objf) os << s << "\n";
        os << "\n";
    }
    if (!obja.empty()) {
        os << "OBJACOORD\n" << obja.size() << "\n";
        for (auto& s : obja) os << s << "\n";
        os << "\n";
    }
    if (cp.objective_constant != 0.0)
        os << "OBJBCOORD\n" << fmt(cp.objective_constant) << "\n\n";

    std::vector<std::string> fcoord, acoord, bcoord;
    for (std::size_t r = 0; r < cp.rows.size(); ++r) {
        std::map<std::int32_t, double> row;
        for (std::size_t k = 0; k < cp.rows[r].index.size(); ++k)
            row[cp.rows[r].index[k]] += cp.rows[r].coeff[k];
        for (const auto& [v, c] : row) {
            if (c == 0.0) continue;
            if (in_psd[v]) {
                double val = psd_row[v] == psd_col[v] ? c : c / 2.0;
                fcoord.push_back(std::to_string(r) + " " + std::to_string(psd_block[v]) + " " +
                                 std::to_string(psd_row[v]) + " " + std::to_string(psd_col[v]) +
                                 " " + fmt(val));
            } else {
                acoord.push_back(std::to_string(r) + " " + std::to_string(scalar_id[v]) + " " +
                                 fmt(c));
            }
        }
        if (cp.rows[r].rhs != 0.0)
            bcoord.push_back(std::to_string(r) + " " + fmt(-cp.rows[r].rhs));
    }
    if (!fcoord.empty()) {
        os << "FCOORD\n" << fcoord.size() << "\n";
        for (auto& s : fcoord) os << s << "\n";
        os << "\n";
    }
    if (!acoord.empty()) {
        os << "ACOORD\n" << acoord.size() << "\n";
        for (auto& s : acoord) os << s << "\n";
        os << "\n";
    }
    if (!bcoord.empty()) {
        os << "BCOORD\n" << bcoord.size() << "\n";
        for (auto& s : bcoord) os << s << "\n";
        os << "\n";
    }
    return os.str();
}

ConicProgram import_cbf(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_data_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line[0] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };
    ConicProgram cp;
    std::vector<std::int32_t> psd_sizes;
    std::vector<std::vector<std::int32_t>> psd_vars;
    std::vector<std::int32_t> scalar_vars;  // cbf scalar id -> program var
    std::vector<std::pair<std::string, int>> var_groups;
    std::size_t num_rows = 0;

    std::string cur;
    while (next_data_line(cur)) {
        if (cur == "VER") {
            next_data_line(cur);
        } else if (cur == "OBJSENSE") {
            next_data_line(cur);
            cp.maximize = cur.find("MAX") != std::string::npos;
        } else if (cur == "PSDVAR") {
            next_data_line(cur);
            int count = std::stoi(cur);
            for (int i = 0; i < count; ++i) {
                next_data_line(cur);
                psd_sizes.push_back(std::stoi(cur));
            }
        } else if (cur == "VAR") {
            next_data_line(cur);
            std::istringstream hs(cur);
            std::int64_t nvars;
            int ngroups;
            hs >> nvars >> ngroups;
            for (int gidx = 0; gidx < ngroups; ++gidx) {
                next_data_line(cur);
                std::istringstream gs(cur);
                std::string cone;
                int dim;
                gs >> cone >> dim;
                var_groups.emplace_back(cone, dim);
            }
            (void)nvars;
        } else if (cur == "CON") {
            next_data_line(cur);
            std::istringstream hs(cur);
            std::int64_t ncon;
            int ngroups;
            hs >> ncon >> ngroups;
            num_rows = static_cast<std::size_t>(ncon);
            for (int gidx = 0; gidx < ngroups; ++gidx) {
                next_data_line(cur);
                if (cur.rfind("L=", 0) != 0)
                    throw std::runtime_error("CBF: only equality constraint groups are supported");
            }
        } else if (cur == "OBJFCOORD" || cur == "OBJACOORD" || cur == "FCOORD" || cur == "ACOORD" ||
                   cur == "BCOORD" || cur == "OBJBCOORD") {
            // materialize variables and rows on first coordinate section
            if (scalar_vars.empty() && cp.num_vars == 0) {
                for (const auto& [cone, dim] : var_groups) {
                    auto vars = cp.new_vars(dim);
                    for (auto v : vars) scalar_vars.push_back(v);
                    if (cone == "L+")
                        cp.cones.push_back(NonnegCone{vars});
                    else if (cone == "Q")
                        cp.cones.push_back(LorentzCone{vars});
                    else if (cone != "F")
                        throw std::runtime_error("CBF: unsupported scalar cone " + cone);
                }
                for (auto k : psd_sizes) {
                    auto vars = cp.new_vars(k * (k + 1) / 2);
                    psd_vars.push_back(vars);
                    cp.cones.push_back(PsdCone{k, vars});
                }
                cp.rows.resize(num_rows);
            }
            std::string section = cur;
            if (section == "OBJBCOORD") {
                next_data_line(cur);
                cp.objective_constant = std::stod(cur);
                continue;
            }
            next_data_line(cur);
            long long count = std::stoll(cur);
            for (long long e = 0; e < count; ++e) {
                next_data_line(cur);
                std::istringstream es(cur);
                if (section == "OBJFCOORD") {
                    int blk, r, c;
                    double v;
                    es >> blk >> r >> c >> v;
                    auto k = psd_sizes.at(blk);
                    auto var = psd_vars.at(blk)[ConicProgram::tri_index(k, std::min(r, c),
                                                                        std::max(r, c))];
                    cp.set_objective_term(var, r == c ? v : 2.0 * v);
                } else if (section == "OBJACOORD") {
                    long long j;
                    double v;
                    es >> j >> v;
                    cp.set_objective_term(scalar_vars.at(j), v);
                } else if (section == "FCOORD") {
                    long long i;
                    int blk, r, c;
                    double v;
                    es >> i >> blk >> r >> c >> v;
                    auto k = psd_sizes.at(blk);
                    auto var = psd_vars.at(blk)[ConicProgram::tri_index(k, std::min(r, c),
                                                                        std::max(r, c))];
                    cp.rows.at(i).add(var, r == c ? v : 2.0 * v);
                } else if (section == "ACOORD") {
                    long long i, j;
                    double v;
                    es >> i >> j >> v;
                    cp.rows.at(i).add(scalar_vars.at(j), v);
                } else {  // BCOORD
                    long long i;
                    double v;
                    es >> i >> v;
                    cp.rows.at(i).rhs = -v;
                }
            }
        }
    }
    // coordinate-free programs still need their variables materialized
    if (cp.num_vars == 0 && (!var_groups.empty() || !psd_sizes.empty())) {
        for (const auto& [cone, dim] : var_groups) {
            auto vars = cp.new_vars(dim);
            if (cone == "L+")
                cp.cones.push_back(NonnegCone{vars});
            else if (cone == "Q")
                cp.cones.push_back(LorentzCone{vars});
        }
        for (auto k : psd_sizes) {
            auto vars = cp.new_vars(k * (k + 1) / 2);
            cp.cones.push_back(PsdCone{k, vars});
        }
        cp.rows.resize(num_rows);
    }
    return cp;
}

}  // namespace

std::string export_program(const ConicProgram& cp, ConicFormat format) {
    cp.validate();
    return format == ConicFormat::SdpaSparse ? export_sdpa(cp) : export_cbf(cp);
}

ConicProgram import_program(const std::string& text, ConicFormat format) {
    return format == ConicFormat::SdpaSparse ? import_sdpa(text) : import_cbf(text);
}

}  // namespace polyopt
