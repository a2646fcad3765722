#include "fracmem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracmem/runtime.hpp"
#include "fracmem/synth.hpp"

namespace fracmem {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::array<double, 2> vec2_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() >= 1) {
        std::array<double, 2> out{j[0].get<double>(), 0.0};
        if (j.size() >= 2) out[1] = j[1].get<double>();
        return out;
    }
    throw ParameterError("expected a number or an array for a vector field");
}

std::array<int, 2> ivec2_from_json(const Json& j) {
    if (j.is_number()) return {j.get<int>(), 1};
    if (j.is_array() && j.size() >= 1) {
        std::array<int, 2> out{j[0].get<int>(), 1};
        if (j.size() >= 2) out[1] = j[1].get<int>();
        return out;
    }
    throw ParameterError("expected a number or an array for a shape field");
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParameterError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

Grid grid_from_json(const Json& j) {
    for (const char* key : {"dim", "h", "shape"})
        if (!j.contains(key)) throw ParameterError(std::string("grid is missing field: ") + key);
    const int dim = j["dim"].get<int>();
    const double h = j["h"].get<double>();
    const auto shape = ivec2_from_json(j["shape"]);
    std::array<double, 2> origin{0.0, 0.0};
    if (j.contains("origin")) origin = vec2_from_json(j["origin"]);
    return make_grid(dim, origin, h, shape);
}

Json grid_to_json(const Grid& g) {
    Json j;
    j["dim"] = g.dim;
    if (g.dim == 1) {
        j["origin"] = g.origin[0];
        j["shape"] = g.shape[0];
    } else {
        j["origin"] = {g.origin[0], g.origin[1]};
        j["shape"] = {g.shape[0], g.shape[1]};
    }
    j["h"] = g.h;
    return j;
}

ShapeSpec shape_spec_from_json(const Json& j) {
    if (!j.contains("type")) throw ParameterError("shape spec is missing field: type");
    const std::string type = j["type"].get<std::string>();
    if (type == "ball") {
        if (!j.contains("radius")) throw ParameterError("ball spec is missing field: radius");
        std::array<double, 2> center{0.0, 0.0};
        if (j.contains("center")) center = vec2_from_json(j["center"]);
        return ball_spec(center, j["radius"].get<double>());
    }
    if (type == "rect") {
        if (!j.contains("lo") || !j.contains("hi"))
            throw ParameterError("rect spec needs lo and hi");
        return rect_spec(vec2_from_json(j["lo"]), vec2_from_json(j["hi"]));
    }
    if (type == "union" || type == "difference") {
        if (!j.contains("parts")) throw ParameterError(type + " spec needs parts");
        std::vector<ShapeSpec> parts;
        for (const auto& p : j["parts"]) parts.push_back(shape_spec_from_json(p));
        if (type == "union") return union_spec(std::move(parts));
        if (parts.size() != 2) throw ParameterError("difference needs exactly two parts");
        return difference_spec(std::move(parts[0]), std::move(parts[1]));
    }
    if (type == "blob") {
        ShapeSpec s = blob_spec(j.value("seed", 0ULL), j.value("fill", 0.5), j.value("smooth", 2));
        return s;
    }
    throw ParameterError("unknown shape type: " + type);
}

Json shape_spec_to_json(const ShapeSpec& s) {
    Json j;
    switch (s.kind) {
        case ShapeSpec::Kind::Ball:
            j["type"] = "ball";
            j["center"] = {s.center[0], s.center[1]};
            j["radius"] = s.radius;
            break;
        case ShapeSpec::Kind::Rect:
            j["type"] = "rect";
            j["lo"] = {s.lo[0], s.lo[1]};
            j["hi"] = {s.hi[0], s.hi[1]};
            break;
        case ShapeSpec::Kind::Union:
        case ShapeSpec::Kind::Difference: {
            j["type"] = s.kind == ShapeSpec::Kind::Union ? "union" : "difference";
            Json parts = Json::array();
            for (const auto& c : s.children) parts.push_back(shape_spec_to_json(c));
            j["parts"] = parts;
            break;
        }
        case ShapeSpec::Kind::Blob:
            j["type"] = "blob";
            j["seed"] = s.seed;
            j["fill"] = s.fill;
            j["smooth"] = s.smooth;
            break;
    }
    return j;
}

DomainFile load_domain_file(const std::string& path) {
    const Json j = load_json(path);
    DomainFile out;
    out.grid = grid_from_json(j);
    if (!j.contains("domain")) throw ParameterError("domain file is missing field: domain");
    out.mask = mask_from_shape(out.grid, shape_spec_from_json(j["domain"]));
    out.echo = j;
    return out;
}

FieldFile load_field_file(const std::string& path) {
    const Json j = load_json(path);
    if (!j.contains("grid")) throw ParameterError("field file is missing field: grid");
    const Grid grid = grid_from_json(j["grid"]);
    Mask mask;
    if (!j.contains("mask")) throw ParameterError("field file is missing field: mask");
    if (j["mask"].contains("cells"))
        mask = mask_from_cells(grid, j["mask"]["cells"].get<std::vector<int>>());
    else
        mask = mask_from_shape(grid, shape_spec_from_json(j["mask"]));

    FieldFile out;
    out.echo = j;
    if (j.contains("values")) {
        out.field = make_field(mask, j["values"].get<std::vector<double>>());
        return out;
    }
    if (j.contains("generator")) {
        const Json& g = j["generator"];
        const std::string type = g.value("type", "");
        if (type == "bumps") {
            out.field = gaussian_bumps_field(mask, g.value("seed", 0ULL), g.value("count", 3));
            return out;
        }
        if (type == "mollifier") {
            std::array<double, 2> center{0.0, 0.0};
            if (g.contains("center")) center = vec2_from_json(g["center"]);
            out.field = sampled_bump_field(mask, center, g.value("radius", 1.0),
                                           g.value("amplitude", 1.0));
            return out;
        }
        throw ParameterError("unknown field generator: " + type);
    }
    throw ParameterError("field file needs either values or generator");
}

Json with_provenance(Json payload, Json config_echo) {
    Json out;
    out["version"] = kVersion;
    out["config"] = std::move(config_echo);
    out["report"] = std::move(payload);
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write file: " + path);
    out << text;
}

Json optimization_result_to_json(const OptimizationResult& r, double alpha, std::uint64_t seed,
                                 int starts) {
    Json j;
    j["lambda"] = r.Lambda;
    j["c_snapped"] = r.c_snapped;
    j["alpha"] = alpha;
    j["D_cells"] = r.D.cells;
    j["trace"] = r.trace;
    j["starts"] = starts;
    j["seed"] = seed;
    j["start_id"] = r.start_id;
    j["converged"] = r.converged;
    Json flags = Json::array();
    for (auto f : r.degenerate_flags) flags.push_back(static_cast<bool>(f));
    j["degenerate_flags"] = flags;
    return j;
}

Json eigenpair_to_json(const EigenPair& p) {
    Json j;
    j["lambda"] = p.lambda;
    j["residual"] = p.residual;
    j["iterations"] = p.iterations;
    j["degenerate"] = p.degenerate;
    return j;
}

Json fk_report_to_json(const FKReport& r) {
    Json j;
    j["Lambda_omega"] = r.Lambda_omega;
    j["Lambda_ball"] = r.Lambda_ball;
    j["gap"] = r.gap;
    j["h"] = r.h;
    j["alpha"] = r.alpha;
    j["c_snapped"] = r.c_snapped;
    j["s"] = r.s;
    j["seed"] = r.seed;
    j["chain_sym_rq"] = r.chain_sym_rq;
    j["chain_orig_rq"] = r.chain_orig_rq;
    j["omega_start_id"] = r.opt_omega.start_id;
    j["ball_start_id"] = r.opt_ball.start_id;
    j["omega_trace"] = r.opt_omega.trace;
    j["ball_trace"] = r.opt_ball.trace;
    return j;
}

Json lieb_report_to_json(const LiebReport& r) {
    Json j;
    j["Lambda1"] = r.opt1.Lambda;
    j["Lambda2"] = r.opt2.Lambda;
    j["Lambda_sum"] = r.Lambda_sum;
    j["alpha"] = r.alpha;
    j["alpha1"] = r.alpha1;
    j["alpha2"] = r.alpha2;
    Json shifts = Json::array();
    for (const auto& s : r.shifts) {
        Json row;
        row["k"] = {s.k[0], s.k[1]};
        row["overlap"] = s.overlap;
        row["c_x"] = s.c_x;
        row["lambda1"] = s.lambda1;
        row["Lambda_cx"] = s.Lambda_cx;
        row["Lambda_c"] = s.Lambda_c;
        row["c_used"] = s.c_used;
        row["evaluated_c"] = s.evaluated_c;
        row["strict"] = s.strict;
        row["U"] = s.U;
        row["W"] = s.W;
        shifts.push_back(row);
    }
    j["shifts"] = shifts;
    j["witnesses"] = r.witnesses;
    j["wu_sum"] = r.wu_sum;
    j["u_sum"] = r.u_sum;
    j["wu_slack"] = r.wu_slack;
    j["wu_ok"] = r.wu_ok;
    return j;
}

Json identity_report_to_json(const IdentityReport& r) {
    Json j;
    j["J1"] = r.J1;
    j["J2"] = r.J2;
    j["J3"] = r.J3;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["defect"] = r.defect;
    j["J2_closed"] = r.J2_closed;
    j["semi1_pair"] = r.semi1_pair;
    j["semi2_pair"] = r.semi2_pair;
    j["norm1_sq"] = r.norm1_sq;
    j["norm2_sq"] = r.norm2_sq;
    j["offset_cap"] = {r.offset_cap0, r.offset_cap1};
    j["shift_count"] = r.shift_count;
    return j;
}

Json sweep_table_to_json(const SweepTable& t) {
    Json j;
    j["alphas"] = t.alphas;
    j["cs"] = t.cs;
    j["Lambda"] = t.Lambda;
    Json v = Json::array();
    for (const auto& q : t.violations) v.push_back({q[0], q[1], q[2], q[3]});
    j["violations"] = v;
    j["slack"] = t.slack;
    return j;
}

std::string lieb_shifts_csv(const LiebReport& r) {
    std::ostringstream os;
    os << "k0,k1,overlap,c_x,Lambda,strict\n";
    for (const auto& s : r.shifts) {
        os << s.k[0] << ',' << s.k[1] << ',' << format_double(s.overlap) << ','
           << format_double(s.c_x) << ',' << format_double(s.Lambda_c) << ','
           << (s.strict ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string sweep_csv(const SweepTable& t) {
    std::ostringstream os;
    os << "alpha,c,Lambda\n";
    for (std::size_t ai = 0; ai < t.alphas.size(); ++ai)
        for (std::size_t ci = 0; ci < t.cs.size(); ++ci)
            os << format_double(t.alphas[ai]) << ',' << format_double(t.cs[ci]) << ','
               << format_double(t.Lambda[ai * t.cs.size() + ci]) << '\n';
    return os.str();
}

std::string profile_csv(const RearrangementProfile& p) {
    std::ostringstream os;
    os << "xi,value\n";
    for (std::size_t i = 0; i < p.values.size(); ++i)
        os << format_double(p.xi[i]) << ',' << format_double(p.values[i]) << '\n';
    return os.str();
}

std::string symmetrized_csv(const SymmetrizedField& s) {
    std::ostringstream os;
    os << "cell,radial_rank,value\n";
    std::vector<int> rank_of(s.rank_order.size());
    for (std::size_t r = 0; r < s.rank_order.size(); ++r) rank_of[s.rank_order[r]] = static_cast<int>(r);
    for (std::size_t p = 0; p < s.field.values.size(); ++p)
        os << s.field.mask.cells[p] << ',' << rank_of[p] << ',' << format_double(s.field.values[p])
           << '\n';
    return os.str();
}

}  // namespace fracmem
