// fracmem: fractional composite membrane laboratory, command-line front end.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "fracmem/eigensolve.hpp"
#include "fracmem/inequalities.hpp"
#include "fracmem/io.hpp"
#include "fracmem/membrane.hpp"
#include "fracmem/rearrange.hpp"
#include "fracmem/runtime.hpp"

namespace fm = fracmem;

namespace {

void emit(const fm::Json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        fm::write_text_file(out_path, text);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

struct EigArgs {
    std::string domain, potential = "none", out;
    double s = 0.5, alpha = 0.0, tol = 1e-10;
};

struct OptArgs {
    std::string domain, out;
    double s = 0.5, alpha = 1.0, c = -1.0, c_frac = -1.0, tol = 1e-9, eig_tol = 1e-10;
    int starts = 16;
    std::uint64_t seed = 0;
};

struct FkArgs : OptArgs {};

struct LiebArgs {
    std::string domain1, domain2, out, out_csv;
    double s = 0.5, alpha1 = 8.0, alpha2 = 8.0, c1_frac = 0.3, c2_frac = 0.3, alpha = 0.0,
           c_frac = 0.5;
    int starts = 16, per_shift_starts = 4, stride = 1;
    std::uint64_t seed = 0;
    std::string format = "json";
};

struct IdentityArgs {
    std::string u1, u2, out;
    double s = 0.5;
};

struct RearrangeArgs {
    std::string field, out_prefix = "rearrange";
    bool increasing = false, polya = false;
    double s = 0.5;
};

struct SweepArgs {
    std::string domain, out, out_csv, alphas, cs, c_fracs, refine;
    double s = 0.5, tol = 1e-9;
    int starts = 16;
    std::uint64_t seed = 0;
    std::string format = "csv";
};

double resolve_c(double c, double c_frac, double domain_measure) {
    if (c > 0.0 && c_frac > 0.0)
        throw fm::ParameterError("give either c or c-frac, not both");
    if (c > 0.0) return c;
    if (c_frac > 0.0) return c_frac * domain_measure;
    throw fm::ParameterError("missing constraint measure: set --c or --c-frac");
}

int run_eig(const EigArgs& a) {
    const auto dom = fm::load_domain_file(a.domain);
    const auto spec = fm::make_form_spec(dom.grid.dim, a.s);
    const auto form = fm::assemble_form(dom.grid, dom.mask, spec);
    fm::Mask D{dom.grid, {}};
    if (a.potential == "full")
        D = dom.mask;
    else if (a.potential != "none")
        D = fm::mask_from_shape(dom.grid, fm::shape_spec_from_json(fm::load_domain_file(a.potential).echo["domain"]));
    const auto pair = fm::smallest_eigenpair(form, D, a.alpha, a.tol);
    fm::Json cfg;
    cfg["command"] = "eig";
    cfg["domain"] = dom.echo;
    cfg["s"] = a.s;
    cfg["alpha"] = a.alpha;
    cfg["tol"] = a.tol;
    cfg["potential"] = a.potential;
    emit(fm::with_provenance(fm::eigenpair_to_json(pair), cfg), a.out);
    return 0;
}

int run_optimize(const OptArgs& a) {
    const auto dom = fm::load_domain_file(a.domain);
    const auto spec = fm::make_form_spec(dom.grid.dim, a.s);
    const auto form = fm::assemble_form(dom.grid, dom.mask, spec);
    fm::MembraneConfig cfg;
    cfg.alpha = a.alpha;
    cfg.c = resolve_c(a.c, a.c_frac, fm::measure(dom.mask));
    cfg.starts = a.starts;
    cfg.seed = a.seed;
    cfg.tol = a.tol;
    cfg.eig_tol = a.eig_tol;
    const auto result = fm::optimize(form, cfg);
    fm::Json echo;
    echo["command"] = "optimize";
    echo["domain"] = dom.echo;
    echo["s"] = a.s;
    echo["alpha"] = a.alpha;
    echo["c"] = cfg.c;
    echo["starts"] = a.starts;
    echo["seed"] = a.seed;
    echo["tol"] = a.tol;
    emit(fm::with_provenance(
             fm::optimization_result_to_json(result, a.alpha, a.seed, a.starts), echo),
         a.out);
    return 0;
}

int run_fk(const FkArgs& a) {
    const auto dom = fm::load_domain_file(a.domain);
    const auto spec = fm::make_form_spec(dom.grid.dim, a.s);
    fm::MembraneConfig cfg;
    cfg.alpha = a.alpha;
    cfg.c = resolve_c(a.c, a.c_frac, fm::measure(dom.mask));
    cfg.starts = a.starts;
    cfg.seed = a.seed;
    cfg.tol = a.tol;
    cfg.eig_tol = a.eig_tol;
    const auto rep = fm::faber_krahn_experiment(dom.mask, spec, cfg);
    fm::Json echo;
    echo["command"] = "faber-krahn";
    echo["domain"] = dom.echo;
    echo["s"] = a.s;
    echo["alpha"] = a.alpha;
    echo["c"] = cfg.c;
    echo["starts"] = a.starts;
    echo["seed"] = a.seed;
    emit(fm::with_provenance(fm::fk_report_to_json(rep), echo), a.out);
    return 0;
}

int run_lieb(const LiebArgs& a) {
    const auto dom1 = fm::load_domain_file(a.domain1);
    const auto dom2 = fm::load_domain_file(a.domain2);
    const auto spec = fm::make_form_spec(dom1.grid.dim, a.s);
    fm::LiebOptions opts;
    opts.alpha = a.alpha;
    opts.c_fraction = a.c_frac;
    opts.starts = a.starts;
    opts.per_shift_starts = a.per_shift_starts;
    opts.seed = a.seed;
    if (a.stride > 1) {
        const auto all = fm::overlap_volume_map(dom1.mask, dom2.mask);
        for (const auto& [k, vol] : all)
            if (((k[0] % a.stride) == 0) && ((k[1] % a.stride) == 0)) opts.shift_set.push_back(k);
    }
    const auto rep = fm::lieb_experiment(dom1.mask, dom2.mask, spec, a.alpha1, a.alpha2,
                                         a.c1_frac * fm::measure(dom1.mask),
                                         a.c2_frac * fm::measure(dom2.mask), opts);
    fm::Json echo;
    echo["command"] = "lieb";
    echo["domain1"] = dom1.echo;
    echo["domain2"] = dom2.echo;
    echo["s"] = a.s;
    echo["alpha1"] = a.alpha1;
    echo["alpha2"] = a.alpha2;
    echo["alpha"] = rep.alpha;
    echo["c1_frac"] = a.c1_frac;
    echo["c2_frac"] = a.c2_frac;
    echo["c_frac"] = a.c_frac;
    echo["stride"] = a.stride;
    echo["starts"] = a.starts;
    echo["per_shift_starts"] = a.per_shift_starts;
    echo["seed"] = a.seed;
    if (a.format == "json" || a.format == "both")
        emit(fm::with_provenance(fm::lieb_report_to_json(rep), echo), a.out);
    if (a.format == "csv" || a.format == "both") {
        const std::string path = a.out_csv.empty() ? "lieb_shifts.csv" : a.out_csv;
        fm::write_text_file(path, fm::lieb_shifts_csv(rep));
    }
    return 0;
}

int run_identity(const IdentityArgs& a) {
    const auto f1 = fm::load_field_file(a.u1);
    const auto f2 = fm::load_field_file(a.u2);
    const auto spec = fm::make_form_spec(f1.field.mask.grid.dim, a.s);
    const auto rep = fm::product_identity_check(f1.field, f2.field, spec);
    fm::Json echo;
    echo["command"] = "identity";
    echo["u1"] = f1.echo;
    echo["u2"] = f2.echo;
    echo["s"] = a.s;
    emit(fm::with_provenance(fm::identity_report_to_json(rep), echo), a.out);
    return 0;
}

int run_rearrange(const RearrangeArgs& a) {
    const auto ff = fm::load_field_file(a.field);
    const auto prof = a.increasing ? fm::increasing_rearrangement(ff.field)
                                   : fm::decreasing_rearrangement(ff.field);
    const auto sym =
        a.increasing ? fm::schwarz_increasing(ff.field) : fm::schwarz_decreasing(ff.field);
    fm::write_text_file(a.out_prefix + "_profile.csv", fm::profile_csv(prof));
    fm::write_text_file(a.out_prefix + "_symmetrized.csv", fm::symmetrized_csv(sym));
    if (a.polya) {
        const auto spec = fm::make_form_spec(ff.field.mask.grid.dim, a.s);
        const auto [qstar, qf] = fm::polya_szego_check(ff.field, spec);
        fm::Json echo;
        echo["command"] = "rearrange";
        echo["field"] = ff.echo;
        echo["s"] = a.s;
        fm::Json rep;
        rep["seminorm_sq_symmetrized"] = qstar;
        rep["seminorm_sq_original"] = qf;
        rep["ratio"] = qstar / qf;
        emit(fm::with_provenance(rep, echo), a.out_prefix + "_polya.json");
    }
    return 0;
}

int run_sweep(const SweepArgs& a) {
    const auto dom = fm::load_domain_file(a.domain);
    const auto spec = fm::make_form_spec(dom.grid.dim, a.s);
    fm::Json echo;
    echo["command"] = "sweep";
    echo["domain"] = dom.echo;
    echo["s"] = a.s;
    echo["seed"] = a.seed;
    echo["starts"] = a.starts;

    if (!a.refine.empty()) {
        // h-refinement study of the first Dirichlet eigenvalue
        std::vector<double> factors = parse_list(a.refine);
        if (factors.empty()) throw fm::ParameterError("empty refinement list");
        std::ostringstream csv;
        csv << "factor,h,lambda1,extrapolated\n";
        std::vector<double> lambdas;
        std::vector<double> hs;
        for (double f : factors) {
            const int fi = static_cast<int>(f);
            if (fi < 1 || std::abs(f - fi) > 1e-12)
                throw fm::ParameterError("refinement factors must be positive integers");
            const fm::Grid fine = fm::make_grid(dom.grid.dim, dom.grid.origin, dom.grid.h / fi,
                                                {dom.grid.shape[0] * fi,
                                                 dom.grid.dim == 2 ? dom.grid.shape[1] * fi : 1});
            const auto mask = fm::mask_from_shape(
                fine, fm::shape_spec_from_json(dom.echo["domain"]));
            const auto form = fm::assemble_form(fine, mask, fm::make_form_spec(fine.dim, a.s));
            lambdas.push_back(fm::dirichlet_eigenvalue(form, 1e-10));
            hs.push_back(fine.h);
        }
        double extrapolated = lambdas.back();
        if (lambdas.size() >= 3) {
            const std::size_t m = lambdas.size();
            const double d1 = lambdas[m - 2] - lambdas[m - 3];
            const double d2 = lambdas[m - 1] - lambdas[m - 2];
            if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 1.0) {
                const double rate = d1 / d2;
                extrapolated = lambdas[m - 1] + d2 / (rate - 1.0);
            }
        }
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            csv << factors[i] << ',' << fm::format_double(hs[i]) << ','
                << fm::format_double(lambdas[i]) << ','
                << (i + 1 == lambdas.size() ? fm::format_double(extrapolated) : "") << '\n';
        const std::string path = a.out_csv.empty() ? "sweep.csv" : a.out_csv;
        fm::write_text_file(path, csv.str());
        if (a.format == "both" || a.format == "json") {
            fm::Json rep;
            rep["lambda1"] = lambdas;
            rep["h"] = hs;
            rep["extrapolated"] = extrapolated;
            emit(fm::with_provenance(rep, echo), a.out);
        }
        return 0;
    }

    if (a.alphas.empty() || (a.cs.empty() && a.c_fracs.empty()))
        throw fm::ParameterError("sweep needs --alphas and --cs (or --c-fracs), or --refine");
    std::vector<double> alphas = parse_list(a.alphas);
    std::vector<double> cs;
    if (!a.cs.empty())
        cs = parse_list(a.cs);
    else
        for (double f : parse_list(a.c_fracs)) cs.push_back(f * fm::measure(dom.mask));
    if (alphas.empty() || cs.empty()) throw fm::ParameterError("sweep grids must be nonempty");

    const auto form = fm::assemble_form(dom.grid, dom.mask, spec);
    fm::MembraneConfig base;
    base.starts = a.starts;
    base.seed = a.seed;
    base.tol = a.tol;
    const auto table = fm::monotonicity_sweep(form, alphas, cs, base);
    const std::string path = a.out_csv.empty() ? "sweep.csv" : a.out_csv;
    fm::write_text_file(path, fm::sweep_csv(table));
    if (a.format == "both" || a.format == "json")
        emit(fm::with_provenance(fm::sweep_table_to_json(table), echo), a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    fm::apply_thread_cap_from_env();
    CLI::App app{"fracmem: first eigenvalue of the fractional Laplacian with an indicator "
                 "potential, support optimization, and symmetrization experiments"};
    app.require_subcommand(1);

    EigArgs eig;
    auto* cmd_eig = app.add_subcommand("eig", "smallest eigenpair on a domain");
    cmd_eig->add_option("--domain", eig.domain)->required();
    cmd_eig->add_option("--s", eig.s);
    cmd_eig->add_option("--alpha", eig.alpha);
    cmd_eig->add_option("--tol", eig.tol);
    cmd_eig->add_option("--potential", eig.potential,
                        "none | full | path to a domain file for D");
    cmd_eig->add_option("--out", eig.out);

    OptArgs opt;
    auto* cmd_opt = app.add_subcommand("optimize", "composite membrane optimization");
    cmd_opt->add_option("--domain", opt.domain)->required();
    cmd_opt->add_option("--s", opt.s);
    cmd_opt->add_option("--alpha", opt.alpha)->required();
    cmd_opt->add_option("--c", opt.c);
    cmd_opt->add_option("--c-frac", opt.c_frac);
    cmd_opt->add_option("--starts", opt.starts);
    cmd_opt->add_option("--seed", opt.seed);
    cmd_opt->add_option("--tol", opt.tol);
    cmd_opt->add_option("--eig-tol", opt.eig_tol);
    cmd_opt->add_option("--out", opt.out);

    FkArgs fk;
    auto* cmd_fk = app.add_subcommand("faber-krahn", "domain vs quasi-ball optimization gap");
    cmd_fk->add_option("--domain", fk.domain)->required();
    cmd_fk->add_option("--s", fk.s);
    cmd_fk->add_option("--alpha", fk.alpha)->required();
    cmd_fk->add_option("--c", fk.c);
    cmd_fk->add_option("--c-frac", fk.c_frac);
    cmd_fk->add_option("--starts", fk.starts);
    cmd_fk->add_option("--seed", fk.seed);
    cmd_fk->add_option("--out", fk.out);

    LiebArgs lieb;
    auto* cmd_lieb = app.add_subcommand("lieb", "intersection eigenvalue vs sum over shifts");
    cmd_lieb->add_option("--domain1", lieb.domain1)->required();
    cmd_lieb->add_option("--domain2", lieb.domain2)->required();
    cmd_lieb->add_option("--s", lieb.s);
    cmd_lieb->add_option("--alpha1", lieb.alpha1);
    cmd_lieb->add_option("--alpha2", lieb.alpha2);
    cmd_lieb->add_option("--alpha", lieb.alpha, "strict-test alpha; 0 means (alpha1+alpha2)/2");
    cmd_lieb->add_option("--c1-frac", lieb.c1_frac);
    cmd_lieb->add_option("--c2-frac", lieb.c2_frac);
    cmd_lieb->add_option("--c-frac", lieb.c_frac, "per-shift c rule: c = frac * c_x");
    cmd_lieb->add_option("--stride", lieb.stride, "evaluate every stride-th shift per axis");
    cmd_lieb->add_option("--starts", lieb.starts);
    cmd_lieb->add_option("--per-shift-starts", lieb.per_shift_starts);
    cmd_lieb->add_option("--seed", lieb.seed);
    cmd_lieb->add_option("--format", lieb.format, "json | csv | both");
    cmd_lieb->add_option("--out", lieb.out);
    cmd_lieb->add_option("--out-csv", lieb.out_csv);

    IdentityArgs ident;
    auto* cmd_ident = app.add_subcommand("identity", "shift-integrated product energy identity");
    cmd_ident->add_option("--u1", ident.u1)->required();
    cmd_ident->add_option("--u2", ident.u2)->required();
    cmd_ident->add_option("--s", ident.s);
    cmd_ident->add_option("--out", ident.out);

    RearrangeArgs rea;
    auto* cmd_rea = app.add_subcommand("rearrange", "rearrangement profiles and symmetrization");
    cmd_rea->add_option("--field", rea.field)->required();
    cmd_rea->add_option("--out-prefix", rea.out_prefix);
    cmd_rea->add_flag("--increasing", rea.increasing);
    cmd_rea->add_flag("--polya", rea.polya);
    cmd_rea->add_option("--s", rea.s);

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "parameter grids and refinement studies");
    cmd_sweep->add_option("--domain", sweep.domain)->required();
    cmd_sweep->add_option("--s", sweep.s);
    cmd_sweep->add_option("--alphas", sweep.alphas, "comma-separated ascending alpha grid");
    cmd_sweep->add_option("--cs", sweep.cs, "comma-separated ascending c grid");
    cmd_sweep->add_option("--c-fracs", sweep.c_fracs, "c grid as fractions of |Omega|");
    cmd_sweep->add_option("--refine", sweep.refine, "integer refinement factors, e.g. 1,2,4");
    cmd_sweep->add_option("--starts", sweep.starts);
    cmd_sweep->add_option("--seed", sweep.seed);
    cmd_sweep->add_option("--tol", sweep.tol);
    cmd_sweep->add_option("--format", sweep.format, "json | csv | both");
    cmd_sweep->add_option("--out", sweep.out);
    cmd_sweep->add_option("--out-csv", sweep.out_csv);

    try {
        app.parse(argc, argv);
        if (cmd_eig->parsed()) return run_eig(eig);
        if (cmd_opt->parsed()) return run_optimize(opt);
        if (cmd_fk->parsed()) return run_fk(fk);
        if (cmd_lieb->parsed()) return run_lieb(lieb);
        if (cmd_ident->parsed()) return run_identity(ident);
        if (cmd_rea->parsed()) return run_rearrange(rea);
        if (cmd_sweep->parsed()) return run_sweep(sweep);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const fm::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const fm::SolverError& e) {
        std::cerr << "solver error: " << e.what() << " (best residual " << e.best_residual
                  << ", iterations " << e.iterations;
        if (e.start_id >= 0) std::cerr << ", start " << e.start_id;
        std::cerr << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
