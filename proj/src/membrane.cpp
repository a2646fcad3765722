#include "fracmem/membrane.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "fracmem/rng.hpp"

namespace fracmem {

namespace {

long long snap_cells(double c, double hd) { return std::llround(c / hd); }

std::vector<int> random_subset(Rng& rng, int n, int k) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Mask mask_from_positions(const Mask& domain, const std::vector<int>& positions) {
    std::vector<int> cells;
    cells.reserve(positions.size());
    for (int p : positions) cells.push_back(domain.cells[p]);
    return mask_from_cells(domain.grid, std::move(cells));
}

struct StartOutcome {
    double Lambda = 0.0;
    Field u;
    Mask D;
    std::vector<double> trace;
    bool converged = false;
    bool degenerate = false;
    std::optional<SolverError> error;
};

}  // namespace

Mask bathtub_subset(const Field& u, double c, TieRule) {
    const Mask& domain = u.mask;
    const int n = domain.count();
    const double hd = domain.grid.cell_volume();
    const long long k = snap_cells(c, hd);
    if (k < 0 || k > n) throw ParameterError("bathtub measure outside [0, |Omega|]");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ua = u.values[a] * u.values[a];
        const double ub = u.values[b] * u.values[b];
        if (ua != ub) return ua < ub;
        return domain.cells[a] < domain.cells[b];  // lexicographic tie-break
    });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());
    return mask_from_positions(domain, order);
}

OptimizationResult optimize(const QuadraticForm& form, const MembraneConfig& config) {
    const int n = form.n();
    const double hd = form.hd;
    const long long k = snap_cells(config.c, hd);
    if (k < 1 || k >= n)
        throw ParameterError("constraint measure c must snap inside (0, |Omega|)");
    if (config.starts < 1) throw ParameterError("need at least one start");
    const double c_snapped = static_cast<double>(k) * hd;

    std::vector<StartOutcome> outcomes(config.starts);
#pragma omp parallel for schedule(dynamic)
    for (int start = 0; start < config.starts; ++start) {
        StartOutcome& out = outcomes[start];
        try {
            Rng rng = substream(config.seed, static_cast<std::uint64_t>(start));
            Mask D = mask_from_positions(form.domain, random_subset(rng, n, static_cast<int>(k)));
            EigOptions eopts;
            eopts.tol = config.eig_tol;
            std::vector<double> warm;
            double prev = std::numeric_limits<double>::infinity();
            for (int round = 0; round < config.max_outer; ++round) {
                eopts.x0 = warm.empty() ? nullptr : &warm;
                EigenPair pair = smallest_eigenpair(form, D, config.alpha, eopts);
                out.degenerate = out.degenerate || pair.degenerate;
                out.trace.push_back(pair.lambda);
                out.u = pair.vector;
                out.Lambda = pair.lambda;
                out.D = D;
                warm = pair.vector.values;
                Mask next = bathtub_subset(pair.vector, c_snapped);
                if (next.cells == D.cells) {
                    out.converged = true;
                    break;
                }
                if (prev - pair.lambda < config.tol && round > 0) {
                    out.converged = true;
                    break;
                }
                prev = pair.lambda;
                D = std::move(next);
            }
        } catch (const SolverError& e) {
            out.error = SolverError(e.what(), e.best_residual, e.iterations, start);
        }
    }

    for (const auto& out : outcomes)
        if (out.error) throw *out.error;

    int best = 0;
    for (int i = 1; i < config.starts; ++i)
        if (outcomes[i].Lambda < outcomes[best].Lambda) best = i;

    OptimizationResult result;
    result.Lambda = outcomes[best].Lambda;
    result.u = outcomes[best].u;
    result.D = outcomes[best].D;
    result.trace = outcomes[best].trace;
    result.start_id = best;
    result.converged = outcomes[best].converged;
    result.c_snapped = c_snapped;
    result.degenerate_flags.reserve(outcomes.size());
    for (const auto& out : outcomes) result.degenerate_flags.push_back(out.degenerate ? 1 : 0);
    return result;
}

namespace {

// lexicographic combination unranking over positions {0..n-1}
std::vector<int> unrank_combination(int n, int k, long long rank,
                                    const std::vector<std::vector<long long>>& binom) {
    std::vector<int> combo;
    combo.reserve(k);
    int start = 0;
    for (int slot = k; slot > 0; --slot) {
        for (int v = start; v <= n - slot; ++v) {
            const long long block = binom[n - 1 - v][slot - 1];
            if (rank < block) {
                combo.push_back(v);
                start = v + 1;
                break;
            }
            rank -= block;
        }
    }
    return combo;
}

}  // namespace

double brute_force_lambda(const QuadraticForm& form, double alpha, double c) {
    const int n = form.n();
    if (n > 20) throw ParameterError("brute force capped at 20 active cells");
    const long long k = snap_cells(c, form.hd);
    if (k < 0 || k > n) throw ParameterError("constraint measure outside [0, |Omega|]");

    std::vector<std::vector<long long>> binom(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        binom[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
    }
    const long long total = binom[n][static_cast<int>(k)];

    EigOptions eopts;
    eopts.tol = 1e-11;
    eopts.dense_cutoff = 32;  // always dense at this size

    std::vector<double> lambdas(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 16)
    for (long long rank = 0; rank < total; ++rank) {
        const auto combo = unrank_combination(n, static_cast<int>(k), rank, binom);
        const Mask D = mask_from_positions(form.domain, combo);
        lambdas[static_cast<std::size_t>(rank)] =
            smallest_eigenpair(form, D, alpha, eopts).lambda;
    }
    double best = lambdas[0];
    for (double v : lambdas) best = std::min(best, v);
    return best;
}

SweepTable monotonicity_sweep(const QuadraticForm& form, const std::vector<double>& alphas,
                              const std::vector<double>& cs, const MembraneConfig& base) {
    if (alphas.empty() || cs.empty()) throw ParameterError("sweep grids must be nonempty");
    if (!std::is_sorted(alphas.begin(), alphas.end()) || !std::is_sorted(cs.begin(), cs.end()))
        throw ParameterError("sweep grids must be sorted ascending");

    SweepTable table;
    table.alphas = alphas;
    table.cs = cs;
    table.Lambda.assign(alphas.size() * cs.size(), 0.0);
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        for (std::size_t ci = 0; ci < cs.size(); ++ci) {
            MembraneConfig cfg = base;
            cfg.alpha = alphas[ai];
            cfg.c = cs[ci];
            table.Lambda[ai * cs.size() + ci] = optimize(form, cfg).Lambda;
        }
    }
    for (std::size_t ai = 0; ai < alphas.size(); ++ai)
        for (std::size_t ci = 0; ci < cs.size(); ++ci) {
            const double here = table.Lambda[ai * cs.size() + ci];
            if (ai + 1 < alphas.size() &&
                table.Lambda[(ai + 1) * cs.size() + ci] < here - table.slack)
                table.violations.push_back({static_cast<int>(ai), static_cast<int>(ci),
                                            static_cast<int>(ai + 1), static_cast<int>(ci)});
            if (ci + 1 < cs.size() && table.Lambda[ai * cs.size() + ci + 1] < here - table.slack)
                table.violations.push_back({static_cast<int>(ai), static_cast<int>(ci),
                                            static_cast<int>(ai), static_cast<int>(ci + 1)});
        }
    return table;
}

}  // namespace fracmem
