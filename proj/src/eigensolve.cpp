#include "fracmem/eigensolve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace fracmem {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// y = (C/2) A x / h^dim + alpha * chi_D xrows; OpenMP over rows, each row a
// serial dot product, so the result is independent of the thread count.
struct Operator {
    const QuadraticForm* form;
    std::vector<std::uint8_t> in_D;  // per active position
    double alpha;
    double scale;  // C/(2 h^dim)

    void apply(const VectorXd& x, VectorXd& y) const {
        const int n = static_cast<int>(x.size());
        const MatrixXd& A = form->A;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += A(j, i) * x(j);  // A symmetric; column walk
            y(i) = scale * acc + (in_D[i] ? alpha * x(i) : 0.0);
        }
    }

    VectorXd diagonal() const {
        const int n = form->n();
        VectorXd d(n);
        for (int i = 0; i < n; ++i)
            d(i) = scale * form->A(i, i) + (in_D[i] ? alpha : 0.0);
        return d;
    }
};

Field normalized_field(const QuadraticForm& form, VectorXd u) {
    // L2 normalization under cell quadrature, then sign so the largest-magnitude
    // entry is positive (ground-state convention).
    const double nrm = u.norm() * std::sqrt(form.hd);
    u /= nrm;
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < u.size(); ++i) {
        const double a = std::abs(u(i));
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (u(arg) < 0.0) u = -u;
    return make_field(form.domain, std::vector<double>(u.data(), u.data() + u.size()));
}

EigenPair dense_solve(const QuadraticForm& form, const Operator& op) {
    const int n = form.n();
    MatrixXd H = op.scale * form.A;
    for (int i = 0; i < n; ++i)
        if (op.in_D[i]) H(i, i) += op.alpha;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw SolverError("dense eigendecomposition failed", 0.0, 0);
    EigenPair out;
    out.lambda = es.eigenvalues()(0);
    VectorXd u = es.eigenvectors().col(0);
    out.residual = (H * u - out.lambda * u).norm() / u.norm();
    out.iterations = 1;
    out.degenerate = n > 1 && std::abs(es.eigenvalues()(1) - out.lambda) <
                                  1e-12 * std::abs(out.lambda);
    out.vector = normalized_field(form, std::move(u));
    return out;
}

}  // namespace

EigenPair smallest_eigenpair(const QuadraticForm& form, const Mask& D, double alpha,
                             const EigOptions& opts) {
    if (!(alpha >= 0.0)) throw ParameterError("alpha must be nonnegative");
    if (!(opts.tol > 0.0)) throw ParameterError("tolerance must be positive");
    if (!form.has_dense)
        throw ParameterError("eigensolve needs a form assembled with its dense matrix");

    const int n = form.n();
    Operator op;
    op.form = &form;
    op.alpha = alpha;
    op.scale = 0.5 * form.spec.C_Ns / form.hd;
    op.in_D.assign(n, 0);
    for (int p : positions_in(form.domain, D)) op.in_D[p] = 1;

    if (n <= opts.dense_cutoff) return dense_solve(form, op);

    // single-vector LOBPCG with Jacobi preconditioning
    const VectorXd diag = op.diagonal();
    const double diag_max = diag.maxCoeff();

    VectorXd x;
    if (opts.x0 && static_cast<int>(opts.x0->size()) == n)
        x = Eigen::Map<const VectorXd>(opts.x0->data(), n);
    else
        x = VectorXd::Ones(n);
    x.normalize();

    VectorXd hx(n), hz(n), hp(n), z(n), p, r(n);
    op.apply(x, hx);
    double lam = x.dot(hx);
    double best_res = std::numeric_limits<double>::infinity();
    double gap_at_exit = std::numeric_limits<double>::infinity();
    int it = 0;
    bool converged = false;

    for (it = 1; it <= opts.max_outer; ++it) {
        r = hx - lam * x;
        const double res = r.norm();
        best_res = std::min(best_res, res);
        if (res <= opts.tol * std::max(std::abs(lam), 1e-300)) {
            converged = true;
            break;
        }

        const double floor = 1e-10 * std::max(diag_max - lam, 1.0) + 1e-300;
        z = r.array() / (diag.array() - lam).max(floor);

        // orthonormal basis {x, z, p}, dropping near-dependent directions
        std::vector<VectorXd*> basis{&x, &z};
        if (p.size() == n) basis.push_back(&p);
        std::vector<VectorXd> V;
        std::vector<VectorXd> HV;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            VectorXd v = *basis[b];
            const double before = v.norm();
            for (const auto& q : V) v -= q.dot(v) * q;
            for (const auto& q : V) v -= q.dot(v) * q;  // second MGS pass
            const double after = v.norm();
            if (after < 1e-10 * before || after == 0.0) continue;
            v /= after;
            V.push_back(v);
            VectorXd hv(n);
            if (b == 0 && V.size() == 1) {
                hv = hx / x.norm();  // x enters unchanged up to scale
            } else {
                op.apply(v, hv);
            }
            HV.push_back(std::move(hv));
        }
        const int m = static_cast<int>(V.size());
        MatrixXd G(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) G(a, b) = G(b, a) = V[a].dot(HV[b]);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
        const VectorXd c = es.eigenvectors().col(0);
        lam = es.eigenvalues()(0);
        gap_at_exit = m > 1 ? es.eigenvalues()(1) - lam : std::numeric_limits<double>::infinity();

        VectorXd xn = VectorXd::Zero(n), hxn = VectorXd::Zero(n);
        VectorXd pn = VectorXd::Zero(n), hpn = VectorXd::Zero(n);
        for (int a = 0; a < m; ++a) {
            xn += c(a) * V[a];
            hxn += c(a) * HV[a];
            if (a > 0) {
                pn += c(a) * V[a];
                hpn += c(a) * HV[a];
            }
        }
        const double xs = xn.norm();
        x = xn / xs;
        hx = hxn / xs;
        const double ps = pn.norm();
        if (ps > 1e-14) {
            p = pn / ps;
            hp = hpn / ps;
        } else {
            p.resize(0);
        }
    }

    if (!converged)
        throw SolverError("eigensolver did not reach the requested residual", best_res,
                          opts.max_outer);

    EigenPair out;
    out.lambda = lam;
    out.residual = (hx - lam * x).norm() / x.norm();
    out.iterations = it;
    out.degenerate = gap_at_exit < 1e-12 * std::abs(lam);
    out.vector = normalized_field(form, std::move(x));
    return out;
}

EigenPair smallest_eigenpair(const QuadraticForm& form, const Mask& D, double alpha,
                             double tol) {
    EigOptions opts;
    opts.tol = tol;
    return smallest_eigenpair(form, D, alpha, opts);
}

double dirichlet_eigenvalue(const QuadraticForm& form, double tol) {
    return smallest_eigenpair(form, Mask{form.grid, {}}, 0.0, tol).lambda;
}

}  // namespace fracmem
