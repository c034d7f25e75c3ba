#include "stolfv/linsolve.hpp"

#include <algorithm>
#include <cmath>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_input(const CsrMatrix& A, const std::vector<double>& b) {
    if (b.size() != A.rows || A.row_ptr.size() != A.rows + 1) throw InvalidArgument("matrix and right-hand side sizes differ");
    for (double v : A.val) {
        if (!std::isfinite(v)) throw NumericError("matrix has non-finite entries");
    }
    for (double v : b) {
        if (!std::isfinite(v)) throw NumericError("right-hand side has non-finite entries");
    }
}

double norm_inf(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double norm_inf(const CsrMatrix& A) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.rows; ++i) {
        double row = 0.0;
        for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) row += std::abs(A.val[k]);
        s = std::max(s, row);
    }
    return s;
}

// Normwise backward error ||b - Ax|| / (||A|| ||x|| + ||b||) in the max norm.
double backward_error(double A_norm, const std::vector<double>& x, const std::vector<double>& b,
                      const std::vector<double>& r) {
    const double scale = A_norm * norm_inf(x) + norm_inf(b);
    return scale > 0.0 ? norm_inf(r) / scale : norm_inf(r);
}

double relative_residual(const CsrMatrix& A, const std::vector<double>& x, const std::vector<double>& b,
                         std::vector<double>* r_out = nullptr) {
    std::vector<double> r = A.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const double err = backward_error(norm_inf(A), x, b, r);
    if (r_out) *r_out = std::move(r);
    return err;
}

std::vector<double> thomas(const std::vector<double>& lower, std::vector<double> diag, const std::vector<double>& upper,
                           std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw NumericError("zero pivot in tridiagonal elimination");
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw NumericError("zero pivot in tridiagonal elimination");
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

}  // namespace

bool is_tridiagonal(const CsrMatrix& A) {
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const std::size_t j = A.col[k];
            if (j + 1 < i || j > i + 1) return false;
        }
    }
    return true;
}

SolveReport solve_tridiagonal(const CsrMatrix& A, const std::vector<double>& b, double tol) {
    check_input(A, b);
    if (!is_tridiagonal(A)) throw InvalidArgument("matrix is not tridiagonal");
    SolveReport rep;
    rep.method = SolveMethod::DirectTridiagonal;
    const std::size_t n = A.rows;
    if (n == 0) return rep;
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const std::size_t j = A.col[k];
            if (j + 1 == i) lower[i] = A.val[k];
            else if (j == i) diag[i] = A.val[k];
            else upper[i] = A.val[k];
        }
    }
    rep.solution = thomas(lower, diag, upper, b);
    std::vector<double> r;
    rep.residual_norm = relative_residual(A, rep.solution, b, &r);
    // Iterative refinement for badly scaled systems.
    for (int pass = 0; pass < 3 && rep.residual_norm > tol; ++pass) {
        const std::vector<double> dx = thomas(lower, diag, upper, r);
        for (std::size_t i = 0; i < n; ++i) rep.solution[i] += dx[i];
        rep.residual_norm = relative_residual(A, rep.solution, b, &r);
    }
    if (!std::isfinite(rep.residual_norm)) throw NumericError("tridiagonal solve produced non-finite values");
    if (rep.residual_norm > tol) throw NonConvergence("tridiagonal solve missed the tolerance", rep.residual_norm);
    return rep;
}

SolveReport solve_cg(const CsrMatrix& A, const std::vector<double>& b, double tol, long max_iter) {
    check_input(A, b);
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const std::size_t n = A.rows;
    if (max_iter < 0) max_iter = 10 * static_cast<long>(n);
    SolveReport rep;
    rep.method = SolveMethod::ConjugateGradient;
    rep.solution.assign(n, 0.0);
    if (n == 0 || norm2(b) == 0.0) return rep;
    const double A_norm = norm_inf(A);

    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = A.at(i, i);
        if (!(d > 0.0)) throw NumericError("matrix diagonal is not positive");
        inv_diag[i] = 1.0 / d;
    }
    std::vector<double>& x = rep.solution;
    std::vector<double> r = b, z(n), p(n), best = x;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double best_res = INFINITY;
    for (long it = 1; it <= max_iter; ++it) {
        const std::vector<double> Ap = A.multiply(p);
        const double pAp = dot(p, Ap);
        if (!(pAp > 0.0)) throw NumericError("matrix is not positive definite");
        const double a = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += a * p[i];
            r[i] -= a * Ap[i];
        }
        const double res = backward_error(A_norm, x, b, r);
        if (!std::isfinite(res)) throw NumericError("conjugate gradients produced non-finite values");
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (res <= tol) {
            rep.iterations = it;
            // The recursive residual can drift; confirm with the true one.
            rep.residual_norm = relative_residual(A, x, b, &r);
            if (rep.residual_norm <= tol) return rep;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NonConvergence("conjugate gradients exhausted the iteration budget", relative_residual(A, best, b));
}

SolveReport solve(const CsrMatrix& A, const std::vector<double>& b, double tol, long max_iter) {
    if (is_tridiagonal(A)) return solve_tridiagonal(A, b, tol);
    return solve_cg(A, b, tol, max_iter);
}

SolveReport solve(const DiscreteSystem& system, double tol, long max_iter) {
    return solve(system.matrix, system.rhs, tol, max_iter);
}

}  // namespace stolfv
