#pragma once

#include <vector>

#include "stolfv/assembly.hpp"

namespace stolfv {

enum class SolveMethod { DirectTridiagonal, ConjugateGradient };

struct SolveReport {
    std::vector<double> solution;  // over unknowns
    double residual_norm = 0.0;    // ||b - Ax|| / (||A|| ||x|| + ||b||), max norms
    long iterations = 0;
    SolveMethod method = SolveMethod::DirectTridiagonal;
};

constexpr double kDefaultSolveTol = 1e-12;

/// Solves A x = b for a symmetric positive definite CSR matrix. Tridiagonal
/// matrices go to Thomas elimination, everything else to Jacobi-preconditioned
/// CG. max_iter < 0 selects 10 * rows.
SolveReport solve(const CsrMatrix& A, const std::vector<double>& b, double tol = kDefaultSolveTol,
                  long max_iter = -1);
SolveReport solve(const DiscreteSystem& system, double tol = kDefaultSolveTol, long max_iter = -1);

SolveReport solve_tridiagonal(const CsrMatrix& A, const std::vector<double>& b, double tol = kDefaultSolveTol);
SolveReport solve_cg(const CsrMatrix& A, const std::vector<double>& b, double tol = kDefaultSolveTol,
                     long max_iter = -1);

bool is_tridiagonal(const CsrMatrix& A);

}  // namespace stolfv
