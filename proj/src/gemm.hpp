#ifndef RFNET_SRC_GEMM_HPP
#define RFNET_SRC_GEMM_HPP

#ifdef RFNET_USE_CBLAS
#include <cblas.h>
#endif

namespace rfnet::detail {

// Row-major C = alpha * op(A) op(B) + beta * C; op is optional transposition.
inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a,
                 int lda, const double* b, int ldb, double beta, double* c, int ldc) {
#ifdef RFNET_USE_CBLAS
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
#else
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int p = 0; p < k; ++p) {
                const double av = trans_a ? a[static_cast<long>(p) * lda + i] : a[static_cast<long>(i) * lda + p];
                const double bv = trans_b ? b[static_cast<long>(j) * ldb + p] : b[static_cast<long>(p) * ldb + j];
                acc += av * bv;
            }
            double& out = c[static_cast<long>(i) * ldc + j];
            out = alpha * acc + (beta == 0.0 ? 0.0 : beta * out);
        }
    }
#endif
}

}  // namespace rfnet::detail

#endif
