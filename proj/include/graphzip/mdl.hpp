#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "graphzip/coder.hpp"
#include "graphzip/graph.hpp"

namespace graphzip {

using Matrix = Eigen::MatrixXd;

struct GlassoOptions {
    double tol = 1e-5;   // max parameter change, relative to the off-diagonal scale
    int max_iter = 500;  // outer sweeps
};

// L1-penalized precision estimate via blockwise coordinate descent on the
// covariance. lambda = 0 is accepted only for invertible S.
Matrix graphical_lasso(const Matrix& S, double lambda, const GlassoOptions& opts = {});

// max violation of the stationarity conditions; small for a converged fit
double glasso_kkt_residual(const Matrix& S, const Matrix& omega, double lambda);

// Maximum-likelihood covariance matching S on the diagonal and on the edges
// of g, with zero precision elsewhere. Iterative per-vertex regressions.
Matrix dempster_complete(const Matrix& S, const Graph& g, double tol = 1e-9, int max_iter = 5000);

// max over the matching constraints and the off-support precision entries
double dempster_residual(const Matrix& S, const Graph& g, const Matrix& sigma);

struct PredictiveMdlOptions {
    int warmup = -1;       // default min(2p, ceil(N/4))
    double shrink = 1e-3;  // ridge scale applied when the running covariance is not PD
};

struct PredictiveMdlResult {
    double bits = 0.0;
    bool shrinkage_used = false;
};

// Codelength of the rows of X coded sequentially: the first warmup samples
// under a standard normal, each later sample under the completed covariance
// estimated from all earlier samples and the graph g.
PredictiveMdlResult predictive_mdl(const Matrix& X, const Graph& g,
                                   const PredictiveMdlOptions& opts = {});

struct LambdaEntry {
    double lambda = 0.0;
    bool converged = false;
    std::int64_t edges = 0;
    double graph_bits = 0.0;
    double data_bits = 0.0;
    bool shrinkage_used = false;
    std::string fail_reason;
    Graph graph;
    double total() const { return graph_bits + data_bits; }
};

struct SelectReport {
    std::vector<LambdaEntry> path;
    int best_index = -1;
    const LambdaEntry& best() const { return path[static_cast<std::size_t>(best_index)]; }
};

struct SelectOptions {
    GlassoOptions glasso;
    double precision_tol = 1e-8;  // edge threshold on the estimated precision
    PredictiveMdlOptions mdl;
    int threads = 0;  // 0: GRAPHZIP_THREADS, else hardware concurrency
};

// Two-part codelength sweep: for each lambda fit glasso, code the
// conditional independence graph, code the data predictively, keep the
// shortest total. Ties break toward the sparser (larger lambda) model.
SelectReport select_model(const Matrix& X, std::span<const double> lambdas, CoderSpec spec,
                          const CoderStats* stats = nullptr, const SelectOptions& opts = {});

std::vector<double> lambda_grid(double lo, double hi, double step);
std::vector<double> default_lambda_grid(int n_samples, int dim);

// harmonic mean of edge precision and recall; two empty graphs score 1
double f1_score(const Graph& est, const Graph& truth);

enum class PrecisionFamily { Cycle, AR1, ErdosRenyi, Hub };

PrecisionFamily precision_family_from_string(const std::string& s);
const char* to_string(PrecisionFamily f);

Matrix generate_precision(PrecisionFamily fam, int p, std::uint64_t seed);

// N zero-mean samples with covariance omega^{-1}, one per row
Matrix sample_gaussian(const Matrix& omega, int N, std::uint64_t seed);

// biased (1/N) covariance of zero-mean rows
Matrix sample_covariance(const Matrix& X);

// whitespace- or comma-separated numeric rows
Matrix load_matrix(std::string_view text);
Matrix load_matrix_file(const std::string& path);

inline Graph graph_from_precision(const Matrix& omega, double tol = 1e-8) {
    if (omega.rows() != omega.cols()) throw domain_error("precision matrix must be square");
    // symmetric input, so the storage order does not matter
    return graph_from_precision(omega.data(), static_cast<int>(omega.rows()), tol);
}

} // namespace graphzip
