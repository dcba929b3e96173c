#include "graphzip/mdl.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace graphzip {

namespace {

double soft_threshold(double x, double lambda) {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

double offdiag_scale(const Matrix& S) {
    const int p = static_cast<int>(S.rows());
    if (p < 2) return std::max(1e-12, std::abs(S(0, 0)));
    double sum = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j) sum += std::abs(S(i, j));
    const double avg = sum / (static_cast<double>(p) * (p - 1));
    return std::max({avg, 1e-6 * S.diagonal().cwiseAbs().mean(), 1e-12});
}

} // namespace

Matrix graphical_lasso(const Matrix& S, double lambda, const GlassoOptions& opts) {
    if (S.rows() != S.cols()) throw domain_error("glasso: covariance must be square");
    if (lambda < 0.0) throw domain_error("glasso: lambda must be nonnegative");
    const int p = static_cast<int>(S.rows());
    if (p == 0) throw domain_error("glasso: empty covariance");
    if (p == 1) {
        Matrix omega(1, 1);
        omega(0, 0) = 1.0 / (S(0, 0) + lambda);
        return omega;
    }
    if (lambda == 0.0) {
        Eigen::LLT<Matrix> llt(S);
        if (llt.info() != Eigen::Success)
            throw solver_error("glasso: lambda=0 needs an invertible covariance");
        return llt.solve(Matrix::Identity(p, p));
    }

    Matrix W = S;
    W.diagonal().array() += lambda;
    Matrix Beta = Matrix::Zero(p - 1, p);
    const double scale = offdiag_scale(S);
    const double thresh = opts.tol * scale;

    bool converged = false;
    double maxdiff = 0.0;
    for (int sweep = 0; sweep < opts.max_iter && !converged; ++sweep) {
        maxdiff = 0.0;
        for (int j = 0; j < p; ++j) {
            // gather the j-th block
            Matrix W11(p - 1, p - 1);
            Eigen::VectorXd s12(p - 1), w12_old(p - 1);
            for (int a = 0, ia = 0; a < p; ++a) {
                if (a == j) continue;
                s12(ia) = S(a, j);
                w12_old(ia) = W(a, j);
                for (int b = 0, ib = 0; b < p; ++b) {
                    if (b == j) continue;
                    W11(ia, ib) = W(a, b);
                    ++ib;
                }
                ++ia;
            }
            Eigen::VectorXd beta = Beta.col(j);
            // lasso subproblem by coordinate descent
            for (int inner = 0; inner < 200; ++inner) {
                double delta = 0.0;
                for (int k = 0; k < p - 1; ++k) {
                    const double grad = s12(k) - (W11.row(k) * beta - W11(k, k) * beta(k));
                    const double next = soft_threshold(grad, lambda) / W11(k, k);
                    delta = std::max(delta, std::abs(next - beta(k)));
                    beta(k) = next;
                }
                if (delta < 0.1 * thresh) break;
            }
            Beta.col(j) = beta;
            Eigen::VectorXd w12 = W11 * beta;
            maxdiff = std::max(maxdiff, (w12 - w12_old).cwiseAbs().maxCoeff());
            for (int a = 0, ia = 0; a < p; ++a) {
                if (a == j) continue;
                W(a, j) = w12(ia);
                W(j, a) = w12(ia);
                ++ia;
            }
        }
        if (maxdiff < thresh) converged = true;
    }
    if (!converged)
        throw solver_error("glasso: no convergence after " + std::to_string(opts.max_iter) +
                           " sweeps, residual " + std::to_string(maxdiff));

    // back out the precision column by column
    Matrix Omega = Matrix::Zero(p, p);
    for (int j = 0; j < p; ++j) {
        const Eigen::VectorXd& beta = Beta.col(j);
        double dot = 0.0;
        for (int a = 0, ia = 0; a < p; ++a) {
            if (a == j) continue;
            dot += W(a, j) * beta(ia);
            ++ia;
        }
        const double theta22 = 1.0 / (W(j, j) - dot);
        Omega(j, j) = theta22;
        for (int a = 0, ia = 0; a < p; ++a) {
            if (a == j) continue;
            Omega(a, j) += -beta(ia) * theta22 * 0.5;
            Omega(j, a) += -beta(ia) * theta22 * 0.5;
            ++ia;
        }
    }
    return Omega;
}

double glasso_kkt_residual(const Matrix& S, const Matrix& omega, double lambda) {
    const int p = static_cast<int>(S.rows());
    Eigen::LLT<Matrix> llt(omega);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    Matrix W = llt.solve(Matrix::Identity(p, p));
    double res = 0.0;
    for (int i = 0; i < p; ++i) {
        res = std::max(res, std::abs(W(i, i) - S(i, i) - lambda));
        for (int j = i + 1; j < p; ++j) {
            const double d = W(i, j) - S(i, j);
            if (std::abs(omega(i, j)) > 1e-10)
                res = std::max(res, std::abs(d - lambda * (omega(i, j) > 0 ? 1.0 : -1.0)));
            else
                res = std::max(res, std::max(0.0, std::abs(d) - lambda));
        }
    }
    return res;
}

namespace {

Matrix dempster_complete_warm(const Matrix& S, const Graph& g, Matrix W, double tol, int max_iter) {
    const int p = static_cast<int>(S.rows());
    // pin the constrained entries
    for (int i = 0; i < p; ++i) {
        W(i, i) = S(i, i);
        for (int j : g.neighbors(i)) W(i, j) = S(i, j);
    }
    const double scale = std::max(S.cwiseAbs().maxCoeff(), 1e-12);
    for (int sweep = 0; sweep < max_iter; ++sweep) {
        double maxchange = 0.0;
        for (int j = 0; j < p; ++j) {
            const auto& nbrs = g.neighbors(j);
            Eigen::VectorXd w_new = Eigen::VectorXd::Zero(p);
            if (!nbrs.empty()) {
                const int m = static_cast<int>(nbrs.size());
                Matrix Wnn(m, m);
                Eigen::VectorXd s_n(m);
                for (int a = 0; a < m; ++a) {
                    s_n(a) = S(nbrs[a], j);
                    for (int b = 0; b < m; ++b) Wnn(a, b) = W(nbrs[a], nbrs[b]);
                }
                Eigen::VectorXd x = Wnn.ldlt().solve(s_n);
                for (int a = 0; a < p; ++a) {
                    if (a == j) continue;
                    double acc = 0.0;
                    for (int b = 0; b < m; ++b) acc += W(a, nbrs[b]) * x(b);
                    w_new(a) = acc;
                }
                // the constrained entries solve exactly
                for (int b = 0; b < m; ++b) w_new(nbrs[b]) = s_n(b);
            }
            for (int a = 0; a < p; ++a) {
                if (a == j) continue;
                maxchange = std::max(maxchange, std::abs(W(a, j) - w_new(a)));
                W(a, j) = w_new(a);
                W(j, a) = w_new(a);
            }
        }
        if (maxchange < tol * scale) {
            Eigen::LLT<Matrix> llt(W);
            if (llt.info() != Eigen::Success)
                throw solver_error("completion: result is not positive definite");
            return W;
        }
    }
    throw solver_error("completion: no convergence after " + std::to_string(max_iter) + " sweeps");
}

} // namespace

Matrix dempster_complete(const Matrix& S, const Graph& g, double tol, int max_iter) {
    if (S.rows() != S.cols()) throw domain_error("completion: covariance must be square");
    if (static_cast<int>(S.rows()) != g.vertex_count())
        throw domain_error("completion: graph size does not match the covariance");
    {
        Eigen::LLT<Matrix> llt(S);
        if (llt.info() != Eigen::Success)
            throw solver_error("completion: covariance must be positive definite");
    }
    return dempster_complete_warm(S, g, S, tol, max_iter);
}

double dempster_residual(const Matrix& S, const Graph& g, const Matrix& sigma) {
    const int p = static_cast<int>(S.rows());
    Matrix K = sigma.llt().solve(Matrix::Identity(p, p));
    double res = 0.0;
    for (int i = 0; i < p; ++i) {
        res = std::max(res, std::abs(sigma(i, i) - S(i, i)));
        for (int j = i + 1; j < p; ++j) {
            if (g.has_edge(i, j))
                res = std::max(res, std::abs(sigma(i, j) - S(i, j)));
            else
                res = std::max(res, std::abs(K(i, j)));
        }
    }
    return res;
}

namespace {

constexpr double kLog2TwoPi = 2.651496129472319;  // log2(2*pi)

double gaussian_bits(const Eigen::VectorXd& x, const Eigen::LLT<Matrix>& llt, double log2det) {
    const Eigen::VectorXd half = llt.matrixL().solve(x);
    const double quad = half.squaredNorm();
    return 0.5 * (static_cast<double>(x.size()) * kLog2TwoPi + log2det + quad / std::numbers::ln2);
}

} // namespace

PredictiveMdlResult predictive_mdl(const Matrix& X, const Graph& g, const PredictiveMdlOptions& opts) {
    const int N = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    if (p != g.vertex_count()) throw domain_error("predictive mdl: graph size does not match data");
    if (N < 1) throw domain_error("predictive mdl: no samples");
    const int warmup = opts.warmup >= 0 ? opts.warmup : std::min(2 * p, (N + 3) / 4);

    PredictiveMdlResult res;
    // default code: standard normal per coordinate
    for (int i = 0; i < std::min(warmup, N); ++i)
        res.bits += 0.5 * (p * kLog2TwoPi + X.row(i).squaredNorm() / std::numbers::ln2);
    if (N <= warmup) return res;

    const int stride = N <= 500 ? 1 : (N + 99) / 100;
    Matrix M = Matrix::Zero(p, p);
    for (int i = 0; i < warmup; ++i) M.noalias() += X.row(i).transpose() * X.row(i);

    Matrix W;  // warm start for the completion
    Eigen::LLT<Matrix> llt;
    double log2det = 0.0;
    bool have_model = false;

    for (int i = warmup; i < N; ++i) {
        if (!have_model || (i - warmup) % stride == 0) {
            Matrix Si = M / static_cast<double>(i);
            Eigen::LLT<Matrix> chk(Si);
            bool pd = chk.info() == Eigen::Success;
            if (pd) {
                const double floor = 1e-7 * std::sqrt(Si.trace() / p);
                pd = chk.matrixLLT().diagonal().minCoeff() > floor;
            }
            if (!pd) {
                Si.diagonal().array() += opts.shrink * Si.trace() / p;
                res.shrinkage_used = true;
            }
            if (!have_model) W = Si;
            Matrix sigma = dempster_complete_warm(Si, g, W, 1e-9, 5000);
            W = sigma;
            llt.compute(sigma);
            if (llt.info() != Eigen::Success)
                throw solver_error("predictive mdl: completed covariance not positive definite");
            log2det = 2.0 * llt.matrixLLT().diagonal().array().log().sum() / std::numbers::ln2;
            have_model = true;
        }
        res.bits += gaussian_bits(X.row(i), llt, log2det);
        M.noalias() += X.row(i).transpose() * X.row(i);
    }
    return res;
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
    if (step <= 0.0 || hi < lo) throw domain_error("lambda grid: bad range");
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
    return out;
}

std::vector<double> default_lambda_grid(int n_samples, int dim) {
    return n_samples > dim ? lambda_grid(0.01, 1.0, 0.01) : lambda_grid(0.1, 1.0, 0.01);
}

namespace {

int worker_count(int requested, int tasks) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("GRAPHZIP_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return std::max(1, std::min(n, tasks));
}

} // namespace

SelectReport select_model(const Matrix& X, std::span<const double> lambdas, CoderSpec spec,
                          const CoderStats* stats, const SelectOptions& opts) {
    if (lambdas.empty()) throw domain_error("select: empty lambda grid");
    const Matrix S = sample_covariance(X);

    SelectReport report;
    report.path.resize(lambdas.size());
    std::atomic<std::size_t> cursor{0};
    const int nthreads = worker_count(opts.threads, static_cast<int>(lambdas.size()));

    auto run_one = [&](std::size_t idx) {
        LambdaEntry& e = report.path[idx];
        e.lambda = lambdas[idx];
        try {
            Matrix omega = graphical_lasso(S, e.lambda, opts.glasso);
            e.graph = graph_from_precision(omega, opts.precision_tol);
            e.edges = e.graph.edge_count();
            e.graph_bits = static_cast<double>(encode_graph(e.graph, spec, stats).total_bits());
            auto mdl = predictive_mdl(X, e.graph, opts.mdl);
            e.data_bits = mdl.bits;
            e.shrinkage_used = mdl.shrinkage_used;
            e.converged = true;
        } catch (const error& err) {
            e.converged = false;
            e.fail_reason = err.what();
        }
    };

    if (nthreads == 1) {
        for (std::size_t i = 0; i < lambdas.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = cursor.fetch_add(1); i < lambdas.size(); i = cursor.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < report.path.size(); ++i) {
        const auto& e = report.path[i];
        if (!e.converged) continue;
        if (report.best_index < 0 || e.total() <= report.best().total() + 1e-9)
            report.best_index = static_cast<int>(i);
    }
    if (report.best_index < 0) throw solver_error("select: no lambda produced a usable fit");
    return report;
}

double f1_score(const Graph& est, const Graph& truth) {
    if (est.vertex_count() != truth.vertex_count())
        throw domain_error("f1: graphs must share a vertex set");
    const auto ee = est.edge_count();
    const auto te = truth.edge_count();
    if (ee == 0 && te == 0) return 1.0;
    if (ee == 0 || te == 0) return 0.0;
    std::int64_t tp = 0;
    for (auto [u, v] : est.edges())
        if (truth.has_edge(u, v)) ++tp;
    if (tp == 0) return 0.0;
    const double prec = static_cast<double>(tp) / static_cast<double>(ee);
    const double rec = static_cast<double>(tp) / static_cast<double>(te);
    return 2.0 * prec * rec / (prec + rec);
}

PrecisionFamily precision_family_from_string(const std::string& s) {
    if (s == "cycle") return PrecisionFamily::Cycle;
    if (s == "ar1") return PrecisionFamily::AR1;
    if (s == "er") return PrecisionFamily::ErdosRenyi;
    if (s == "hub") return PrecisionFamily::Hub;
    throw domain_error("unknown precision family '" + s + "'");
}

const char* to_string(PrecisionFamily f) {
    switch (f) {
        case PrecisionFamily::Cycle: return "cycle";
        case PrecisionFamily::AR1: return "ar1";
        case PrecisionFamily::ErdosRenyi: return "er";
        case PrecisionFamily::Hub: return "hub";
    }
    return "?";
}

Matrix generate_precision(PrecisionFamily fam, int p, std::uint64_t seed) {
    if (p < 2) throw domain_error("precision generator: need p >= 2");
    std::mt19937_64 rng(seed);
    Matrix omega = Matrix::Zero(p, p);
    switch (fam) {
        case PrecisionFamily::Cycle: {
            if (p < 3) throw domain_error("cycle precision: need p >= 3");
            omega.setIdentity();
            for (int i = 1; i < p; ++i) omega(i, i - 1) = omega(i - 1, i) = 0.5;
            omega(0, p - 1) = omega(p - 1, 0) = 0.4;
            return omega;
        }
        case PrecisionFamily::AR1: {
            omega.setIdentity();
            for (int i = 1; i < p; ++i) omega(i, i - 1) = omega(i - 1, i) = 0.5;
            return omega;
        }
        case PrecisionFamily::ErdosRenyi: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::uniform_real_distribution<double> val(0.4, 0.8);
            for (int i = 0; i < p; ++i)
                for (int j = i + 1; j < p; ++j)
                    if (unif(rng) < 2.0 / p) omega(i, j) = omega(j, i) = val(rng);
            break;
        }
        case PrecisionFamily::Hub: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            Matrix A = Matrix::Zero(p, p);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    if (i != j && unif(rng) < 0.01) A(i, j) = 1.0;
            std::uniform_int_distribution<int> pick(0, p - 1);
            const int h1 = pick(rng);
            int h2 = pick(rng);
            while (h2 == h1) h2 = pick(rng);
            for (int h : {h1, h2})
                for (int j = 0; j < p; ++j) {
                    if (j == h) continue;
                    A(h, j) = unif(rng) < 0.7 ? 1.0 : 0.0;
                    A(j, h) = unif(rng) < 0.7 ? 1.0 : 0.0;
                }
            std::uniform_real_distribution<double> mag(0.25, 0.75);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    if (i != j && A(i, j) != 0.0)
                        A(i, j) = (unif(rng) < 0.5 ? -1.0 : 1.0) * mag(rng);
            omega = 0.5 * (A + A.transpose());
            break;
        }
    }
    // shift the spectrum to keep the matrix positive definite
    Eigen::SelfAdjointEigenSolver<Matrix> eig(omega);
    const double delta = std::abs(eig.eigenvalues().minCoeff()) + 0.05;
    omega.diagonal().array() += delta;
    return omega;
}

Matrix sample_gaussian(const Matrix& omega, int N, std::uint64_t seed) {
    if (omega.rows() != omega.cols()) throw domain_error("sampling: precision must be square");
    if (N < 0) throw domain_error("sampling: negative sample count");
    const int p = static_cast<int>(omega.rows());
    Eigen::LLT<Matrix> llt(omega);
    if (llt.info() != Eigen::Success) throw domain_error("sampling: precision not positive definite");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix X(N, p);
    Eigen::VectorXd z(p);
    const Matrix L = llt.matrixL();
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < p; ++j) z(j) = normal(rng);
        // x = L^{-T} z gives covariance (L L^T)^{-1} = omega^{-1}
        X.row(i) = L.transpose().triangularView<Eigen::Upper>().solve(z).transpose();
    }
    return X;
}

Matrix sample_covariance(const Matrix& X) {
    const int N = static_cast<int>(X.rows());
    if (N < 1) throw domain_error("covariance: no samples");
    return (X.transpose() * X) / static_cast<double>(N);
}

Matrix load_matrix(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++lineno;
        for (auto& c : line)
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        std::string rest;
        ss.clear();
        ss >> rest;
        if (!rest.empty())
            throw parse_error("matrix: bad token '" + rest + "' on line " + std::to_string(lineno));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error("matrix: no data rows");
    const std::size_t cols = rows[0].size();
    Matrix X(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw parse_error("matrix: ragged row " + std::to_string(i + 1));
        for (std::size_t j = 0; j < cols; ++j) X(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return X;
}

Matrix load_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_matrix(ss.str());
}

} // namespace graphzip
