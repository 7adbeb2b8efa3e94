#include "csmt/regress.hpp"

#include "csmt/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace csmt {

void Dataset::validate() const {
    auto n_rows = s.size();
    if (n_rows < 1) {
        throw insufficient_data_error("Dataset: at least one row required");
    }
    if (g.size() != n_rows || y.size() != n_rows) {
        throw data_error("Dataset: s, g, y must have equal length");
    }
    if (x.size() > 0 && x.rows() != n_rows) {
        throw data_error("Dataset: covariate rows must match n");
    }
    if (!row_ids.empty() && row_ids.size() != static_cast<std::size_t>(n_rows)) {
        throw data_error("Dataset: row_ids must be empty or length n");
    }
    if (!s.allFinite() || !g.allFinite() || !y.allFinite() ||
        (x.size() > 0 && !x.allFinite())) {
        throw data_error("Dataset: all entries must be finite");
    }
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& rows) const {
    Dataset sub;
    auto m = static_cast<Eigen::Index>(rows.size());
    sub.s.resize(m);
    sub.g.resize(m);
    sub.y.resize(m);
    sub.x.resize(m, x.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
        auto r = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]);
        sub.s(i) = s(r);
        sub.g(i) = g(r);
        sub.y(i) = y(r);
        if (x.cols() > 0) {
            sub.x.row(i) = x.row(r);
        }
        if (!row_ids.empty()) {
            sub.row_ids.push_back(row_ids[static_cast<std::size_t>(r)]);
        }
    }
    return sub;
}

namespace {

constexpr double kRankTol = 1e-10;       // sv_min / sv_max below this -> singular
constexpr double kDegenerateTol = 1e-12; // residual var below this x response var -> degenerate

// OLS via thin Householder QR; the small triangular factor is passed
// through an SVD for rank detection and inversion.
RegressionFit ols_coefficient(const Eigen::MatrixXd& design,
                              const Eigen::VectorXd& response,
                              Eigen::Index target_col, FitTarget target) {
    const Eigen::Index n = design.rows();
    const Eigen::Index p = design.cols();

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
    Eigen::MatrixXd r_factor = qr.matrixQR()
                                   .topRows(p)
                                   .template triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        r_factor, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(p - 1) < kRankTol * sv(0)) {
        throw singular_design_error(
            "design matrix is rank deficient (singular value ratio below 1e-10)");
    }

    Eigen::VectorXd qty =
        (qr.householderQ().transpose() * response).head(p);
    Eigen::VectorXd coef =
        svd.matrixV() *
        (svd.matrixU().transpose() * qty).cwiseQuotient(sv);

    double sse = (response - design * coef).squaredNorm();
    double response_mean = response.mean();
    double response_ss =
        (response.array() - response_mean).matrix().squaredNorm();
    auto df = n - p;
    double resid_var = sse / static_cast<double>(df);
    double response_var =
        n > 1 ? response_ss / static_cast<double>(n - 1) : 0.0;
    if (resid_var <= kDegenerateTol * response_var || resid_var <= 0.0) {
        throw degenerate_fit_error(
            "residual variance is numerically zero; t-statistic undefined");
    }

    // (X'X)^{-1}_jj through the SVD of R: V diag(1/sv^2) V'.
    Eigen::VectorXd v_row = svd.matrixV().row(target_col);
    double xtx_inv_jj = (v_row.array().square() / sv.array().square()).sum();

    RegressionFit fit;
    fit.estimate = coef(target_col);
    fit.std_error = std::sqrt(resid_var * xtx_inv_jj);
    fit.t_stat = fit.estimate / fit.std_error;
    fit.df_residual = static_cast<std::size_t>(df);
    fit.target = target;
    return fit;
}

} // namespace

RegressionFit fit_alpha(const Dataset& ds) {
    ds.validate();
    const auto n = static_cast<Eigen::Index>(ds.n());
    const auto q = static_cast<Eigen::Index>(ds.q());
    if (n < q + 3) {
        throw insufficient_data_error(
            "fit_alpha: need n >= q + 3 rows, got n = " + std::to_string(n) +
            " with q = " + std::to_string(q));
    }
    Eigen::MatrixXd design(n, q + 2);
    design.col(0).setOnes();
    design.col(1) = ds.s;
    if (q > 0) {
        design.rightCols(q) = ds.x;
    }
    return ols_coefficient(design, ds.g, 1, FitTarget::alpha);
}

RegressionFit fit_beta(const Dataset& ds) {
    ds.validate();
    const auto n = static_cast<Eigen::Index>(ds.n());
    const auto q = static_cast<Eigen::Index>(ds.q());
    if (n < q + 4) {
        throw insufficient_data_error(
            "fit_beta: need n >= q + 4 rows, got n = " + std::to_string(n) +
            " with q = " + std::to_string(q));
    }
    Eigen::MatrixXd design(n, q + 3);
    design.col(0).setOnes();
    design.col(1) = ds.g;
    design.col(2) = ds.s;
    if (q > 0) {
        design.rightCols(q) = ds.x;
    }
    return ols_coefficient(design, ds.y, 1, FitTarget::beta);
}

} // namespace csmt
