#include "sgsim/kalman.hpp"

#include <stdexcept>

namespace sgsim {

KalmanFilter make_flow_level_filter(double ws0, double z0, double q_ws, double q_z,
                                    double r_ws, double r_z, double p0_scale) {
    if (q_ws < 0.0 || q_z < 0.0 || r_ws <= 0.0 || r_z <= 0.0)
        throw std::invalid_argument("make_flow_level_filter: Q >= 0 and R > 0 required");
    KalmanFilter f;
    f.x = Eigen::Vector2d(ws0, z0);
    f.P = Eigen::Vector2d(r_ws, r_z).asDiagonal();
    f.P *= p0_scale;
    f.Phi = Eigen::Matrix2d::Identity();
    f.Q = Eigen::Vector2d(q_ws, q_z).asDiagonal();
    f.M = Eigen::Matrix2d::Identity();
    f.R = Eigen::Vector2d(r_ws, r_z).asDiagonal();
    return f;
}

std::pair<KalmanFilter, Eigen::VectorXd> kf_step(const KalmanFilter& f,
                                                 const Eigen::VectorXd& y) {
    const auto n = f.x.size();
    if (f.P.rows() != n || f.P.cols() != n || f.Phi.rows() != n || f.Q.rows() != n)
        throw std::invalid_argument("kf_step: inconsistent state dimensions");
    if (y.size() != f.M.rows())
        throw std::invalid_argument("kf_step: measurement dimension mismatch");

    KalmanFilter g = f;

    // predict
    const Eigen::VectorXd x_prior = f.Phi * f.x;
    Eigen::MatrixXd p_prior = f.Phi * f.P * f.Phi.transpose() + f.Q;
    p_prior = 0.5 * (p_prior + p_prior.transpose().eval());

    // update
    const Eigen::VectorXd innovation = y - f.M * x_prior;
    const Eigen::MatrixXd s = f.M * p_prior * f.M.transpose() + f.R;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
    if (!lu.isInvertible())
        throw std::runtime_error("kf_step: singular innovation covariance");
    const Eigen::MatrixXd k = p_prior * f.M.transpose() * lu.inverse();

    g.x = x_prior + k * innovation;
    const Eigen::MatrixXd ikm =
        Eigen::MatrixXd::Identity(n, n) - k * f.M;
    // Joseph form keeps the update PSD under roundoff
    Eigen::MatrixXd p = ikm * p_prior * ikm.transpose() + k * f.R * k.transpose();
    g.P = 0.5 * (p + p.transpose().eval());

    return {std::move(g), innovation};
}

} // namespace sgsim
