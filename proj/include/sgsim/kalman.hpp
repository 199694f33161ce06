#pragma once

#include <Eigen/Dense>
#include <utility>

namespace sgsim {

// Discrete Kalman filter. The plant-monitoring instance uses a 2-state
// random walk x = [feed flow, water level] with identity transition and
// identity measurement; the implementation is dimension-generic so tests can
// drive other shapes.
struct KalmanFilter {
    Eigen::VectorXd x;   // state estimate
    Eigen::MatrixXd P;   // estimate covariance
    Eigen::MatrixXd Phi; // state transition
    Eigen::MatrixXd Q;   // process noise covariance
    Eigen::MatrixXd M;   // measurement matrix
    Eigen::MatrixXd R;   // measurement noise covariance
};

// Random-walk filter over [Ws, z0] with diagonal Q/R.
KalmanFilter make_flow_level_filter(double ws0, double z0, double q_ws, double q_z,
                                    double r_ws, double r_z, double p0_scale = 1.0);

// One predict/update cycle. Returns the updated filter and the pre-update
// innovation y - M*x_prior. Covariance update uses the Joseph form and is
// re-symmetrized so P stays numerically PSD. Throws std::runtime_error when
// the innovation covariance is singular to working precision.
std::pair<KalmanFilter, Eigen::VectorXd> kf_step(const KalmanFilter& f,
                                                 const Eigen::VectorXd& y);

} // namespace sgsim
