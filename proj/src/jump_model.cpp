#include "jumpbreak/jump_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace jumpbreak {

namespace {
constexpr double kPi = std::numbers::pi;
}

JumpModel JumpModel::beta_family(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    JumpModel m;
    m.beta_ = beta;
    return m;
}

JumpModel JumpModel::tabulated(std::vector<double> z, std::vector<double> u) {
    if (z.size() != u.size()) throw std::invalid_argument("z/U length mismatch");
    if (z.size() < 2) throw std::invalid_argument("need at least two tabulated points");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0.0) || !std::isfinite(z[i])) throw std::invalid_argument("tabulated z must be positive finite");
        if (!(u[i] > 0.0) || !std::isfinite(u[i])) throw std::invalid_argument("tabulated U must be positive finite");
        if (i > 0 && !(z[i] > z[i - 1])) throw std::invalid_argument("tabulated z must be strictly increasing");
        if (i > 0 && !(u[i] < u[i - 1])) throw std::invalid_argument("tabulated U must be strictly decreasing");
    }
    JumpModel m;
    m.tab_z_ = std::move(z);
    m.tab_u_ = std::move(u);
    m.tab_w_.resize(m.tab_z_.size());
    for (std::size_t i = 0; i < m.tab_z_.size(); ++i) m.tab_w_[i] = 1.0 / std::sqrt(m.tab_z_[i]);
    return m;
}

JumpModel JumpModel::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty tail table");
    std::vector<double> z, u;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
            throw std::invalid_argument("tail table row " + std::to_string(row) + ": expected two columns");
        }
        try {
            std::size_t pos = 0;
            double zv = std::stod(a, &pos);
            double uv = std::stod(b);
            z.push_back(zv);
            u.push_back(uv);
        } catch (const std::exception&) {
            throw std::invalid_argument("tail table row " + std::to_string(row) + ": non-numeric value");
        }
    }
    return tabulated(std::move(z), std::move(u));
}

JumpModel JumpModel::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tail table: " + path);
    return from_csv(in);
}

void JumpModel::to_csv(std::ostream& out) const {
    if (is_beta_family()) throw std::domain_error("only tabulated models serialize to CSV");
    out << "z,U\n";
    out.precision(17);
    for (std::size_t i = 0; i < tab_z_.size(); ++i) out << tab_z_[i] << ',' << tab_u_[i] << '\n';
}

double JumpModel::beta() const {
    if (!is_beta_family()) throw std::domain_error("not a beta-family model");
    return beta_;
}

double JumpModel::tail(double z) const {
    if (!(z > 0.0)) throw std::domain_error("tail integral needs z > 0");
    if (is_beta_family()) return std::sqrt(beta_ / (kPi * z));
    if (z < tab_z_.front() || z > tab_z_.back()) {
        throw std::out_of_range("z outside tabulated range");
    }
    // Interpolate linearly in w = 1/sqrt(z); exact for the beta family and
    // monotone for any admissible table.
    auto it = std::lower_bound(tab_z_.begin(), tab_z_.end(), z);
    std::size_t i = static_cast<std::size_t>(it - tab_z_.begin());
    if (i < tab_z_.size() && tab_z_[i] == z) return tab_u_[i];
    const double w = 1.0 / std::sqrt(z);
    const double t = (w - tab_w_[i - 1]) / (tab_w_[i] - tab_w_[i - 1]);
    return tab_u_[i - 1] + t * (tab_u_[i] - tab_u_[i - 1]);
}

double JumpModel::conditional_quantile(double eps, double u) const {
    if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
    if (!(u > 0.0) || u > 1.0) throw std::domain_error("u must lie in (0,1]");
    if (is_beta_family()) return eps / (u * u);
    const double target = u * tail(eps);
    if (target < tab_u_.back()) {
        throw std::out_of_range("conditional quantile beyond tabulated range");
    }
    // tab_u_ is strictly decreasing; locate the segment containing target.
    auto it = std::lower_bound(tab_u_.begin(), tab_u_.end(), target, std::greater<double>());
    std::size_t i = static_cast<std::size_t>(it - tab_u_.begin());
    if (i < tab_u_.size() && tab_u_[i] == target) return std::max(tab_z_[i], eps);
    const double t = (target - tab_u_[i - 1]) / (tab_u_[i] - tab_u_[i - 1]);
    const double w = tab_w_[i - 1] + t * (tab_w_[i] - tab_w_[i - 1]);
    return std::max(1.0 / (w * w), eps);
}

double JumpModel::small_jump_mean(double eps) const {
    if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
    if (!is_beta_family()) {
        throw std::domain_error("small-jump mean undefined for tabulated tails");
    }
    return std::sqrt(beta_ * eps / kPi);
}

double limit_drift(const JumpModel& nu1, const JumpModel& nu2, double theta0,
                   double theta, double z) {
    if (!(theta0 > 0.0) || !(theta0 < 1.0)) throw std::domain_error("theta0 must lie in (0,1)");
    if (theta < 0.0 || theta > 1.0) throw std::domain_error("theta must lie in [0,1]");
    const double gap = nu1.tail(z) - nu2.tail(z);
    if (theta <= theta0) return theta * (1.0 - theta0) * gap;
    return theta0 * (1.0 - theta) * gap;
}

}  // namespace jumpbreak
