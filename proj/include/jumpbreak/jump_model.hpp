// One-sided jump measures given through their tail integral U(z) = nu([z, inf)).
// Two flavors: the closed-form family U_beta(z) = sqrt(beta/(pi z)), and a
// tabulated tail interpolated monotonically in 1/sqrt(z) (exact on the beta
// family, monotone for any valid table).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jumpbreak {

class JumpModel {
  public:
    static JumpModel beta_family(double beta);

    // Table of (z, U) pairs with strictly increasing z > 0 and strictly
    // decreasing U > 0. Queries outside [z_front, z_back] throw
    // std::out_of_range: the table says nothing about the tail beyond its
    // ends, and extrapolating toward 0 would invent infinite mass.
    static JumpModel tabulated(std::vector<double> z, std::vector<double> u);

    // CSV with a one-line header and rows "z,U".
    static JumpModel from_csv(std::istream& in);
    static JumpModel from_csv_file(const std::string& path);
    void to_csv(std::ostream& out) const;

    // U(z); z must be positive.
    double tail(double z) const;

    // Size of a jump at conditional tail level u given it is at least eps:
    // the z >= eps solving U(z)/U(eps) = u, for u in (0,1].
    double conditional_quantile(double eps, double u) const;

    // Mean of the omitted small jumps, integral of u nu(du) over (0, eps].
    // Closed form sqrt(beta eps / pi) on the beta family; a table does not
    // determine it, so tabulated models throw std::domain_error.
    double small_jump_mean(double eps) const;

    bool is_beta_family() const { return beta_ > 0.0; }
    double beta() const;

  private:
    JumpModel() = default;

    double beta_ = 0.0;              // > 0 iff beta family
    std::vector<double> tab_z_;      // ascending
    std::vector<double> tab_u_;      // descending
    std::vector<double> tab_w_;      // 1/sqrt(z), descending
};

// Limiting mean of the rescaled two-sample tail comparison under a single
// break at theta0: a tent in theta peaking at theta0 with height
// theta0 (1 - theta0) {nu1(z) - nu2(z)}.
double limit_drift(const JumpModel& nu1, const JumpModel& nu2, double theta0,
                   double theta, double z);

}  // namespace jumpbreak
