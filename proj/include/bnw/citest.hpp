#pragma once

#include <string>
#include <vector>

#include "bnw/dataset.hpp"

namespace bnw {

enum class CiType { g2, x2 };

CiType parse_ci(const std::string& name);
std::string ci_name(CiType t);

struct CiResult {
    double statistic = 0.0;
    int dof = 1;
    double p_value = 1.0;
    // x or y never varies within any stratum: test carries no information.
    bool degenerate = false;
};

// Conditional independence of x and y given the variables in z, via the
// likelihood-ratio statistic (g2) or Pearson chi-square (x2), both summed
// over the configurations of z.
CiResult ci_test(const Dataset& data, int x, int y, const std::vector<int>& z, CiType t);
CiResult ci_test(const Dataset& data, const std::string& x, const std::string& y,
                 const std::vector<std::string>& z, CiType t);

// Regularized incomplete gamma functions: P(a,x) lower, Q(a,x) upper,
// P + Q = 1. Relative error around 1e-12.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with k dof.
double chi2_sf(double x, double k);

}  // namespace bnw
