#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ndtaxis/model.hpp"

namespace ndtaxis {

struct WeightedExponents {
    double q = 4.0;
    double alpha = 3.0;
};

/// Which functionals full_record computes beyond the fixed set.
struct DiagnosticsSpec {
    std::vector<double> p_list{2.0, 4.0};
    std::vector<WeightedExponents> q_alpha{{4.0, 3.0}, {6.0, 5.0}};
};

/// One time-stamped row of every tracked functional.
struct FunctionalRecord {
    double t = 0.0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    double sup_v = 0.0;
    double inf_v = 0.0;
    double sup_u = 0.0;
    double cumulative_uv = 0.0;
    double diss_u = 0.0;            // int (v/u)|grad u|^2
    double diss_v = 0.0;            // int (u/v)|grad v|^2
    double grad_v_sq = 0.0;         // int |grad v|^2
    double grad_v_sq_over_v = 0.0;  // int |grad v|^2 / v
    std::vector<std::pair<WeightedExponents, double>> weighted_q;
    double weighted_L2 = 0.0;       // int u^2 v
    std::vector<std::pair<double, double>> lp_u;  // (p, ||u||_p); last entry is p = inf
    double entropy = 0.0;
    double energy_G = 0.0;
    bool energy_G_defined = true;   // false for l = 1, where only F4 is reported
};

struct Dissipations {
    double diss_u = 0.0;
    double diss_v = 0.0;
};

/// Throws PositivityViolation on any nonpositive cell of u or v.
void require_positive(const State& state);

Dissipations dissipations(const State& state);

/// int |grad v|^q / v^alpha, requires q > 2 and 0 < alpha < q.
double weighted_gradient(const State& state, double q, double alpha);
double weighted_gradient(const ScalarField& v, double q, double alpha);

double energy_G(const State& state, const ModelParams& params);

/// int u^{2-l} for l != 2, int ln u for l = 2.
double entropy(const State& state, const ModelParams& params);

FunctionalRecord full_record(const State& state, const ModelParams& params, const DiagnosticsSpec& spec);

/// CSV column names in their fixed order for the given spec.
std::vector<std::string> record_columns(const DiagnosticsSpec& spec);
std::string csv_header(const DiagnosticsSpec& spec);
std::string csv_row(const FunctionalRecord& record);

/// Looks up lp_u for a given p (infinity allowed); throws if absent.
double lp_of(const FunctionalRecord& record, double p);
/// Looks up a weighted_q entry; throws if absent.
double weighted_of(const FunctionalRecord& record, double q, double alpha);

}  // namespace ndtaxis
