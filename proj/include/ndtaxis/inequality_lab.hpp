#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ndtaxis/grid.hpp"

namespace ndtaxis {

/// Both sides of one inequality evaluated on a field pair.
struct IneqReport {
    std::string inequality;  // "sobolev_product" or "gradient_coupling"
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhs_terms;
    double ratio = 0.0;           // lhs / (sum of right-hand terms with c = 1)
    double required_c = 0.0;      // smallest c making the inequality hold for this pair
    double p = 1.0;
    double eta = 0.0;             // 0 when the inequality has no eta
    std::uint64_t field_seed = 0;

    double term(const std::string& name) const;
};

/// int phi^{p+1} psi  vs  {int (phi/psi)|grad psi|^2 + int (psi/phi)|grad phi|^2 + int phi psi} * int phi^p.
/// Terms: "bracket", "factor". ratio = lhs / (bracket * factor) = required_c.
IneqReport check_ineq_61(const ScalarField& phi, const ScalarField& psi, double p);

/// int phi^{p+1} psi |grad psi|^2  vs  eta * int phi^{p-1} psi |grad phi|^2
///   + c (|psi|_inf + |psi|_inf^3 / eta) int phi^{p+1} psi * int |grad psi|^4 / psi^3
///   + c |psi|_inf^2 (int phi)^{2p+1} int |grad psi|^4 / psi^3
///   + c |psi|_inf^2 int phi psi.
/// Terms: "eta_term", "coupling", "mass_power", "product"; the last three carry c.
IneqReport check_ineq_64(const ScalarField& phi, const ScalarField& psi, double p, double eta);

/// Ratio of a report once the c-bearing terms are multiplied by `c`.
double ratio_with_constant(const IneqReport& report, double c);

/// Smooth positive field pairs: cosine series up to `modes` per axis (zero
/// normal derivative on the boundary), mapped through exp onto [lo, hi] with
/// lo, hi drawn inside [min_value, max_value]. Member k depends only on
/// (seed, k) and the domain, never on the grid resolution.
class BandLimitedFamily {
public:
    BandLimitedFamily(std::uint64_t seed, int size, int modes = 3, double min_value = 0.1, double max_value = 10.0);

    int size() const { return size_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t member_seed(int k) const;
    std::pair<ScalarField, ScalarField> member(const Grid& grid, int k) const;

private:
    ScalarField field(const Grid& grid, std::uint64_t stream) const;

    std::uint64_t seed_;
    int size_;
    int modes_;
    double min_value_;
    double max_value_;
};

enum class Inequality { sobolev_product, gradient_coupling };

struct FitParams {
    double p = 1.0;
    double eta = 1.0;  // used by gradient_coupling only
};

using PairGenerator = std::function<std::pair<ScalarField, ScalarField>(int)>;

/// Largest required_c over family members 0..count-1. Throws on an empty family.
double fit_constant(const PairGenerator& family, int count, Inequality which, const FitParams& params,
                    std::vector<IneqReport>* reports = nullptr);

double fit_constant(const BandLimitedFamily& family, const Grid& grid, Inequality which, const FitParams& params,
                    std::vector<IneqReport>* reports = nullptr);

}  // namespace ndtaxis
