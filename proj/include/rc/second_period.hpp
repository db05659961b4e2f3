#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rc/core.hpp"

namespace rc {

enum class Variant { Baseline, General, Advances };

enum class SecondCase {
    RepeatW1,
    BlendCompensate,
    LinearKnown,
    LinearObserved,
    ModifiedW1,
    LinearStatic,
};

std::string to_string(Variant v);
std::string to_string(SecondCase c);
Variant parse_variant(const std::string& name);

/// Observed action that a rational first agent could not have picked.
class IncompatibleObservation : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// sqrt(x), with nullopt standing for minus infinity when x < 0.
std::optional<double> signed_root(double x);

struct PhiResult {
    double phi;
    SecondCase which;
};

struct Attained {
    double value;  // may be the minus-infinity sentinel only if every term is
    Action action;
    bool is_observed;  // attained by a1 rather than a known action
};

struct SecondPeriodReport {
    Variant variant;
    double phi;
    double v2_star;
    SecondCase which;
    Action attaining_action;
    Contract contract;
    Technology witness;
};

PhiResult phi_baseline(const Contract& w1, const Action& a1, const Action& a0);
SecondPeriodReport optimal_second_contract_baseline(const Contract& w1, const Action& a1,
                                                    const Action& a0);

Attained phi1_general(const Contract& w1, const Action& a1, const Technology& known);
Attained phi2_general(const Action& a1, const Technology& known);
SecondPeriodReport optimal_second_contract_general(const Contract& w1, const Action& a1,
                                                   const Technology& known);

SecondPeriodReport v2_star_advances(const Action& a1, const Technology& known);

/// V2* only, skipping contract and witness construction.
double optimal_v2(Variant variant, const Contract& w1, const Action& a1, const Technology& known);

/// Full report for the variant (baseline needs a singleton known set).
SecondPeriodReport second_period_report(Variant variant, const Contract& w1, const Action& a1,
                                        const Technology& known);

Technology worst_case_witness(const Contract& w1, const Action& a1, const Technology& known,
                              SecondCase which);

/// The untilted action followed by every feasible tilt of it. The tilts
/// either move weight between the zero level and the action's own
/// distribution, or lower the cost.
std::vector<Action> tilt_candidates(const Action& deviation, const Contract& w1,
                                    const Contract& w2);

}  // namespace rc
