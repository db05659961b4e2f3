#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rc {

inline constexpr double kValidationTol = 1e-12;
inline constexpr double kTieTol = 1e-9;
inline constexpr double kOptimizerTol = 1e-6;

struct Tolerances {
    double validation = kValidationTol;
    double closed_form = kTieTol;
    double optimizer = kOptimizerTol;
};

class AlignmentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvalidContract : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Finite output grid. The lowest level is always zero.
class OutputGrid {
  public:
    explicit OutputGrid(std::vector<double> levels);

    std::size_t size() const { return levels_->size(); }
    double operator[](std::size_t i) const { return (*levels_)[i]; }
    double max() const { return levels_->back(); }
    std::span<const double> levels() const { return *levels_; }

    bool operator==(const OutputGrid& other) const;

  private:
    std::shared_ptr<const std::vector<double>> levels_;
};

class Distribution {
  public:
    Distribution(OutputGrid grid, std::vector<double> weights);

    /// Point mass at output level `index`.
    static Distribution point(const OutputGrid& grid, std::size_t index);

    const OutputGrid& grid() const { return grid_; }
    std::span<const double> weights() const { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }
    double mean() const;

    bool operator==(const Distribution& other) const;

  private:
    OutputGrid grid_;
    std::vector<double> weights_;
};

/// lambda * base + (1 - lambda) * (point mass at zero output).
Distribution mix_with_zero(const Distribution& base, double lambda);

/// First-order direction along which an action is approached. An action
/// carrying a tilt stands for the limit of (F + eps*weights, c + eps*cost)
/// as eps goes to zero: payoffs are those of the limit, while agents who are
/// exactly indifferent rank it by the derivative.
struct Tilt {
    std::vector<double> weights;  // sums to zero
    double cost = 0.0;
};

class Action {
  public:
    Action(Distribution dist, double cost);

    const Distribution& dist() const { return dist_; }
    double cost() const { return cost_; }
    const OutputGrid& grid() const { return dist_.grid(); }
    double mean() const { return dist_.mean(); }

    const std::optional<Tilt>& tilt() const { return tilt_; }
    Action with_tilt(Tilt t) const;
    Action without_tilt() const;

    /// Same distribution and cost; tilts are ignored.
    bool same_as(const Action& other) const;

  private:
    Distribution dist_;
    double cost_;
    std::optional<Tilt> tilt_;
};

/// Action on {0, grid.max()} with the requested mean.
Action action_with_mean(const OutputGrid& grid, double mean, double cost);

/// The null action: output zero at no cost.
Action null_action(const OutputGrid& grid);

class Contract {
  public:
    enum class Kind { Linear, Tabulated, Blend };

    static Contract linear(double share);
    static Contract tabulated(std::vector<double> payments);
    /// w(y) = base(y) + m * (y - base(y)).
    static Contract blend(Contract base, double m);

    Kind kind() const;
    double share() const;                       // Linear only
    std::span<const double> table() const;      // Tabulated only
    const Contract& base() const;               // Blend only
    double blend_weight() const;                // Blend only

    /// Payment at every grid level; throws InvalidContract on w(0) != 0
    /// or a negative payment.
    std::vector<double> payments(const OutputGrid& grid) const;

    std::string describe() const;

  private:
    struct Linear {
        double share;
    };
    struct Tabulated {
        std::vector<double> payments;
    };
    struct Blend {
        std::shared_ptr<const Contract> base;
        double m;
    };
    explicit Contract(std::variant<Linear, Tabulated, Blend> v) : rep_(std::move(v)) {}
    std::variant<Linear, Tabulated, Blend> rep_;
};

class Technology {
  public:
    explicit Technology(std::vector<Action> actions);

    std::size_t size() const { return actions_.size(); }
    const Action& operator[](std::size_t i) const { return actions_[i]; }
    std::span<const Action> actions() const { return actions_; }
    auto begin() const { return actions_.begin(); }
    auto end() const { return actions_.end(); }

    Technology with(const Action& extra) const;
    bool contains(const Action& a) const;

  private:
    std::vector<Action> actions_;
};

struct ModelConfig {
    ModelConfig(OutputGrid grid, Technology known, double beta, Tolerances tol = {});

    OutputGrid grid;
    Technology known;
    double beta;
    Tolerances tol;
};

double expectation(const Distribution& dist, std::span<const double> values);
std::vector<double> evaluate_contract(const Contract& w, const OutputGrid& grid);
double agent_utility(const Contract& w, const Action& a);
double principal_payoff(const Contract& w, const Action& a);

}  // namespace rc
