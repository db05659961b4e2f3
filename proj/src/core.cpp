#include "rc/core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace rc {

OutputGrid::OutputGrid(std::vector<double> levels) {
    if (levels.size() < 2) {
        throw std::invalid_argument("output grid needs at least two levels");
    }
    if (levels.front() != 0.0) {
        throw std::invalid_argument("lowest output level must be 0");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i]) || levels[i] < 0.0) {
            throw std::invalid_argument("output levels must be finite and non-negative");
        }
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw std::invalid_argument("output levels must be strictly increasing");
        }
    }
    levels_ = std::make_shared<const std::vector<double>>(std::move(levels));
}

bool OutputGrid::operator==(const OutputGrid& other) const {
    return levels_ == other.levels_ || *levels_ == *other.levels_;
}

Distribution::Distribution(OutputGrid grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
    if (weights_.size() != grid_.size()) {
        throw AlignmentError("distribution has " + std::to_string(weights_.size()) +
                             " weights for a grid of " + std::to_string(grid_.size()) + " levels");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("distribution weights must be non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kValidationTol) {
        throw std::invalid_argument("distribution weights must sum to 1");
    }
}

Distribution Distribution::point(const OutputGrid& grid, std::size_t index) {
    if (index >= grid.size()) throw AlignmentError("point mass outside the grid");
    std::vector<double> w(grid.size(), 0.0);
    w[index] = 1.0;
    return Distribution(grid, std::move(w));
}

double Distribution::mean() const { return expectation(*this, grid_.levels()); }

bool Distribution::operator==(const Distribution& other) const {
    return grid_ == other.grid_ && weights_ == other.weights_;
}

Distribution mix_with_zero(const Distribution& base, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("mixture weight must lie in [0,1]");
    }
    std::vector<double> w(base.weights().begin(), base.weights().end());
    for (double& x : w) x *= lambda;
    w[0] += 1.0 - lambda;
    return Distribution(base.grid(), std::move(w));
}

Action::Action(Distribution dist, double cost) : dist_(std::move(dist)), cost_(cost) {
    if (!(cost >= 0.0) || !std::isfinite(cost)) {
        throw std::invalid_argument("action cost must be finite and non-negative");
    }
}

Action Action::with_tilt(Tilt t) const {
    if (t.weights.size() != dist_.grid().size()) {
        throw AlignmentError("tilt does not match the grid");
    }
    Action out = *this;
    out.tilt_ = std::move(t);
    return out;
}

Action Action::without_tilt() const {
    Action out = *this;
    out.tilt_.reset();
    return out;
}

bool Action::same_as(const Action& other) const {
    return cost_ == other.cost_ && dist_ == other.dist_;
}

Action action_with_mean(const OutputGrid& grid, double mean, double cost) {
    const double top = grid.max();
    if (!(mean >= 0.0 && mean <= top)) {
        throw std::invalid_argument("mean outside [0, grid max]");
    }
    std::vector<double> w(grid.size(), 0.0);
    w.back() = mean / top;
    w.front() = 1.0 - w.back();
    return Action(Distribution(grid, std::move(w)), cost);
}

Action null_action(const OutputGrid& grid) { return Action(Distribution::point(grid, 0), 0.0); }

Contract Contract::linear(double share) {
    if (!(share >= 0.0 && share <= 1.0)) {
        throw InvalidContract("linear share must lie in [0,1]");
    }
    return Contract(Linear{share});
}

Contract Contract::tabulated(std::vector<double> payments) {
    if (payments.empty()) throw InvalidContract("empty payment table");
    if (std::abs(payments.front()) > kValidationTol) {
        throw InvalidContract("payment at zero output must be 0");
    }
    payments.front() = 0.0;
    for (double p : payments) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InvalidContract("payments must be finite and non-negative");
        }
    }
    return Contract(Tabulated{std::move(payments)});
}

Contract Contract::blend(Contract base, double m) {
    if (!(m >= 0.0 && m <= 1.0)) throw InvalidContract("blend weight must lie in [0,1]");
    return Contract(Blend{std::make_shared<const Contract>(std::move(base)), m});
}

Contract::Kind Contract::kind() const {
    switch (rep_.index()) {
        case 0:
            return Kind::Linear;
        case 1:
            return Kind::Tabulated;
        default:
            return Kind::Blend;
    }
}

double Contract::share() const {
    if (const auto* l = std::get_if<Linear>(&rep_)) return l->share;
    throw std::logic_error("contract is not linear");
}

std::span<const double> Contract::table() const {
    if (const auto* t = std::get_if<Tabulated>(&rep_)) return t->payments;
    throw std::logic_error("contract is not tabulated");
}

const Contract& Contract::base() const {
    if (const auto* b = std::get_if<Blend>(&rep_)) return *b->base;
    throw std::logic_error("contract is not a blend");
}

double Contract::blend_weight() const {
    if (const auto* b = std::get_if<Blend>(&rep_)) return b->m;
    throw std::logic_error("contract is not a blend");
}

std::vector<double> Contract::payments(const OutputGrid& grid) const {
    std::vector<double> out;
    if (const auto* l = std::get_if<Linear>(&rep_)) {
        out.reserve(grid.size());
        for (double y : grid.levels()) out.push_back(l->share * y);
    } else if (const auto* t = std::get_if<Tabulated>(&rep_)) {
        if (t->payments.size() != grid.size()) {
            throw AlignmentError("payment table has " + std::to_string(t->payments.size()) +
                                 " entries for a grid of " + std::to_string(grid.size()) + " levels");
        }
        out = t->payments;
    } else {
        const auto& b = std::get<Blend>(rep_);
        out = b.base->payments(grid);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.m * (grid[i] - out[i]);
    }
    if (out.front() != 0.0) throw InvalidContract("payment at zero output must be 0");
    for (double p : out) {
        if (p < 0.0) throw InvalidContract("negative payment");
    }
    return out;
}

std::string Contract::describe() const {
    std::ostringstream os;
    os << std::setprecision(10);
    if (const auto* l = std::get_if<Linear>(&rep_)) {
        os << "linear(" << l->share << ")";
    } else if (const auto* t = std::get_if<Tabulated>(&rep_)) {
        os << "tabulated(";
        for (std::size_t i = 0; i < t->payments.size(); ++i) os << (i ? "," : "") << t->payments[i];
        os << ")";
    } else {
        const auto& b = std::get<Blend>(rep_);
        os << "blend(" << b.base->describe() << ", m=" << b.m << ")";
    }
    return os.str();
}

Technology::Technology(std::vector<Action> actions) : actions_(std::move(actions)) {
    if (actions_.empty()) throw std::domain_error("technology must be nonempty");
    for (const auto& a : actions_) {
        if (!(a.grid() == actions_.front().grid())) {
            throw AlignmentError("technology mixes output grids");
        }
    }
}

Technology Technology::with(const Action& extra) const {
    std::vector<Action> v = actions_;
    v.push_back(extra);
    return Technology(std::move(v));
}

bool Technology::contains(const Action& a) const {
    return std::any_of(actions_.begin(), actions_.end(),
                       [&](const Action& b) { return b.same_as(a); });
}

ModelConfig::ModelConfig(OutputGrid g, Technology k, double b, Tolerances t)
    : grid(std::move(g)), known(std::move(k)), beta(b), tol(t) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("discount factor must be positive and finite");
    }
    bool productive = false;
    for (const auto& a : known) {
        if (!(a.grid() == grid)) throw AlignmentError("known action on a different grid");
        if (a.mean() - a.cost() > 0.0) productive = true;
    }
    if (!productive) {
        throw std::invalid_argument("some known action must have expected output above its cost");
    }
}

double expectation(const Distribution& dist, std::span<const double> values) {
    if (values.size() != dist.weights().size()) {
        throw AlignmentError("expectation over " + std::to_string(values.size()) +
                             " values with " + std::to_string(dist.weights().size()) + " weights");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += dist[i] * values[i];
    return s;
}

std::vector<double> evaluate_contract(const Contract& w, const OutputGrid& grid) {
    return w.payments(grid);
}

double agent_utility(const Contract& w, const Action& a) {
    return expectation(a.dist(), w.payments(a.grid())) - a.cost();
}

double principal_payoff(const Contract& w, const Action& a) {
    const auto pay = w.payments(a.grid());
    const auto y = a.grid().levels();
    double s = 0.0;
    for (std::size_t i = 0; i < pay.size(); ++i) s += a.dist()[i] * (y[i] - pay[i]);
    return s;
}

}  // namespace rc
