// rcontract: robust two-period contract guarantees from the command line.
//
// Exit codes: 0 ok, 1 failed check or bad input, 2 observation incompatible
// with the first-period contract, 3 instance or output I/O failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rc/adversary.hpp"
#include "rc/agent.hpp"
#include "rc/first_period.hpp"
#include "rc/io.hpp"
#include "rc/second_period.hpp"
#include "rc_bundled.hpp"
#include "verify_suites.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace rc;

constexpr int kExitCheck = 1;
constexpr int kExitIncompatible = 2;
constexpr int kExitIo = 3;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string instance = "example31";
    std::string variant;
    int resolution = 0;
    std::uint64_t seed = 7;
    std::string out;
};

Instance resolve_instance(const Common& c) {
    Instance inst = c.instance == "example31" && !std::ifstream(c.instance)
                        ? parse_instance(bundled::kExample31)
                        : load_instance(c.instance);
    if (!c.variant.empty()) inst.variant = parse_variant(c.variant);
    if (c.resolution > 0) inst.solver.resolution = c.resolution;
    return inst;
}

struct ContractSpec {
    std::optional<double> share;
    std::vector<double> payments;

    bool given() const { return share || !payments.empty(); }
    Contract build() const {
        if (share && !payments.empty()) throw std::invalid_argument("give either --share or --payments");
        if (share) return Contract::linear(*share);
        if (!payments.empty()) return Contract::tabulated(payments);
        throw std::invalid_argument("a first-period contract is required (--share or --payments)");
    }
};

struct ActionSpec {
    std::optional<double> mean;
    std::vector<double> weights;
    std::optional<double> cost;

    Action build(const OutputGrid& g) const {
        if (!cost) throw std::invalid_argument("--a1-cost is required");
        if (mean && !weights.empty()) throw std::invalid_argument("give either --a1-mean or --a1-weights");
        if (mean) return action_with_mean(g, *mean, *cost);
        if (!weights.empty()) return Action(Distribution(g, weights), *cost);
        throw std::invalid_argument("the observed action needs --a1-mean or --a1-weights");
    }
};

json action_json(const Action& a) {
    return json{{"weights", std::vector<double>(a.dist().weights().begin(), a.dist().weights().end())},
                {"mean", a.mean()},
                {"cost", a.cost()}};
}

// Share s when the contract pays s*y on every level.
std::optional<double> effective_share(const Contract& w, const OutputGrid& g) {
    const auto pay = w.payments(g);
    const double s = pay.back() / g.max();
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (std::abs(pay[i] - s * g[i]) > 1e-12 * g.max()) return std::nullopt;
    }
    return s;
}

// Human-readable number: 12 significant digits hides last-bit solver noise.
std::string show(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw IoFailure("cannot write '" + path + "'");
    return file;
}

int cmd_second_period(const Common& c, const ContractSpec& w1s, const ActionSpec& a1s, bool as_json) {
    const Instance inst = resolve_instance(c);
    const Contract w1 = w1s.build();
    const Action a1 = a1s.build(inst.grid);
    const SecondPeriodReport r = second_period_report(inst.variant, w1, a1, inst.known);
    const auto eff = effective_share(r.contract, inst.grid);

    if (as_json) {
        json witness = json::array();
        for (const auto& a : r.witness) witness.push_back(action_json(a));
        json j{{"variant", to_string(r.variant)},
               {"v2_star", r.v2_star},
               {"phi", r.phi},
               {"case", to_string(r.which)},
               {"contract", r.contract.describe()},
               {"payments", r.contract.payments(inst.grid)},
               {"attaining_action", action_json(r.attaining_action)},
               {"witness", witness}};
        if (eff) j["share"] = *eff;
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    std::cout << "variant   " << to_string(r.variant) << '\n'
              << "v2_star   " << show(r.v2_star) << '\n'
              << "case      " << to_string(r.which) << '\n'
              << "contract  " << r.contract.describe() << '\n';
    if (eff) std::cout << "share     " << show(*eff) << '\n';
    std::cout << "attained  mean " << show(r.attaining_action.mean()) << " cost "
              << show(r.attaining_action.cost()) << '\n';
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
        const Action& a = r.witness[i];
        std::cout << "witness[" << i << "] mean " << show(a.mean()) << " cost " << show(a.cost())
                  << (a.tilt() ? " (approached along a tilt)" : "") << '\n';
    }
    return 0;
}

int cmd_guarantee(const Common& c, const ContractSpec& w1s, bool oracle, bool as_json) {
    const Instance inst = resolve_instance(c);
    const SolverOptions so{inst.solver.x_grid};
    json j{{"variant", to_string(inst.variant)}, {"beta", inst.beta}};

    if (!w1s.given()) {
        const ShareOptimum o = optimal_first_share(inst.variant, inst.known, inst.beta, inst.solver.resolution, so);
        j["s1_star"] = o.s1_star;
        j["u_star"] = o.u_star;
        j["grid_maximizers"] = o.grid_maximizers;
        if (o.optimality_unproven) j["note"] = "linear-optimal (global optimality unproven)";
    } else if (w1s.share) {
        const ProgramSolution p = overall_guarantee(inst.variant, *w1s.share, inst.known, inst.beta, so);
        j["s1"] = *w1s.share;
        j["U"] = p.value;
        j["minimizer"] = {{"x", p.point.x}, {"z", p.point.z}, {"h", p.point.h}};
        if (oracle) {
            const auto e = empirical_overall(Contract::linear(*w1s.share), inst.known, inst.beta, inst.variant,
                                             DeviationFamily::observations(inst.known));
            j["oracle_U"] = e.min_interim;
        }
    } else {
        // Nonlinear contracts go through the oracle, next to their linearization.
        const Contract w1 = w1s.build();
        const auto family = DeviationFamily::observations(inst.known);
        const Action a0 = best_response(w1, inst.known).chosen;
        const Linearized lin = linearize(w1, a0);
        const auto e = empirical_overall(w1, inst.known, inst.beta, inst.variant, family);
        const auto el = empirical_overall(lin.contract, inst.known, inst.beta, inst.variant, family);
        j["contract"] = w1.describe();
        j["oracle_U"] = e.min_interim;
        j["linearized_share"] = lin.share;
        j["linearized_oracle_U"] = el.min_interim;
        if (lin.share_above_one) j["warning"] = "linearized share above one; clamped";
    }

    if (as_json) {
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& [k, v] : j.items()) {
            const std::string text = v.is_number()   ? show(v.get<double>())
                                     : v.is_string() ? v.get<std::string>()
                                                     : v.dump();
            std::cout << k << "  " << text << '\n';
        }
    }
    return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& betas) {
    const Instance inst = resolve_instance(c);
    const SolverOptions so{inst.solver.x_grid};
    std::vector<std::vector<double>> rows;
    std::vector<std::string> header;
    if (!betas.empty()) {
        header = {"beta", "s1_star", "U_star"};
        for (const auto& r : exploration_sweep(inst.known, betas, inst.solver.resolution, so)) {
            rows.push_back({r.beta, r.s1_star, r.u_star});
        }
    } else {
        header = {"s1", "U"};
        const GuaranteeCurve curve = guarantee_curve(inst.variant, inst.known, inst.beta, inst.solver.resolution, so);
        for (std::size_t i = 0; i < curve.shares.size(); ++i) rows.push_back({curve.shares[i], curve.values[i]});
    }
    std::ofstream file;
    std::ostream& os = open_out(c.out, file);
    write_csv(os, header, rows);
    if (!os) throw IoFailure("write failed");
    return 0;
}

int cmd_verify(const Common& c, const std::string& suite, int count) {
    const Instance inst = resolve_instance(c);
    const int failures = cli::run_suite(suite, inst, cli::SuiteOptions{c.seed, count}, std::cout);
    std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << '\n';
    return failures == 0 ? 0 : kExitCheck;
}

int cmd_example(const Common& c) {
    std::ofstream file;
    std::ostream& os = open_out(c.out, file);
    os << bundled::kExample31;
    return os ? 0 : kExitIo;
}

void add_common(CLI::App* sub, Common& c, bool with_out) {
    sub->add_option("--instance", c.instance, "instance file, or the bundled name example31");
    sub->add_option("--variant", c.variant, "baseline | general | advances (overrides the instance)");
    sub->add_option("--resolution", c.resolution, "share grid points for curves and optimal shares");
    sub->add_option("--seed", c.seed, "random seed");
    if (with_out) sub->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust contracts with exploration: guarantees, programs and adversary checks"};
    app.require_subcommand(1);

    Common common;
    ContractSpec w1;
    ActionSpec a1;
    bool as_json = false;
    bool oracle = false;
    std::vector<double> betas;
    std::string suite = "all";
    int count = 0;

    auto* sp = app.add_subcommand("second-period", "optimal second-period contract after an observation");
    add_common(sp, common, false);
    sp->add_option("--share", w1.share, "linear first-period share");
    sp->add_option("--payments", w1.payments, "first-period payment per output level")->delimiter(',');
    sp->add_option("--a1-mean", a1.mean, "observed action's mean (two-point on {0, max})");
    sp->add_option("--a1-weights", a1.weights, "observed action's weights per level")->delimiter(',');
    sp->add_option("--a1-cost", a1.cost, "observed action's cost");
    sp->add_flag("--json", as_json, "emit JSON");

    auto* gu = app.add_subcommand("guarantee", "overall guarantee of a first-period contract, or the optimal share");
    add_common(gu, common, false);
    gu->add_option("--share", w1.share, "linear first-period share");
    gu->add_option("--payments", w1.payments, "first-period payment per output level")->delimiter(',');
    gu->add_flag("--oracle", oracle, "cross-check a linear share with the adversary oracle");
    gu->add_flag("--json", as_json, "emit JSON");

    auto* sw = app.add_subcommand("sweep", "CSV of U over shares, or of optimal shares over discount factors");
    add_common(sw, common, true);
    sw->add_option("--betas", betas, "discount factors for an exploration sweep")->delimiter(',');

    auto* ve = app.add_subcommand("verify", "run adversary checks");
    add_common(ve, common, false);
    ve->add_option("suite", suite, "example31 | tightness | improvement | oracle | all");
    ve->add_option("--count", count, "number of random cases");

    auto* ex = app.add_subcommand("example", "print the bundled example31 instance");
    ex->add_option("--out", common.out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sp) return cmd_second_period(common, w1, a1, as_json);
        if (*gu) return cmd_guarantee(common, w1, oracle, as_json);
        if (*sw) return cmd_sweep(common, betas);
        if (*ve) return cmd_verify(common, suite, count);
        if (*ex) return cmd_example(common);
    } catch (const IncompatibleObservation& e) {
        std::cerr << "incompatible observation: " << e.what() << '\n';
        return kExitIncompatible;
    } catch (const InstanceError& e) {
        std::cerr << "instance error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoFailure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheck;
    }
    return 0;
}
