#include "rc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace rc {

namespace {

double number(const YAML::Node& n, const std::string& what) {
    if (!n || !n.IsScalar()) throw InstanceError("missing or non-scalar '" + what + "'");
    const std::string s = n.Scalar();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InstanceError("'" + what + "' is not a number: " + s);
    }
    return v;
}

std::vector<double> numbers(const YAML::Node& n, const std::string& what) {
    if (!n || !n.IsSequence()) throw InstanceError("'" + what + "' must be a list");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(number(n[i], what));
    return out;
}

Action parse_action(const YAML::Node& n, const OutputGrid& grid, std::size_t index) {
    const std::string where = "known[" + std::to_string(index) + "]";
    if (!n.IsMap()) throw InstanceError(where + " must be a map");
    const double cost = number(n["cost"], where + ".cost");
    if (n["weights"] && n["mean"]) throw InstanceError(where + " gives both weights and mean");
    if (n["weights"]) return Action(Distribution(grid, numbers(n["weights"], where + ".weights")), cost);
    if (n["mean"]) return action_with_mean(grid, number(n["mean"], where + ".mean"), cost);
    throw InstanceError(where + " needs weights or mean");
}

YAML::Node flow_list(std::span<const double> xs) {
    YAML::Node n(YAML::NodeType::Sequence);
    n.SetStyle(YAML::EmitterStyle::Flow);
    for (double x : xs) n.push_back(format_number(x));
    return n;
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

Instance parse_instance(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw InstanceError(std::string("malformed instance: ") + e.what());
    }
    if (!root.IsMap()) throw InstanceError("instance must be a map");
    try {
        OutputGrid grid(numbers(root["grid"], "grid"));
        const YAML::Node k = root["known"];
        if (!k || !k.IsSequence() || k.size() == 0) throw InstanceError("'known' must be a nonempty list");
        std::vector<Action> acts;
        for (std::size_t i = 0; i < k.size(); ++i) acts.push_back(parse_action(k[i], grid, i));
        Technology known(std::move(acts));
        const double beta = number(root["beta"], "beta");
        const Variant variant = root["variant"] ? parse_variant(root["variant"].as<std::string>())
                                                : Variant::Baseline;
        SolverSettings solver;
        if (const YAML::Node s = root["solver"]) {
            if (s["resolution"]) solver.resolution = s["resolution"].as<int>();
            if (s["x_grid"]) solver.x_grid = s["x_grid"].as<int>();
        }
        Instance inst{grid, known, beta, variant, solver};
        (void)inst.config();  // re-checks beta and the productive known action
        return inst;
    } catch (const InstanceError&) {
        throw;
    } catch (const std::exception& e) {
        throw InstanceError(std::string("invalid instance: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError("cannot read instance file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string emit_instance(const Instance& inst) {
    YAML::Node root;
    root["grid"] = flow_list(inst.grid.levels());
    root["beta"] = format_number(inst.beta);
    root["variant"] = to_string(inst.variant);
    for (const auto& a : inst.known) {
        YAML::Node n;
        n["weights"] = flow_list(a.dist().weights());
        n["cost"] = format_number(a.cost());
        root["known"].push_back(n);
    }
    root["solver"]["resolution"] = inst.solver.resolution;
    root["solver"]["x_grid"] = inst.solver.x_grid;
    YAML::Emitter out;
    out << root;
    return std::string(out.c_str()) + "\n";
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
        os << '\n';
    }
}

}  // namespace rc
