#include "holefield/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "holefield/errors.hpp"

namespace holefield {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) {
        std::ostringstream msg;
        msg << "invalid network parameter '" << field << "': " << what;
        throw ConfigError(msg.str());
    }
}

}  // namespace

void validate(const NetworkParams& p) {
    require(std::isfinite(p.lambda1) && p.lambda1 >= 0.0, "lambda1", "must be finite and >= 0");
    require(std::isfinite(p.lambda2) && p.lambda2 > 0.0, "lambda2", "must be finite and > 0");
    require(std::isfinite(p.D) && p.D >= 0.0, "D", "must be finite and >= 0");
    require(std::isfinite(p.alpha) && p.alpha > 2.0, "alpha", "must be finite and > 2");
    require(std::isfinite(p.P) && p.P > 0.0, "P", "must be finite and > 0");
    require(std::isfinite(p.r0) && p.r0 > 0.0, "r0", "must be finite and > 0");
    require(std::isfinite(p.gamma) && p.gamma > 0.0, "gamma", "must be finite and > 0");
}

std::vector<std::string> warnings(const NetworkParams& p) {
    std::vector<std::string> out;
    if (!(p.lambda2 > p.lambda1)) {
        out.emplace_back("lambda2 should exceed lambda1 (baseline denser than hole centers)");
    }
    return out;
}

std::string_view scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::LdSh: return "LD-SH";
        case Scenario::HdSh: return "HD-SH";
        case Scenario::LdLh: return "LD-LH";
        case Scenario::HdLh: return "HD-LH";
    }
    return "?";
}

ScenarioPreset preset(Scenario scenario) {
    NetworkParams p;  // lambda2=1, alpha=4, P=1, r0=0.1, gamma=10 dB
    switch (scenario) {
        case Scenario::LdSh: p.lambda1 = 0.05; p.D = 0.6; break;
        case Scenario::HdSh: p.lambda1 = 0.2;  p.D = 0.6; break;
        case Scenario::LdLh: p.lambda1 = 0.05; p.D = 1.5; break;
        case Scenario::HdLh: p.lambda1 = 0.2;  p.D = 1.5; break;
    }
    return {scenario, std::string(scenario_name(scenario)), p};
}

ScenarioPreset preset(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return c == '_' ? '-' : static_cast<char>(std::toupper(c));
    });
    for (Scenario sc : kAllScenarios) {
        if (scenario_name(sc) == key) return preset(sc);
    }
    throw ConfigError("unknown scenario preset '" + std::string(name) +
                      "' (expected LD-SH, HD-SH, LD-LH or HD-LH)");
}

LaplaceArgument coverage_argument(const NetworkParams& p) {
    return {p.gamma * std::pow(p.r0, p.alpha) / p.P, true};
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - (kPi * x) * (kPi * x) / 6.0;
    return std::sin(kPi * x) / (kPi * x);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace holefield
