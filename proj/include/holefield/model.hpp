#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace holefield {

inline constexpr double kPi = 3.14159265358979323846;

/// Parameters of a Poisson hole network: hole centers (density lambda1) carve
/// disks of radius D out of a baseline field of density lambda2. The receiver
/// sits at the origin and is served from distance r0; gamma is the linear SIR
/// threshold.
struct NetworkParams {
    double lambda1 = 0.05;
    double lambda2 = 1.0;
    double D = 0.6;
    double alpha = 4.0;
    double P = 1.0;
    double r0 = 0.1;
    double gamma = 10.0;

    bool operator==(const NetworkParams&) const = default;
};

/// Throws ConfigError when a hard invariant is broken (alpha <= 2, negative or
/// non-finite values, lambda2/P/r0/gamma not strictly positive).
void validate(const NetworkParams& params);

/// Soft checks. Currently only lambda2 > lambda1; empty when clean.
std::vector<std::string> warnings(const NetworkParams& params);

enum class Scenario { LdSh, HdSh, LdLh, HdLh };

struct ScenarioPreset {
    Scenario scenario;
    std::string name;
    NetworkParams params;
};

inline constexpr std::array<Scenario, 4> kAllScenarios{Scenario::LdSh, Scenario::HdSh,
                                                       Scenario::LdLh, Scenario::HdLh};

/// "LD-SH", "HD-SH", "LD-LH", "HD-LH".
std::string_view scenario_name(Scenario scenario);

ScenarioPreset preset(Scenario scenario);

/// Looks up a preset by tag (case-insensitive, '_' accepted for '-').
/// Unknown names raise ConfigError.
ScenarioPreset preset(std::string_view name);

struct LaplaceArgument {
    double s = 0.0;
    bool derived_from_coverage = false;
};

/// s = gamma * r0^alpha / P, the point where the Laplace transform of the
/// interference equals the SIR coverage probability under Rayleigh fading.
LaplaceArgument coverage_argument(const NetworkParams& params);

/// Normalized sinc, sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace holefield
