#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "zerocert/geometry.hpp"
#include "zerocert/operators.hpp"
#include "zerocert/optim.hpp"

namespace zerocert {

/// Problem definition parsed from the line-oriented config format; see
/// docs/file-formats.md for the grammar.
struct ProblemConfig {
    std::string operator_name;
    ParamMap operator_params;
    std::optional<ConvexBody> region;  // V
    std::optional<ConvexBody> body;    // X, defaults to region where needed
    int resolution = 16;
    std::uint64_t seed = 1;
    int n_max = 10;
    int budget = 1000;
    std::optional<double> l_override;
    std::map<std::string, double> tol_overrides;

    Tolerances tolerances() const;
    const ConvexBody& body_or_region() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ProblemConfig parse_config(const std::string& text);
std::string serialize_config(const ProblemConfig& cfg);

/// Catalog operator from the config; an L override marks the handle
/// user-asserted.
OperatorHandle build_operator(const ProblemConfig& cfg);

}  // namespace zerocert
