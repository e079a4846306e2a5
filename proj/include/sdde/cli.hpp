#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "sdde/carma.hpp"
#include "sdde/levy.hpp"
#include "sdde/measure.hpp"
#include "sdde/multivar.hpp"

namespace sdde {

/// Schema violation; the message starts with the JSON-pointer path of the
/// offending element.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed and validated model specification. Exactly one model payload is
/// present, matching kind. horizon = 0 selects an automatic value from the
/// slowest decay rate.
struct ModelSpec {
    std::string kind;  // "sdde" | "carma" | "msdde"

    std::optional<DelayMeasure> measure;        // sdde
    std::optional<CarmaModel> carma;            // carma, model forms
    std::optional<RegionScanSpec> region;       // carma, region form
    std::optional<MatrixDelayMeasure> matrix;   // msdde

    SubordinatorSpec driver;
    uint64_t seed = 1;
    double dt = 0.01;
    double horizon = 0.0;
    double T = 100.0;
    int n_points = 1 << 16;
    int n_max = 8;
    double grid_step = 0.01;
    std::string scheme = "ma";

    nlohmann::json normalized;  // defaults filled; re-parsing it reproduces this spec
};

/// Parses a UTF-8 JSON document. Unknown keys, type mismatches, and values
/// outside documented ranges raise SpecError with a JSON-pointer path.
ModelSpec parse_model_spec(const std::string& text);

struct CliFlags {
    std::optional<std::string> out;
    std::optional<uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<int> nmax;
    std::optional<double> grid_step;
};

/// Executes one command against a spec document. Flags override the matching
/// spec fields. Writes result files into the output directory and a short
/// human-readable summary to out. Returns the process exit code: 0 when the
/// command ran and any verdict is positive, 1 when a verdict is negative or
/// inconclusive, 2 on invalid input.
int run_command(const std::string& cmd, const std::string& spec_text, const CliFlags& flags,
                std::ostream& out, std::ostream& err);

}  // namespace sdde
