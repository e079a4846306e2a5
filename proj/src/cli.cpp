#include "sdde/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <variant>

#include "sdde/characteristic.hpp"
#include "sdde/csv.hpp"
#include "sdde/kernel.hpp"
#include "sdde/simulate.hpp"

namespace sdde {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
    throw SpecError(pointer + ": " + message);
}

void require_object(const json& v, const std::string& pointer) {
    if (!v.is_object()) fail(pointer, "expected an object");
}

void check_keys(const json& obj, const std::string& pointer, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) fail(pointer, "unknown key '" + item.key() + "'");
}

double get_number(const json& v, const std::string& pointer) {
    if (!v.is_number()) fail(pointer, "expected a number");
    return v.get<double>();
}

// Array of fixed-width numeric tuples, e.g. atoms [[tau, xi], ...].
std::vector<std::vector<double>> get_tuples(const json& v, const std::string& pointer,
                                            size_t width) {
    if (!v.is_array()) fail(pointer, "expected an array");
    std::vector<std::vector<double>> out;
    for (size_t i = 0; i < v.size(); ++i) {
        std::string p = pointer + "/" + std::to_string(i);
        if (!v[i].is_array() || v[i].size() != width)
            fail(p, "expected an array of " + std::to_string(width) + " numbers");
        std::vector<double> row;
        for (size_t k = 0; k < width; ++k) row.push_back(get_number(v[i][k], p));
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<double> get_numbers(const json& v, const std::string& pointer) {
    if (!v.is_array()) fail(pointer, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(get_number(v[i], pointer + "/" + std::to_string(i)));
    return out;
}

// restrict_keys is off when the measure fields sit inline in an already
// validated parent object.
DelayMeasure parse_measure(const json& obj, const std::string& pointer,
                           bool restrict_keys = true) {
    require_object(obj, pointer);
    if (restrict_keys) check_keys(obj, pointer, {"lambda", "atoms", "density"});
    if (!obj.contains("lambda")) fail(pointer, "missing key 'lambda'");
    double lambda = get_number(obj["lambda"], pointer + "/lambda");
    std::vector<std::pair<double, double>> atoms;
    if (obj.contains("atoms"))
        for (const auto& row : get_tuples(obj["atoms"], pointer + "/atoms", 2))
            atoms.emplace_back(row[0], row[1]);
    std::vector<ExpPolyTerm> density;
    if (obj.contains("density")) {
        for (const auto& row : get_tuples(obj["density"], pointer + "/density", 3)) {
            if (row[2] != std::floor(row[2]) || row[2] < 0.0)
                fail(pointer + "/density", "power must be a non-negative integer");
            density.push_back({row[0], row[1], static_cast<int>(row[2])});
        }
    }
    try {
        return DelayMeasure(lambda, std::move(atoms), std::move(density));
    } catch (const std::invalid_argument& e) {
        fail(pointer, e.what());
    }
}

json measure_to_json(const DelayMeasure& m) {
    json atoms = json::array();
    for (const auto& [tau, xi] : m.atoms()) atoms.push_back({tau, xi});
    json density = json::array();
    for (const auto& term : m.density()) density.push_back({term.coeff, term.rate, term.power});
    return {{"lambda", m.lambda0()}, {"atoms", atoms}, {"density", density}};
}

SubordinatorSpec parse_driver(const json& obj, const std::string& pointer) {
    require_object(obj, pointer);
    check_keys(obj, pointer, {"drift", "compound_poisson", "gamma", "inverse_gaussian"});
    SubordinatorSpec spec;
    if (obj.contains("drift")) spec.drift = get_number(obj["drift"], pointer + "/drift");
    int jump_kinds = obj.count("compound_poisson") + obj.count("gamma") +
                     obj.count("inverse_gaussian");
    if (jump_kinds > 1) fail(pointer, "at most one jump part");
    if (obj.contains("compound_poisson")) {
        std::string p = pointer + "/compound_poisson";
        const auto& cp = obj["compound_poisson"];
        require_object(cp, p);
        check_keys(cp, p, {"rate", "jump"});
        if (!cp.contains("rate")) fail(p, "missing key 'rate'");
        CompoundPoissonJumps jumps;
        jumps.rate = get_number(cp["rate"], p + "/rate");
        jumps.jump = ExponentialJump{1.0};
        if (cp.contains("jump")) {
            std::string pj = p + "/jump";
            require_object(cp["jump"], pj);
            check_keys(cp["jump"], pj, {"exponential", "constant"});
            if (cp["jump"].size() != 1) fail(pj, "exactly one jump law");
            if (cp["jump"].contains("exponential")) {
                const auto& e = cp["jump"]["exponential"];
                require_object(e, pj + "/exponential");
                check_keys(e, pj + "/exponential", {"mean"});
                if (!e.contains("mean")) fail(pj + "/exponential", "missing key 'mean'");
                jumps.jump = ExponentialJump{get_number(e["mean"], pj + "/exponential/mean")};
            } else {
                const auto& c = cp["jump"]["constant"];
                require_object(c, pj + "/constant");
                check_keys(c, pj + "/constant", {"size"});
                if (!c.contains("size")) fail(pj + "/constant", "missing key 'size'");
                jumps.jump = ConstantJump{get_number(c["size"], pj + "/constant/size")};
            }
        }
        spec.jumps = jumps;
    } else if (obj.contains("gamma")) {
        std::string p = pointer + "/gamma";
        const auto& g = obj["gamma"];
        require_object(g, p);
        check_keys(g, p, {"shape", "rate"});
        if (!g.contains("shape") || !g.contains("rate")) fail(p, "needs 'shape' and 'rate'");
        spec.jumps = GammaJumps{get_number(g["shape"], p + "/shape"),
                                get_number(g["rate"], p + "/rate")};
    } else if (obj.contains("inverse_gaussian")) {
        std::string p = pointer + "/inverse_gaussian";
        const auto& g = obj["inverse_gaussian"];
        require_object(g, p);
        check_keys(g, p, {"mean", "shape"});
        if (!g.contains("mean") || !g.contains("shape")) fail(p, "needs 'mean' and 'shape'");
        spec.jumps = InverseGaussianJumps{get_number(g["mean"], p + "/mean"),
                                          get_number(g["shape"], p + "/shape")};
    }
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        fail(pointer, e.what());
    }
    return spec;
}

json driver_to_json(const SubordinatorSpec& spec) {
    json out = {{"drift", spec.drift}};
    if (!spec.jumps) return out;
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&*spec.jumps)) {
        json jump;
        if (const auto* e = std::get_if<ExponentialJump>(&cp->jump))
            jump = {{"exponential", {{"mean", e->mean}}}};
        else
            jump = {{"constant", {{"size", std::get<ConstantJump>(cp->jump).size}}}};
        out["compound_poisson"] = {{"rate", cp->rate}, {"jump", jump}};
    } else if (const auto* g = std::get_if<GammaJumps>(&*spec.jumps)) {
        out["gamma"] = {{"shape", g->shape}, {"rate", g->rate}};
    } else {
        const auto& ig = std::get<InverseGaussianJumps>(*spec.jumps);
        out["inverse_gaussian"] = {{"mean", ig.mean}, {"shape", ig.shape}};
    }
    return out;
}

const std::set<std::string> kCommonKeys = {"kind",     "driver", "seed", "dt",    "horizon",
                                           "T",        "n_points", "n_max", "grid_step",
                                           "scheme"};

void parse_common(const json& doc, ModelSpec& spec) {
    if (doc.contains("driver")) spec.driver = parse_driver(doc["driver"], "/driver");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) fail("/seed", "expected a non-negative integer");
        spec.seed = doc["seed"].get<uint64_t>();
    }
    if (doc.contains("dt")) {
        spec.dt = get_number(doc["dt"], "/dt");
        if (!(spec.dt > 0.0)) fail("/dt", "must be positive");
    }
    if (doc.contains("horizon")) {
        spec.horizon = get_number(doc["horizon"], "/horizon");
        if (spec.horizon < 0.0) fail("/horizon", "must be non-negative (0 = automatic)");
    }
    if (doc.contains("T")) {
        spec.T = get_number(doc["T"], "/T");
        if (!(spec.T > 0.0)) fail("/T", "must be positive");
    }
    if (doc.contains("n_points")) {
        if (!doc["n_points"].is_number_integer()) fail("/n_points", "expected an integer");
        spec.n_points = doc["n_points"].get<int>();
        if (spec.n_points < 16 || (spec.n_points & (spec.n_points - 1)) != 0)
            fail("/n_points", "must be a power of two, at least 16");
    }
    if (doc.contains("n_max")) {
        if (!doc["n_max"].is_number_integer()) fail("/n_max", "expected an integer");
        spec.n_max = doc["n_max"].get<int>();
        if (spec.n_max < 0 || spec.n_max > 12) fail("/n_max", "must be in [0, 12]");
    }
    if (doc.contains("grid_step")) {
        spec.grid_step = get_number(doc["grid_step"], "/grid_step");
        if (!(spec.grid_step > 0.0)) fail("/grid_step", "must be positive");
    }
    if (doc.contains("scheme")) {
        if (!doc["scheme"].is_string()) fail("/scheme", "expected a string");
        spec.scheme = doc["scheme"].get<std::string>();
        if (spec.scheme != "ma" && spec.scheme != "euler")
            fail("/scheme", "must be 'ma' or 'euler'");
    }
}

void append_common(json& out, const ModelSpec& spec) {
    out["driver"] = driver_to_json(spec.driver);
    out["seed"] = spec.seed;
    out["dt"] = spec.dt;
    out["horizon"] = spec.horizon;
    out["T"] = spec.T;
    out["n_points"] = spec.n_points;
    out["n_max"] = spec.n_max;
    out["grid_step"] = spec.grid_step;
    out["scheme"] = spec.scheme;
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("/: invalid JSON: ") + e.what());
    }
    require_object(doc, "/");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        fail("/kind", "required, one of 'sdde', 'carma', 'msdde'");

    ModelSpec spec;
    spec.kind = doc["kind"].get<std::string>();
    json normalized{{"kind", spec.kind}};

    if (spec.kind == "sdde") {
        auto allowed = kCommonKeys;
        allowed.insert({"lambda", "atoms", "density"});
        check_keys(doc, "/", allowed);
        spec.measure = parse_measure(doc, "/", false);
        json m = measure_to_json(*spec.measure);
        normalized.update(m);
    } else if (spec.kind == "carma") {
        auto allowed = kCommonKeys;
        allowed.insert({"P", "Q", "ar_roots", "ma_roots", "region"});
        check_keys(doc, "/", allowed);
        bool has_pq = doc.contains("P") || doc.contains("Q");
        bool has_roots = doc.contains("ar_roots") || doc.contains("ma_roots");
        bool has_region = doc.contains("region");
        if (has_pq + has_roots + has_region != 1)
            fail("/", "exactly one of {P,Q}, {ar_roots,ma_roots}, region");
        try {
            if (has_pq) {
                if (!doc.contains("P") || !doc.contains("Q")) fail("/", "needs both P and Q");
                Polynomial P(get_numbers(doc["P"], "/P"));
                Polynomial Q(get_numbers(doc["Q"], "/Q"));
                spec.carma = CarmaModel::from_polynomials(std::move(P), std::move(Q));
                normalized["P"] = get_numbers(doc["P"], "/P");
                normalized["Q"] = get_numbers(doc["Q"], "/Q");
            } else if (has_roots) {
                if (!doc.contains("ar_roots") || !doc.contains("ma_roots"))
                    fail("/", "needs both ar_roots and ma_roots");
                auto ar = get_numbers(doc["ar_roots"], "/ar_roots");
                auto ma = get_numbers(doc["ma_roots"], "/ma_roots");
                std::vector<std::complex<double>> arc(ar.begin(), ar.end());
                std::vector<std::complex<double>> mac(ma.begin(), ma.end());
                spec.carma = CarmaModel::from_roots(arc, mac);
                normalized["ar_roots"] = ar;
                normalized["ma_roots"] = ma;
            } else {
                const auto& r = doc["region"];
                require_object(r, "/region");
                check_keys(r, "/region", {"ar_roots", "beta_min", "beta_max"});
                if (!r.contains("ar_roots")) fail("/region", "missing key 'ar_roots'");
                RegionScanSpec rs;
                rs.ar_roots = get_numbers(r["ar_roots"], "/region/ar_roots");
                if (rs.ar_roots.size() != 3) fail("/region/ar_roots", "expected three zeros");
                if (r.contains("beta_min"))
                    rs.beta_min = get_number(r["beta_min"], "/region/beta_min");
                if (r.contains("beta_max"))
                    rs.beta_max = get_number(r["beta_max"], "/region/beta_max");
                if (rs.beta_max < rs.beta_min) fail("/region", "beta_max below beta_min");
                spec.region = rs;
                normalized["region"] = {{"ar_roots", rs.ar_roots},
                                        {"beta_min", rs.beta_min},
                                        {"beta_max", rs.beta_max}};
            }
        } catch (const std::invalid_argument& e) {
            fail("/", e.what());
        }
    } else if (spec.kind == "msdde") {
        auto allowed = kCommonKeys;
        allowed.insert("entries");
        check_keys(doc, "/", allowed);
        if (!doc.contains("entries") || !doc["entries"].is_array())
            fail("/entries", "expected a square array of measure objects");
        std::vector<std::vector<DelayMeasure>> entries;
        json norm_entries = json::array();
        for (size_t j = 0; j < doc["entries"].size(); ++j) {
            const auto& row = doc["entries"][j];
            std::string pr = "/entries/" + std::to_string(j);
            if (!row.is_array()) fail(pr, "expected an array");
            std::vector<DelayMeasure> parsed_row;
            json norm_row = json::array();
            for (size_t k = 0; k < row.size(); ++k) {
                parsed_row.push_back(parse_measure(row[k], pr + "/" + std::to_string(k)));
                norm_row.push_back(measure_to_json(parsed_row.back()));
            }
            entries.push_back(std::move(parsed_row));
            norm_entries.push_back(std::move(norm_row));
        }
        try {
            spec.matrix = MatrixDelayMeasure(std::move(entries));
        } catch (const std::invalid_argument& e) {
            fail("/entries", e.what());
        }
        normalized["entries"] = std::move(norm_entries);
    } else {
        fail("/kind", "must be one of 'sdde', 'carma', 'msdde'");
    }

    parse_common(doc, spec);
    append_common(normalized, spec);
    spec.normalized = std::move(normalized);
    return spec;
}

namespace {

void apply_flags(ModelSpec& spec, const CliFlags& flags) {
    if (flags.seed) spec.seed = *flags.seed;
    if (flags.dt) {
        if (!(*flags.dt > 0.0)) throw SpecError("--dt: must be positive");
        spec.dt = *flags.dt;
    }
    if (flags.horizon) {
        if (*flags.horizon < 0.0) throw SpecError("--horizon: must be non-negative");
        spec.horizon = *flags.horizon;
    }
    if (flags.nmax) {
        if (*flags.nmax < 0 || *flags.nmax > 12) throw SpecError("--nmax: must be in [0, 12]");
        spec.n_max = *flags.nmax;
    }
    if (flags.grid_step) {
        if (!(*flags.grid_step > 0.0)) throw SpecError("--grid-step: must be positive");
        spec.grid_step = *flags.grid_step;
    }
    if (flags.out) {
        std::filesystem::create_directories(*flags.out);
    }
    spec.normalized["seed"] = spec.seed;
    spec.normalized["dt"] = spec.dt;
    spec.normalized["horizon"] = spec.horizon;
    spec.normalized["n_max"] = spec.n_max;
    spec.normalized["grid_step"] = spec.grid_step;
}

std::string out_file(const CliFlags& flags, const std::string& name) {
    std::filesystem::path dir = flags.out ? *flags.out : ".";
    return (dir / name).string();
}

double auto_horizon_sdde(const DelayMeasure& phi, double requested) {
    if (requested > 0.0) return requested;
    double rate = std::abs(phi.slowest_rate(-phi.lambda0()));
    if (!(rate > 0.05)) rate = 0.05;
    return 40.0 / rate;
}

double auto_horizon_carma(const CarmaModel& m, double requested) {
    if (requested > 0.0) return requested;
    double slowest = -1.0;
    for (const auto& r : m.ar_roots()) slowest = std::max(slowest, r.real());
    return 20.0 / std::abs(slowest);
}

// Power-of-two sample count giving a kernel step no coarser than dt.
int fft_points_for(double horizon, double dt) {
    int n = 16;
    while (n * dt < 2.0 * horizon && n < (1 << 22)) n <<= 1;
    return n;
}

void write_verdict_json(const CliFlags& flags, const json& bundle, std::ostream& out) {
    std::string path = out_file(flags, "verdict.json");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << bundle.dump(2) << '\n';
    out << "verdict bundle written: " << path << '\n';
}

json zero_free_to_json(const ZeroFreeReport& r) {
    return {{"verdict", r.verdict},
            {"winding", r.winding},
            {"contour_radius", r.contour_radius},
            {"min_modulus_on_axis", r.min_modulus_on_axis}};
}

const char* sign_name(SignVerdict v) {
    switch (v) {
        case SignVerdict::Yes: return "yes";
        case SignVerdict::No: return "no";
        default: return "inconclusive";
    }
}

int run_check_sdde(const ModelSpec& spec, const CliFlags& flags, std::ostream& out) {
    const DelayMeasure& phi = *spec.measure;
    json bundle{{"schema", 1}, {"command", "check"}, {"spec", spec.normalized}};

    bool mass_ok = necessary_mass_check(phi);
    bundle["mass_check"] = mass_ok;
    out << "mass check: " << (mass_ok ? "pass" : "fail") << " (total mass "
        << phi.total_mass() << ")\n";

    auto existence = zero_free(phi);
    bundle["existence"] = zero_free_to_json(existence);
    out << "existence: " << (existence.verdict ? "zero-free" : "not zero-free") << " (winding "
        << existence.winding << ", min |h| on axis " << existence.min_modulus_on_axis << ")\n";

    std::string verdict;
    int code = 1;
    if (!existence.verdict) {
        verdict = "non-stationary";
    } else {
        auto positive_part = is_nonneg_on_positive(phi);
        bundle["positive_part"] = {{"verdict", sign_name(positive_part.verdict)},
                                   {"numerically_verified", positive_part.numerically_verified}};
        if (positive_part.witness) bundle["positive_part"]["witness"] = *positive_part.witness;
        out << "positive-lag measure non-negative: " << sign_name(positive_part.verdict) << '\n';

        CMParams cm_params;
        cm_params.n_max = spec.n_max;
        auto cm = complete_monotonicity_check(phi, cm_params);
        json cm_json{{"completely_monotone", cm.completely_monotone},
                     {"n_checked", cm.n_checked}};
        if (cm.failure)
            cm_json["failure"] = {{"x", cm.failure->x},
                                  {"n", cm.failure->n},
                                  {"value", cm.failure->value},
                                  {"scaled_value", cm.failure->scaled_value}};
        bundle["complete_monotonicity"] = cm_json;
        if (cm.failure)
            out << "complete monotonicity: fails at n = " << cm.failure->n << ", x = "
                << cm.failure->x << ", value " << cm.failure->scaled_value << '\n';
        else
            out << "complete monotonicity: no violation up to n = " << cm.n_checked << '\n';

        if (positive_part.verdict == SignVerdict::Yes) {
            verdict = "non-negative";
            code = 0;
        } else if (!cm.completely_monotone) {
            verdict = "negative";
        } else {
            double horizon = auto_horizon_sdde(phi, spec.horizon);
            auto scan = min_scan(kernel_fft(phi, horizon, spec.n_points));
            bundle["kernel_min"] = {{"t", scan.t}, {"value", scan.value}};
            out << "kernel minimum: " << scan.value << " at t = " << scan.t << '\n';
            verdict = scan.value < -1e-3 ? "negative" : "inconclusive";
        }
    }
    bundle["verdict"] = verdict;
    out << "verdict: " << verdict << '\n';
    write_verdict_json(flags, bundle, out);
    return code;
}

int run_check_carma(const ModelSpec& spec, const CliFlags& flags, std::ostream& out) {
    if (!spec.carma) throw SpecError("/: check requires a model payload, not a region sweep");
    const CarmaModel& m = *spec.carma;
    json bundle{{"schema", 1}, {"command", "check"}, {"spec", spec.normalized}};

    auto verdict = nonneg_verdict(m);
    json arms;
    arms["ordering"] = verdict.ordering ? json(*verdict.ordering) : json();
    arms["density"] = verdict.density ? json(*verdict.density) : json();
    arms["classifier"] = verdict.classifier ? json(*verdict.classifier) : json();
    arms["kernel_scan"] = verdict.kernel_scan;
    arms["kernel_min"] = verdict.kernel_min;
    bundle["arms"] = arms;
    bundle["notes"] = verdict.notes;

    auto arm_line = [&](const char* name, const std::optional<bool>& v) {
        out << name << (v ? (*v ? ": pass" : ": fail") : ": n.a.") << '\n';
    };
    arm_line("ordering condition", verdict.ordering);
    arm_line("density condition", verdict.density);
    arm_line("explicit classifier", verdict.classifier);
    out << "kernel scan minimum: " << verdict.kernel_min << '\n';

    bool exact_negative = false;
    bool positive = (verdict.ordering && *verdict.ordering) ||
                    (verdict.density && *verdict.density) ||
                    (verdict.classifier && *verdict.classifier) ||
                    verdict.notes.find("non-negative by composition") != std::string::npos;
    if (m.p() == 2 && m.q() == 1) {
        auto c21 = carma21_verdict(m);
        bundle["exact_21"] = {{"kernel_nonneg", c21.kernel_nonneg},
                              {"density_nonneg", c21.density_nonneg}};
        out << "exact order-(2,1) verdict: kernel "
            << (c21.kernel_nonneg ? "non-negative" : "negative") << '\n';
        positive = positive || c21.kernel_nonneg;
        exact_negative = !c21.kernel_nonneg;
    }

    std::string text;
    int code = 1;
    if (positive) {
        text = "non-negative";
        code = 0;
    } else if (exact_negative || verdict.kernel_min < -1e-6) {
        text = "negative";
    } else {
        text = "inconclusive";
    }
    bundle["verdict"] = text;
    out << "verdict: " << text << '\n';
    write_verdict_json(flags, bundle, out);
    return code;
}

int run_kernel(const ModelSpec& spec, const CliFlags& flags, std::ostream& out) {
    std::string path = out_file(flags, spec.kind == "msdde" ? "matrix_kernel.csv" : "kernel.csv");
    if (spec.kind == "sdde") {
        double horizon = auto_horizon_sdde(*spec.measure, spec.horizon);
        auto grid = kernel_fft(*spec.measure, horizon, spec.n_points);
        write_kernel_csv(path, grid);
        auto scan = min_scan(grid);
        out << "kernel written: " << path << " (" << grid.values.size() << " points, dt = "
            << grid.dt << ", min = " << scan.value << " at t = " << scan.t << ")\n";
    } else if (spec.kind == "carma") {
        if (!spec.carma) throw SpecError("/: kernel requires a model payload");
        double horizon = auto_horizon_carma(*spec.carma, spec.horizon);
        auto grid = kernel_statespace(spec.carma->ar(), spec.carma->ma(), horizon, spec.dt);
        write_kernel_csv(path, grid);
        auto scan = min_scan(grid);
        out << "kernel written: " << path << " (" << grid.values.size() << " points, dt = "
            << grid.dt << ", min = " << scan.value << " at t = " << scan.t << ")\n";
    } else {
        double horizon = spec.horizon > 0.0 ? spec.horizon : 40.0;
        auto grid = matrix_kernel_fft(*spec.matrix, horizon, spec.n_points);
        write_matrix_kernel_csv(path, grid);
        out << "matrix kernel written: " << path << " (" << grid.values.size()
            << " points, dt = " << grid.dt << ")\n";
    }
    return 0;
}

int run_simulate(const ModelSpec& spec, const CliFlags& flags, std::ostream& out) {
    std::string path = out_file(flags, "path.csv");
    PathStats stats;
    if (spec.kind == "msdde") {
        double horizon = spec.horizon > 0.0 ? spec.horizon : 40.0;
        auto grid = matrix_kernel_fft(*spec.matrix, horizon,
                                      fft_points_for(horizon, spec.dt));
        auto sample = simulate_ma_matrix(grid, spec.driver, spec.T, spec.seed);
        write_path_csv(path, sample);
        out << "path written: " << path << " (" << sample.t.size() << " points, dim "
            << grid.dim() << ")\n";
        return 0;
    }

    PathSample sample;
    if (spec.kind == "carma") {
        if (!spec.carma) throw SpecError("/: simulate requires a model payload");
        if (spec.scheme == "euler") {
            auto form = sdde_form(*spec.carma);
            sample = simulate_euler(form.measure(), spec.driver, spec.T, spec.dt, spec.seed);
        } else {
            double horizon = auto_horizon_carma(*spec.carma, spec.horizon);
            auto grid = kernel_statespace(spec.carma->ar(), spec.carma->ma(), horizon, spec.dt);
            sample = simulate_ma(grid, spec.driver, spec.T, spec.seed);
        }
    } else {
        const DelayMeasure& phi = *spec.measure;
        if (spec.scheme == "euler") {
            sample = simulate_euler(phi, spec.driver, spec.T, spec.dt, spec.seed);
        } else {
            double horizon = auto_horizon_sdde(phi, spec.horizon);
            auto grid = kernel_fft(phi, horizon, fft_points_for(horizon, spec.dt));
            sample = simulate_ma(grid, spec.driver, spec.T, spec.seed);
        }
    }
    stats = path_stats(sample);
    write_path_csv(path, sample);
    out << "path written: " << path << " (" << sample.t.size() << " points, scheme "
        << sample.meta.scheme << ", min = " << stats.min << ", fraction negative = "
        << stats.fraction_negative << ")\n";
    if (sample.meta.tail_warning) out << "warning: kernel tail above 1e-4 at the horizon\n";
    return 0;
}

int run_region(const ModelSpec& spec, const CliFlags& flags, std::ostream& out) {
    if (spec.kind != "carma" || !spec.region)
        throw SpecError("/: region requires a carma spec with a region payload");
    RegionScanSpec rs = *spec.region;
    rs.step = spec.grid_step;
    auto rows = region_scan(rs);
    std::string path = out_file(flags, "region.csv");
    write_region_csv(path, rows);
    out << "region written: " << path << " (" << rows.size() << " rows)\n";
    return 0;
}

int run_mcheck(const ModelSpec& spec, const CliFlags& flags, std::ostream& out) {
    const MatrixDelayMeasure& phi = *spec.matrix;
    json bundle{{"schema", 1}, {"command", "mcheck"}, {"spec", spec.normalized}};
    auto verdict = msdde_nonneg_check(phi);

    bundle["existence"] = zero_free_to_json(verdict.zero_free);
    bundle["entries_nonneg"] = verdict.entries_nonneg;
    if (verdict.entry_witness)
        bundle["entry_witness"] = {verdict.entry_witness->first, verdict.entry_witness->second};
    bundle["m_matrix"] = {{"is_m", verdict.m_matrix.is_m},
                          {"alpha", verdict.m_matrix.alpha},
                          {"spectral_radius", verdict.m_matrix.spectral_radius}};
    bundle["verdict"] = verdict.nonneg ? "non-negative" : "not established";

    out << "determinant zero-free: " << (verdict.zero_free.verdict ? "yes" : "no") << '\n';
    out << "positive-lag entries non-negative: " << (verdict.entries_nonneg ? "yes" : "no")
        << '\n';
    out << "lag-zero matrix is an M-matrix: " << (verdict.m_matrix.is_m ? "yes" : "no") << '\n';
    out << "verdict: " << (verdict.nonneg ? "non-negative" : "not established") << '\n';
    write_verdict_json(flags, bundle, out);
    return verdict.nonneg ? 0 : 1;
}

}  // namespace

int run_command(const std::string& cmd, const std::string& spec_text, const CliFlags& flags,
                std::ostream& out, std::ostream& err) {
    try {
        ModelSpec spec = parse_model_spec(spec_text);
        apply_flags(spec, flags);

        if (cmd == "check") {
            if (spec.kind == "msdde")
                throw SpecError("/kind: use mcheck for multivariate specs");
            return spec.kind == "sdde" ? run_check_sdde(spec, flags, out)
                                       : run_check_carma(spec, flags, out);
        }
        if (cmd == "kernel") return run_kernel(spec, flags, out);
        if (cmd == "simulate") return run_simulate(spec, flags, out);
        if (cmd == "region") return run_region(spec, flags, out);
        if (cmd == "mcheck") {
            if (spec.kind != "msdde") throw SpecError("/kind: mcheck requires an msdde spec");
            return run_mcheck(spec, flags, out);
        }
        err << "unknown command: " << cmd << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace sdde
