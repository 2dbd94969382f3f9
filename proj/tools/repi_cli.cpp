#include "repi_cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "renyi/densities.hpp"
#include "renyi/diagnostics.hpp"
#include "renyi/epi.hpp"
#include "renyi/error.hpp"
#include "renyi/measures.hpp"
#include "renyi/transport.hpp"

namespace repi {

using Json = nlohmann::ordered_json;
using renyi::GridDensity;
using renyi::RenyiOrder;

namespace {

constexpr double kEqualityBand = 2e-4;
constexpr double kSuborderProjection = 1e-3;
constexpr double kVarentropyTol = 1e-3;
constexpr double kDerivativeTol = 1e-4;
constexpr double kPreservationTol = 1e-3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Numbers are rounded to 12 significant digits so output is stable across runs.
Json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::strtod(fmt(v).c_str(), nullptr);
}

Json nums(std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

struct Input {
    std::string label;
    GridDensity density;
};

std::size_t grid_len(const RunConfig& cfg) { return cfg.grid_len ? cfg.grid_len : renyi::default_grid_len(); }

std::vector<Input> load_inputs(const RunConfig& cfg, double min_order) {
    renyi::GridOptions opts;
    opts.grid_len = grid_len(cfg);
    opts.min_order = std::min(1.0, min_order);
    std::vector<Input> out;
    for (const auto& spec : cfg.families) {
        const auto fam = renyi::parse_family(spec);
        out.push_back({renyi::to_string(fam), renyi::make_analytic(fam, opts)});
    }
    for (const auto& path : cfg.csv_paths) out.push_back({"csv:" + path, renyi::read_density_csv_file(path)});
    return out;
}

std::vector<GridDensity> densities_of(const std::vector<Input>& inputs) {
    std::vector<GridDensity> v;
    for (const auto& in : inputs) v.push_back(in.density);
    return v;
}

Json labels_of(const std::vector<Input>& inputs) {
    Json a = Json::array();
    for (const auto& in : inputs) a.push_back(in.label);
    return a;
}

void require_inputs(const std::vector<Input>& inputs, std::size_t at_least) {
    if (inputs.size() < at_least)
        throw renyi::ParameterError("this command needs at least " + std::to_string(at_least) + " densities");
}

double check_order(const RunConfig& cfg) {
    if (cfg.order) return *cfg.order;
    if (cfg.orders.size() == 1) return cfg.orders.front();
    throw renyi::ParameterError("checks need a single --order");
}

Json constants_json(const renyi::ConstantsRecord& rec) {
    Json j;
    j["c"] = num(rec.c);
    j["alpha"] = num(rec.alpha);
    j["r"] = num(rec.r);
    j["m"] = rec.m;
    j["lambda"] = nums(rec.lambda);
    if (!rec.orders.empty()) j["orders"] = nums(rec.orders);
    j["source"] = rec.source;
    return j;
}

std::string statement(renyi::InequalityId id) {
    switch (id) {
    case renyi::InequalityId::repic: return "N_r(sum X_i) >= c sum N_r(X_i)";
    case renyi::InequalityId::repialpha: return "N_r^alpha(sum X_i) >= sum N_r^alpha(X_i)";
    case renyi::InequalityId::repig: return "N_r^alpha(sum X_i) >= c sum N_r^alpha(X_i)";
    case renyi::InequalityId::dct: return "h_r(sum sqrt(l_i) X_i) - sum l_i h_{r_i}(X_i) >= Gaussian value";
    }
    return "";
}

void apply_tol(renyi::EpiReport& rep, const RunConfig& cfg) {
    if (!cfg.tol) return;
    rep.tol = *cfg.tol;
    rep.pass = rep.gap >= -rep.tol;
}

Json epi_json(const renyi::EpiReport& rep, const std::vector<Input>& inputs, const Json& notes) {
    Json j;
    j["kind"] = "check";
    j["suite"] = renyi::to_string(rep.inequality_id);
    j["inequality_id"] = renyi::to_string(rep.inequality_id);
    j["statement"] = statement(rep.inequality_id);
    j["densities"] = labels_of(inputs);
    j["lhs"] = num(rep.lhs);
    j["rhs"] = num(rep.rhs);
    j["gap"] = num(rep.gap);
    j["tol"] = num(rep.tol);
    j["pass"] = rep.pass;
    j["equality_within_tolerance"] = std::abs(rep.gap) < kEqualityBand;
    j["constants"] = constants_json(rep.constants);
    if (!notes.empty()) j["notes"] = notes;
    return j;
}

// ---------------------------------------------------------------------------

std::vector<Json> cmd_entropy(const RunConfig& cfg) {
    const std::vector<double> orders = cfg.orders.empty() ? std::vector<double>{1.0} : cfg.orders;
    const auto inputs = load_inputs(cfg, *std::min_element(orders.begin(), orders.end()));
    require_inputs(inputs, 1);
    std::vector<Json> out;
    for (const auto& in : inputs) {
        for (double r : orders) {
            const RenyiOrder order(r);
            const double h = renyi::renyi_entropy(in.density, order);
            Json j;
            j["kind"] = "entropy";
            j["density"] = in.label;
            j["r"] = num(r);
            j["h"] = num(h);
            j["N"] = num(std::exp(2.0 * h));
            const double sens = renyi::tail_sensitivity(in.density, r);
            j["tail_sensitivity"] = num(sens);
            if (r < 1.0 && sens > 1e-6) {
                const std::string msg = "tails carry a share " + fmt(sens) + " of the integral of f^r for " +
                                        in.label + "; the value depends on the truncation";
                renyi::warn(msg);
                j["warning"] = msg;
            }
            j["pass"] = true;
            out.push_back(std::move(j));
        }
    }
    return out;
}

std::vector<Json> cmd_constants(const RunConfig& cfg) {
    const std::vector<double> orders = cfg.orders.empty() ? std::vector<double>{2.0} : cfg.orders;
    const std::vector<std::size_t> ms = cfg.m.empty() ? std::vector<std::size_t>{2} : cfg.m;
    const double alpha = cfg.alpha.value_or(0.5);
    std::vector<Json> out;
    for (double r : orders) {
        if (!(r > 0.0) || !std::isfinite(r)) throw renyi::OrderError("orders must be finite and > 0");
        for (std::size_t m : ms) {
            if (m < 2) throw renyi::ParameterError("m must be >= 2");
            Json j;
            j["kind"] = "constants";
            j["r"] = num(r);
            j["m"] = m;
            j["alpha"] = num(alpha);
            Json notes = Json::array();
            j["c_ram_sason"] = nullptr;
            j["c_bobkov_chistyakov"] = nullptr;
            j["alpha_li"] = nullptr;
            j["alpha_bm"] = nullptr;
            j["c_new_repi"] = nullptr;
            j["logconcave_c"] = nullptr;
            j["logconcave_alpha"] = nullptr;
            j["logconcave_c_alpha"] = nullptr;
            if (r == 1.0) {
                notes.push_back("r = 1 is the Shannon limit: every constant here needs r != 1");
            } else if (r > 1.0) {
                j["c_ram_sason"] = num(renyi::c_ram_sason(r, m));
                j["c_bobkov_chistyakov"] = num(renyi::c_bobkov_chistyakov(r));
                j["alpha_li"] = num(renyi::alpha_li(r));
                j["alpha_bm"] = num(renyi::alpha_bm(r));
                if (alpha > 0.0 && alpha < 1.0) j["c_new_repi"] = num(renyi::c_new_repi(r, m, alpha));
                else notes.push_back("c_new_repi needs 0 < alpha < 1");
                notes.push_back("log-concave constants apply to 0 < r < 1 only");
            } else {
                const bool alpha_ok = alpha > 0.0 && alpha < 1.0;
                const auto lc = renyi::logconcave_constants(r, m, alpha_ok ? std::optional<double>(alpha) : std::nullopt);
                j["logconcave_c"] = num(lc.c_lc);
                if (m == 2) j["logconcave_alpha"] = num(lc.alpha_lc);
                else notes.push_back("the log-concave exponent is established for two variables only");
                if (lc.c_lc_alpha) j["logconcave_c_alpha"] = num(*lc.c_lc_alpha);
                notes.push_back("general constants (c_ram_sason, alpha_li, c_new_repi, c_bobkov_chistyakov) need r > 1");
            }
            j["notes"] = notes;
            j["pass"] = true;
            out.push_back(std::move(j));
        }
    }
    return out;
}

// Orders r_i for the DCT check: explicit (projected onto the constraint when
// within 1e-3), from --lambda, or from uniform weights.
std::vector<double> resolve_suborders(const RunConfig& cfg, double r, std::size_t m, Json& notes) {
    if (!cfg.suborders.empty()) {
        if (cfg.suborders.size() != m) throw renyi::ParameterError("need one suborder per density");
        const double rc = renyi::conjugate(r);
        std::vector<double> w;
        double sum = 0.0;
        for (double ri : cfg.suborders) {
            if (!(ri > 0.0) || ri == 1.0) throw renyi::OrderError("suborders must be > 0 and != 1");
            if ((ri > 1.0) != (r > 1.0)) throw renyi::HypothesisError("conjugate exponents must all have the same sign");
            w.push_back(rc / renyi::conjugate(ri));
            sum += w.back();
        }
        if (std::abs(sum - 1.0) > kSuborderProjection)
            throw renyi::HypothesisError("suborders violate sum 1/r'_i = 1/r' (off by " + fmt(sum - 1.0) + ")");
        if (std::abs(sum - 1.0) <= 1e-9) return cfg.suborders;
        for (double& x : w) x /= sum;
        auto projected = renyi::orders_from_lambda(r, renyi::LambdaWeights(w));
        notes.push_back("suborders projected onto sum 1/r'_i = 1/r' (constraint was off by " + fmt(sum - 1.0) + ")");
        return projected;
    }
    if (!cfg.lambda.empty()) {
        if (cfg.lambda.size() != m) throw renyi::ParameterError("need one lambda weight per density");
        return renyi::orders_from_lambda(r, renyi::LambdaWeights(cfg.lambda));
    }
    return renyi::orders_from_lambda(r, renyi::LambdaWeights::uniform(m));
}

std::vector<Json> check_dct(const RunConfig& cfg) {
    const double r = check_order(cfg);
    Json notes = Json::array();
    const std::size_t m = cfg.families.size() + cfg.csv_paths.size();
    if (m < 2) throw renyi::ParameterError("dct needs at least 2 densities");
    const auto orders = resolve_suborders(cfg, r, m, notes);
    const auto inputs = load_inputs(cfg, std::min(r, *std::min_element(orders.begin(), orders.end())));
    auto rep = renyi::check_dct(densities_of(inputs), r, orders);
    apply_tol(rep, cfg);
    return {epi_json(rep, inputs, notes)};
}

void require_log_concave(const std::vector<Input>& inputs) {
    for (const auto& in : inputs) {
        if (!renyi::is_log_concave(in.density).log_concave)
            throw renyi::HypothesisError(in.label + " is not log-concave; the r < 1 constants need log-concave densities");
    }
}

std::vector<Json> check_repi(const RunConfig& cfg, renyi::InequalityId id) {
    const double r = check_order(cfg);
    if (r == 1.0) throw renyi::OrderError("the entropy power inequalities here need r != 1");
    const auto inputs = load_inputs(cfg, r);
    require_inputs(inputs, 2);
    const std::size_t m = inputs.size();
    Json notes = Json::array();
    double c = 1.0;
    double alpha = 1.0;
    std::string source;
    if (r > 1.0) {
        switch (id) {
        case renyi::InequalityId::repic:
            c = renyi::c_ram_sason(r, m);
            source = "c_ram_sason";
            break;
        case renyi::InequalityId::repialpha:
            alpha = renyi::alpha_li(r);
            source = "alpha_li";
            break;
        default:
            alpha = cfg.alpha.value_or(0.5);
            c = renyi::c_new_repi(r, m, alpha);
            source = "c_new_repi";
            break;
        }
    } else {
        require_log_concave(inputs);
        switch (id) {
        case renyi::InequalityId::repic:
            c = renyi::logconcave_constants(r, m).c_lc;
            source = "logconcave_c";
            break;
        case renyi::InequalityId::repialpha:
            if (m != 2) throw renyi::HypothesisError("the log-concave exponent is established for two variables only");
            alpha = renyi::logconcave_constants(r, m).alpha_lc;
            source = "logconcave_alpha";
            break;
        default:
            alpha = cfg.alpha.value_or(0.5);
            c = *renyi::logconcave_constants(r, m, alpha).c_lc_alpha;
            source = "logconcave_c_alpha";
            break;
        }
    }
    if (cfg.c || (cfg.alpha && id != renyi::InequalityId::repig)) {
        c = cfg.c.value_or(c);
        alpha = cfg.alpha.value_or(alpha);
        source = "explicit";
        notes.push_back("constants overridden on the command line");
    }
    const auto dens = densities_of(inputs);
    auto rep = renyi::check_repig(dens, r, c, alpha, id, source);
    apply_tol(rep, cfg);
    Json j = epi_json(rep, inputs, notes);
    const auto lin = renyi::linearization_converse(dens, r, c, alpha);
    Json l;
    l["lambda"] = nums(lin.lambda);
    l["log_gap"] = num(lin.log_gap);
    l["linearized_lhs"] = num(lin.linearized_lhs);
    l["linearized_rhs"] = num(lin.linearized_rhs);
    l["multiplicative_pass"] = lin.multiplicative_pass;
    l["linearized_pass"] = lin.linearized_pass;
    j["linearization"] = l;
    return {j};
}

std::vector<Json> check_varentropy(const RunConfig& cfg) {
    const std::vector<double> orders = cfg.orders.empty() ? std::vector<double>{cfg.order.value_or(1.0)} : cfg.orders;
    const auto inputs = load_inputs(cfg, *std::min_element(orders.begin(), orders.end()));
    require_inputs(inputs, 1);
    const double tol = cfg.tol.value_or(kVarentropyTol);
    std::vector<Json> out;
    for (const auto& in : inputs) {
        const bool lc = renyi::is_log_concave(in.density).log_concave;
        for (double r : orders) {
            const double var = renyi::varentropy(in.density, RenyiOrder(r));
            const double bound = 1.0 / (r * r);
            Json j;
            j["kind"] = "check";
            j["suite"] = "varentropy";
            j["statement"] = "Var log f(X_r) <= n / r^2 for log-concave f";
            j["density"] = in.label;
            j["r"] = num(r);
            j["log_concave"] = lc;
            j["varentropy"] = num(var);
            j["bound"] = num(bound);
            j["gap"] = num(bound - var);
            j["tol"] = num(tol);
            j["applicable"] = lc;
            j["pass"] = !lc || var <= bound + tol;
            out.push_back(std::move(j));
        }
    }
    return out;
}

std::vector<Json> check_concavity(const RunConfig& cfg) {
    std::vector<double> grid = cfg.orders;
    if (grid.size() < 3) {
        grid.clear();
        for (int i = 0; i < 50; ++i) grid.push_back(0.2 + 4.8 * i / 49.0);
    }
    RunConfig fine = cfg;
    if (!fine.grid_len) fine.grid_len = std::max(renyi::default_grid_len(), renyi::kFineGridLen);
    const auto inputs = load_inputs(fine, *std::min_element(grid.begin(), grid.end()));
    require_inputs(inputs, 1);
    const double tol = cfg.tol.value_or(renyi::kConcavityTolerance);
    std::vector<Json> out;
    for (const auto& in : inputs) {
        const auto p = renyi::concavity_profile(in.density, grid);
        Json j;
        j["kind"] = "check";
        j["suite"] = "concavity";
        j["statement"] = "(1 - r) h_r + log r is concave in r for log-concave f";
        j["density"] = in.label;
        j["r_min"] = num(grid.front());
        j["r_max"] = num(grid.back());
        j["points"] = grid.size();
        j["applicable"] = p.applicable;
        j["worst_second_difference"] = num(p.worst_second_difference);
        j["tol"] = num(tol);
        j["is_concave"] = p.applicable && p.worst_second_difference <= tol;
        j["pass"] = !p.applicable || p.worst_second_difference <= tol;
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<Json> check_derivatives(const RunConfig& cfg) {
    const std::vector<double> orders = cfg.orders.empty() ? std::vector<double>{cfg.order.value_or(2.0)} : cfg.orders;
    const auto inputs = load_inputs(cfg, *std::min_element(orders.begin(), orders.end()) - 0.01);
    require_inputs(inputs, 1);
    const double tol = cfg.tol.value_or(kDerivativeTol);
    std::vector<Json> out;
    for (const auto& in : inputs) {
        for (double r : orders) {
            for (const auto& d : renyi::derivative_identities(in.density, RenyiOrder(r))) {
                Json j;
                j["kind"] = "check";
                j["suite"] = "derivatives";
                j["statement"] = d.identity;
                j["density"] = in.label;
                j["r"] = num(r);
                j["finite_difference"] = num(d.lhs_fd);
                j["analytic"] = num(d.rhs_analytic);
                j["abs_err"] = num(d.abs_err);
                j["tol"] = num(tol);
                j["pass"] = d.abs_err <= tol;
                out.push_back(std::move(j));
            }
        }
    }
    return out;
}

renyi::Transport1D make_transport(const std::string& spec, const RunConfig& cfg) {
    if (spec == "identity") return renyi::Transport1D::identity();
    if (spec == "cubic")
        return renyi::Transport1D::from_map([](double u) { return u * u * u + u; },
                                            [](double u) { return 3.0 * u * u + 1.0; });
    if (spec.rfind("quantile:", 0) == 0) {
        renyi::GridOptions opts;
        opts.grid_len = grid_len(cfg);
        return renyi::quantile_transport(renyi::make_analytic(renyi::parse_family(spec.substr(9)), opts));
    }
    throw renyi::ParseError("unknown transport '" + spec + "' (identity, cubic, quantile:<family>)");
}

std::vector<Json> check_preservation(const RunConfig& cfg) {
    const double r = check_order(cfg);
    const auto inputs = load_inputs(cfg, r);
    if (inputs.size() != 2) throw renyi::ParameterError("preservation needs exactly 2 densities (X*, Y*)");
    const auto t = make_transport(cfg.transport, cfg);
    const double tol = cfg.tol.value_or(kPreservationTol);
    const auto p = renyi::check_preservation(inputs[0].density, inputs[1].density, RenyiOrder(r), t);
    const auto dp = renyi::check_data_processing(inputs[0].density, inputs[1].density, RenyiOrder(r));
    Json j;
    j["kind"] = "check";
    j["suite"] = "preservation";
    j["statement"] = "relative r-entropy is preserved by transport of the escorts";
    j["densities"] = labels_of(inputs);
    j["transport"] = cfg.transport;
    j["r"] = num(r);
    j["delta_src"] = num(p.delta_src);
    j["delta_dst"] = num(p.delta_dst);
    j["abs_err"] = num(p.abs_err);
    j["excluded"] = p.excluded;
    j["tol"] = num(tol);
    Json d;
    d["before"] = num(dp.before);
    d["after_fold"] = num(dp.after);
    d["pass"] = dp.after <= dp.before + tol;
    j["data_processing"] = d;
    j["pass"] = (p.excluded || p.abs_err < tol) && dp.after <= dp.before + tol;
    return {j};
}

std::vector<Json> check_rotation(const RunConfig& cfg) {
    const double lambda = cfg.lambda.empty() ? 0.5 : cfg.lambda.front();
    const auto cov = renyi::rotate_covariance(lambda, {1.0, 0.0, 0.0, 1.0});
    double exact_err = std::max({std::abs(cov[0] - 1.0), std::abs(cov[1]), std::abs(cov[2]), std::abs(cov[3] - 1.0)});
    const auto pairs = renyi::standard_normal_pairs(cfg.samples, cfg.seed);
    const auto rot = renyi::normal_rotation(lambda, pairs[0], pairs[1]);
    const auto& d = rot.diagnostics;
    Json j;
    j["kind"] = "check";
    j["suite"] = "rotation";
    j["statement"] = "rotating i.i.d. standard normals yields i.i.d. standard normals";
    j["lambda"] = num(lambda);
    j["exact_covariance"] = nums(cov);
    j["exact_max_error"] = num(exact_err);
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["mean_x"] = num(d.mean_x);
    j["mean_y"] = num(d.mean_y);
    j["var_x"] = num(d.var_x);
    j["var_y"] = num(d.var_y);
    j["correlation"] = num(d.correlation);
    j["tol"] = num(d.tolerance);
    j["pass"] = d.independent && exact_err <= 4.0 * std::numeric_limits<double>::epsilon();
    return {j};
}

std::vector<Json> cmd_check(const RunConfig& cfg) {
    const auto& s = cfg.suite;
    if (s == "dct") return check_dct(cfg);
    if (s == "repic") return check_repi(cfg, renyi::InequalityId::repic);
    if (s == "repialpha") return check_repi(cfg, renyi::InequalityId::repialpha);
    if (s == "repig") return check_repi(cfg, renyi::InequalityId::repig);
    if (s == "varentropy") return check_varentropy(cfg);
    if (s == "concavity") return check_concavity(cfg);
    if (s == "derivatives") return check_derivatives(cfg);
    if (s == "preservation") return check_preservation(cfg);
    if (s == "rotation") return check_rotation(cfg);
    throw renyi::ParameterError("unknown check suite '" + s + "'");
}

// ---------------------------------------------------------------------------

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    std::string v;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) v += ";";
            v += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
        }
    } else if (j.is_string()) {
        v = j.get<std::string>();
    } else if (j.is_null()) {
        v = "";
    } else {
        v = j.dump();
    }
    out.emplace_back(prefix, v);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_csv(std::ostream& os, const std::vector<Json>& reports) {
    std::vector<std::vector<std::pair<std::string, std::string>>> rows;
    std::vector<std::string> header;
    for (const auto& r : reports) {
        rows.emplace_back();
        flatten(r, "", rows.back());
        for (const auto& [k, v] : rows.back()) {
            if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
        }
    }
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ",";
            for (const auto& [k, v] : row) {
                if (k == header[i]) {
                    os << csv_escape(v);
                    break;
                }
            }
        }
        os << "\n";
    }
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--family", cfg.families, "Analytic densities, name:params (gaussian:1, uniform:0,1, ...)");
    sub->add_option("--csv", cfg.csv_paths, "Density CSV files with columns x,f");
    sub->add_option("--grid-len", cfg.grid_len, "Grid points per density")->check(CLI::Range(std::size_t{64}, std::size_t{1} << 24));
    sub->add_option("--tol", cfg.tol, "Override the pass tolerance");
    sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", cfg.output, "Write the report to this file");
}

} // namespace

std::string canonical(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["suite"] = c.suite;
    j["families"] = c.families;
    j["csv"] = c.csv_paths;
    j["orders"] = nums(c.orders);
    j["order"] = c.order ? num(*c.order) : Json(nullptr);
    j["suborders"] = nums(c.suborders);
    j["lambda"] = nums(c.lambda);
    j["c"] = c.c ? num(*c.c) : Json(nullptr);
    j["alpha"] = c.alpha ? num(*c.alpha) : Json(nullptr);
    j["m"] = c.m;
    j["grid_len"] = grid_len(c);
    j["tol"] = c.tol ? num(*c.tol) : Json(nullptr);
    j["format"] = c.format;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["transport"] = c.transport;
    return j.dump();
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Renyi entropy power toolkit: entropies, optimal constants and inequality checks", "repi"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* entropy = app.add_subcommand("entropy", "Renyi entropies and entropy powers over an order sweep");
    add_common(entropy, cfg);
    entropy->add_option("--orders", cfg.orders, "Comma-separated orders r > 0")->delimiter(',');

    auto* constants = app.add_subcommand("constants", "Closed-form constants over (r, m, alpha)");
    constants->add_option("--orders", cfg.orders, "Comma-separated orders r > 0")->delimiter(',');
    constants->add_option("--m", cfg.m, "Comma-separated numbers of summands")->delimiter(',');
    constants->add_option("--alpha", cfg.alpha, "Exponent for the (c, alpha) constants");
    constants->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    constants->add_option("--output", cfg.output, "Write the report to this file");

    auto* check = app.add_subcommand("check", "Inequality and identity suites");
    check->add_option("suite", cfg.suite, "dct | repic | repialpha | repig | varentropy | concavity | derivatives | preservation | rotation")
        ->required()
        ->check(CLI::IsMember({"dct", "repic", "repialpha", "repig", "varentropy", "concavity", "derivatives",
                               "preservation", "rotation"}));
    add_common(check, cfg);
    check->add_option("--order", cfg.order, "Order r of the check");
    check->add_option("--orders", cfg.orders, "Order sweep (varentropy, concavity, derivatives)")->delimiter(',');
    check->add_option("--suborders", cfg.suborders, "Per-density orders r_i for dct")->delimiter(',');
    check->add_option("--lambda", cfg.lambda, "Simplex weights (dct) or rotation weight")->delimiter(',');
    check->add_option("--c", cfg.c, "Override the constant c");
    check->add_option("--alpha", cfg.alpha, "Override the exponent alpha");
    check->add_option("--seed", cfg.seed, "Seed for Monte Carlo checks");
    check->add_option("--samples", cfg.samples, "Sample count for Monte Carlo checks");
    check->add_option("--transport", cfg.transport, "identity | cubic | quantile:<family>");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsageError;
    }

    if (entropy->parsed()) cfg.command = "entropy";
    else if (constants->parsed()) cfg.command = "constants";
    else cfg.command = "check";

    std::vector<Json> reports;
    try {
        if (cfg.command == "entropy") reports = cmd_entropy(cfg);
        else if (cfg.command == "constants") reports = cmd_constants(cfg);
        else reports = cmd_check(cfg);
    } catch (const renyi::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const renyi::ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const renyi::OrderError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const renyi::HypothesisError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const renyi::SimplexError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const renyi::DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericError;
    }

    std::ostringstream body;
    if (cfg.format == "csv") {
        write_csv(body, reports);
    } else {
        Json doc;
        doc["meta"]["version"] = kVersion;
        doc["meta"]["command"] = cfg.command;
        doc["meta"]["config_hash"] = fnv1a_hex(canonical(cfg));
        doc["reports"] = reports;
        body << doc.dump(2) << "\n";
    }
    if (cfg.output.empty()) {
        out << body.str();
    } else {
        std::ofstream f(cfg.output);
        if (!f) {
            err << "error: cannot write " << cfg.output << "\n";
            return kUsageError;
        }
        f << body.str();
    }

    const bool all_pass = std::all_of(reports.begin(), reports.end(), [](const Json& j) { return j.value("pass", true); });
    return all_pass ? kPass : kInequalityFailure;
}

} // namespace repi
