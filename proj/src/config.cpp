#include "idbounds/config.hpp"

#include "idbounds/errors.hpp"
#include "idbounds/simulators.hpp"
#include "idbounds/verification.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace idbounds::cli {

namespace fs = std::filesystem;

namespace {

const json* find(const json& root, const std::string& path) {
    const json* cur = &root;
    std::stringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.')) {
        if (cur->is_array() && !key.empty() && std::all_of(key.begin(), key.end(), ::isdigit)) {
            std::size_t i = std::stoul(key);
            if (i >= cur->size()) return nullptr;
            cur = &(*cur)[i];
            continue;
        }
        if (!cur->is_object()) return nullptr;
        auto it = cur->find(key);
        if (it == cur->end()) return nullptr;
        cur = &*it;
    }
    return cur;
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    fail(ErrorCode::ConfigError, path + ": " + what);
}

double num(const json& root, const std::string& path) {
    const json* v = find(root, path);
    if (!v) config_error(path, "required field is missing");
    if (!v->is_number()) config_error(path, "expected a number");
    return v->get<double>();
}

double num_or(const json& root, const std::string& path, double def) {
    return find(root, path) ? num(root, path) : def;
}

std::optional<double> num_opt(const json& root, const std::string& path) {
    if (!find(root, path)) return std::nullopt;
    return num(root, path);
}

long long integer(const json& root, const std::string& path) {
    const json* v = find(root, path);
    if (!v) config_error(path, "required field is missing");
    if (!v->is_number_integer() && !(v->is_number() && std::floor(v->get<double>()) == v->get<double>()))
        config_error(path, "expected an integer");
    return v->is_number_integer() ? v->get<long long>() : static_cast<long long>(v->get<double>());
}

long long integer_or(const json& root, const std::string& path, long long def) {
    return find(root, path) ? integer(root, path) : def;
}

std::string text(const json& root, const std::string& path) {
    const json* v = find(root, path);
    if (!v) config_error(path, "required field is missing");
    if (!v->is_string()) config_error(path, "expected a string");
    return v->get<std::string>();
}

std::string text_or(const json& root, const std::string& path, const std::string& def) {
    return find(root, path) ? text(root, path) : def;
}

bool flag_or(const json& root, const std::string& path, bool def) {
    const json* v = find(root, path);
    if (!v) return def;
    if (!v->is_boolean()) config_error(path, "expected true or false");
    return v->get<bool>();
}

template <class E>
E choose(const json& root, const std::string& path, const std::vector<std::pair<std::string, E>>& options,
         std::optional<E> def = std::nullopt) {
    if (!find(root, path)) {
        if (def) return *def;
        config_error(path, "required field is missing");
    }
    std::string s = text(root, path);
    for (const auto& [name, v] : options)
        if (name == s) return v;
    std::string allowed;
    for (const auto& o : options) allowed += (allowed.empty() ? "" : ", ") + o.first;
    config_error(path, "unknown value '" + s + "' (allowed: " + allowed + ")");
}

// Re-raises module errors with the originating operation name.
template <class F>
auto stage(const std::string& op, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        throw Error(e.code(), op + ": " + e.what());
    }
}

std::optional<EigenGenerator> generator_from(const json& cfg) {
    if (!find(cfg, "model.generator")) return std::nullopt;
    EigenGenerator g;
    g.kind = choose<EigenKind>(cfg, "model.generator.kind",
                               {{"square_norm", EigenKind::square_norm}, {"sample_variance", EigenKind::sample_variance}});
    g.T = num(cfg, "model.generator.T");
    if (!(g.T > 0.0)) config_error("model.generator.T", "must be positive");
    return g;
}

int generator_N(const json& cfg) {
    long long N = integer(cfg, "model.generator.N");
    if (N < 1) config_error("model.generator.N", "must be >= 1");
    return static_cast<int>(N);
}

std::vector<double> eigs_from(const json& cfg) {
    const json* e = find(cfg, "model.eigs");
    if (!e->is_array() || e->empty()) config_error("model.eigs", "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < e->size(); ++i) {
        if (!(*e)[i].is_number()) config_error("model.eigs[" + std::to_string(i) + "]", "expected a number");
        out.push_back((*e)[i].get<double>());
    }
    return out;
}

QuadraticSpec quad_spec_from(const json& cfg, int n_components) {
    SumSqConvention conv = choose<SumSqConvention>(
        cfg, "bound.sum_sq", {{"computed", SumSqConvention::computed}, {"literal", SumSqConvention::literal}},
        SumSqConvention::computed);
    if (auto g = generator_from(cfg)) return make_quadratic_spec(*g, generator_N(cfg), n_components, conv);
    if (!find(cfg, "model.eigs")) config_error("model.eigs", "quadratic model needs eigs or generator");
    auto e = eigs_from(cfg);
    return make_quadratic_spec(std::vector<std::vector<double>>(static_cast<std::size_t>(n_components), e));
}

double model_T(const json& cfg) {
    double T = num(cfg, "model.T");
    if (!(T > 0.0)) config_error("model.T", "must be positive");
    return T;
}

TailBound build_bound(const json& cfg, std::optional<double> mean_abs_estimate) {
    std::string name = text(cfg, "bound.name");
    auto mean_abs = [&]() -> std::optional<double> {
        if (auto v = num_opt(cfg, "bound.mean_abs")) return v;
        return mean_abs_estimate;
    };
    if (name == "dev_nico") return dev_nico_bound(num(cfg, "bound.K"), num(cfg, "bound.alpha2"));
    if (name == "quad_wiener") {
        QuadraticSpec s = quad_spec_from(cfg, static_cast<int>(integer_or(cfg, "bound.n", 1)));
        auto form = choose<QuadForm>(cfg, "bound.form",
                                     {{"exact_h", QuadForm::exact_h}, {"log_form", QuadForm::log_form}, {"min_form", QuadForm::min_form}});
        auto target = choose<QuadTarget>(cfg, "bound.target", {{"lipschitz", QuadTarget::lipschitz}, {"sup", QuadTarget::sup}},
                                         QuadTarget::lipschitz);
        return quad_wiener_bound(s, num_or(cfg, "bound.c", 1.0), form, target);
    }
    if (name == "quad_wiener_lower") {
        auto target = choose<LowerTarget>(cfg, "bound.target",
                                          {{"inf_norm", LowerTarget::inf_norm}, {"sup", LowerTarget::sup}}, LowerTarget::inf_norm);
        QuadraticSpec s = quad_spec_from(cfg, static_cast<int>(integer_or(cfg, "bound.n", 1)));
        return quad_wiener_lower(s, num(cfg, "bound.b"), target);
    }
    if (name == "quad_euclid_iid") {
        QuadraticSpec s = quad_spec_from(cfg, static_cast<int>(integer_or(cfg, "bound.n", 1)));
        s.mean_abs = mean_abs();
        return quad_euclid_iid_bound(s, num(cfg, "bound.b"));
    }
    if (name == "levy_area") {
        return levy_area_bound(model_T(cfg), static_cast<int>(integer_or(cfg, "bound.n", 1)), num_or(cfg, "bound.c", 1.0),
                               0.5, AreaVariant::lipschitz);
    }
    if (name == "levy_area_euclid") {
        return levy_area_bound(model_T(cfg), static_cast<int>(integer_or(cfg, "bound.n", 1)), num_or(cfg, "bound.c", 1.0),
                               num(cfg, "bound.b"), AreaVariant::euclid, mean_abs());
    }
    if (name == "levy_area_lower") {
        AreaParams ap{model_T(cfg), static_cast<int>(integer_or(cfg, "bound.n", 1))};
        QuadraticSpec dummy = make_quadratic_spec({{1.0}});
        return quad_wiener_lower(dummy, num(cfg, "bound.b"), LowerTarget::area, ap);
    }
    if (name == "two_regime") {
        auto v = choose<TwoRegimeVariant>(cfg, "bound.variant", {{"bis2", TwoRegimeVariant::bis2}, {"bis", TwoRegimeVariant::bis}});
        return two_regime_bound(num(cfg, "bound.K"), num(cfg, "bound.alpha2"), num(cfg, "bound.alpha3"),
                                num(cfg, "bound.alpha4"), v);
    }
    if (name == "bounded_support_norm") {
        return bounded_support_norm_bound(num(cfg, "bound.beta"), num(cfg, "bound.R"), num(cfg, "bound.second_moment"),
                                          num(cfg, "bound.mean_abs_f1"));
    }
    if (name == "stable_median") {
        StableSpec s{num(cfg, "model.alpha"), num(cfg, "model.sigma_total"), num_or(cfg, "bound.c", 1.0)};
        auto v = choose<StableVariant>(cfg, "bound.variant",
                                       {{"hm", StableVariant::hm},
                                        {"bis2", StableVariant::bis2},
                                        {"bis", StableVariant::bis},
                                        {"near2_exp", StableVariant::near2_exp}});
        return stable_median_bound(s, v, num_or(cfg, "bound.epsilon", 0.1));
    }
    if (name == "id_lower") return id_lower_tail(model_from_config(cfg));
    if (name == "median_linear")
        return median_bound_linear(model_from_config(cfg), num(cfg, "bound.c_prime"), num(cfg, "bound.C"));
    config_error("bound.name", "unknown bound '" + name + "'");
}

std::vector<double> grid_from(const json& cfg, bool audit) {
    double lo = num(cfg, "grid.x_lo"), hi = num(cfg, "grid.x_hi");
    long long pts = integer(cfg, "grid.points");
    if (pts < 1) config_error("grid.points", "must be >= 1");
    if (audit && pts > 20) config_error("grid.points", "audit grids are capped at 20 points");
    if (!(hi >= lo)) config_error("grid.x_hi", "must be >= grid.x_lo");
    return linear_grid(lo, hi, static_cast<int>(pts));
}

fs::path out_dir(const json& cfg) {
    fs::path p = text_or(cfg, "out.dir", "out");
    fs::create_directories(p);
    return p;
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + p.string());
    out << j.dump(2) << "\n";
}

RngSpec rng_from(const json& cfg) {
    RngSpec r;
    r.seed = static_cast<std::uint64_t>(integer_or(cfg, "mc.seed", 1));
    r.stream = static_cast<std::uint64_t>(integer_or(cfg, "mc.stream", 0));
    return r;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

RunOutcome run_bound(const json& cfg) {
    auto grid = grid_from(cfg, false);
    fs::path dir = out_dir(cfg);
    std::ofstream csv(dir / "bound.csv");
    csv << "x,bound,regime,valid\n";
    json summary;
    if (text(cfg, "bound.name") == "stable_median" && text_or(cfg, "bound.variant", "") == "near2_log") {
        StableSpec s{num(cfg, "model.alpha"), num(cfg, "model.sigma_total"), num_or(cfg, "bound.c", 1.0)};
        PointBound pb = stage("stable_near2_log", [&] { return stable_near2_log(s, num(cfg, "bound.b"), num_or(cfg, "bound.epsilon", 0.1)); });
        csv << fmt(pb.x) << "," << fmt(pb.value.value) << "," << pb.value.regime << ",1\n";
        summary["bound"] = "stable:near2_log";
        summary["x"] = pb.x;
        summary["value"] = pb.value.value;
        summary["vacuous"] = pb.value.vacuous;
    } else {
        TailBound b = stage("bound_from_config", [&] { return build_bound(cfg, std::nullopt); });
        summary["bound"] = b.name;
        summary["center"] = center_name(b.center);
        summary["direction"] = direction_name(b.direction);
        summary["valid_lo"] = b.valid_lo;
        summary["valid_hi"] = std::isinf(b.valid_hi) ? json("inf") : json(b.valid_hi);
        summary["status"] = b.empty() ? "EmptyRange" : "ok";
        for (double x : grid) {
            if (b.empty() || !b.in_range(x) || !(x > 0.0)) {
                csv << fmt(x) << ",nan,,0\n";
                continue;
            }
            BoundValue v = stage("evaluate " + b.name, [&] { return b.evaluate(x); });
            csv << fmt(x) << "," << fmt(v.value) << "," << v.regime << ",1\n";
        }
    }
    summary["config"] = cfg;
    write_json(dir / "bound.json", summary);
    return {kExitOk, summary};
}

SampleBatch simulate(const json& cfg) {
    std::string variant = text(cfg, "model.variant");
    long long count_ll = integer(cfg, "mc.count");
    if (count_ll < 1) config_error("mc.count", "must be >= 1");
    auto count = static_cast<std::size_t>(count_ll);
    RngSpec rng = rng_from(cfg);
    SimOptions so;
    so.threads = static_cast<int>(integer_or(cfg, "mc.threads", 0));
    std::string def = variant == "quadratic" ? "chaos2" : variant == "levy_area" ? "levy_area" : variant == "stable" ? "stable" : "compound";
    std::string sampler = text_or(cfg, "mc.sampler", def);
    if (sampler == "chaos2") {
        if (variant != "quadratic") config_error("mc.sampler", "chaos2 needs a quadratic model");
        double tol = num_or(cfg, "mc.remainder_tol", 1e-8);
        if (auto g = generator_from(cfg))
            return stage("sample_chaos2", [&] { return sample_chaos2(*g, generator_N(cfg), count, rng, tol, so); });
        if (!find(cfg, "model.eigs")) config_error("model.eigs", "quadratic model needs eigs or generator");
        auto e = eigs_from(cfg);
        return stage("sample_chaos2", [&] { return sample_chaos2(e, count, rng, 0.0, tol, so); });
    }
    if (sampler == "brownian") {
        auto g = generator_from(cfg);
        if (!g) config_error("model.generator", "brownian sampler needs a generator");
        int steps = static_cast<int>(integer(cfg, "mc.steps"));
        return stage("sample_brownian_quadratic", [&] { return sample_brownian_quadratic(g->kind, g->T, steps, count, rng, so); });
    }
    if (sampler == "levy_area") {
        if (variant != "levy_area") config_error("mc.sampler", "levy_area sampler needs a levy_area model");
        double T = model_T(cfg);
        int steps = static_cast<int>(integer_or(cfg, "mc.steps", 4096));
        long long n = integer_or(cfg, "model.n", 1);
        if (n < 1) config_error("model.n", "must be >= 1");
        // n independent coordinates: consecutive draws of one stream, reshaped row-major
        SampleBatch b = stage("sample_levy_area", [&] { return sample_levy_area(T, steps, count * n, rng, so); });
        b.dim = static_cast<int>(n);
        b.count = count;
        b.params["n"] = std::to_string(n);
        return b;
    }
    if (sampler == "stable") {
        if (variant != "stable") config_error("mc.sampler", "stable sampler needs a stable model");
        StableSampler s;
        s.alpha = num(cfg, "model.alpha");
        s.sigma_total = num(cfg, "model.sigma_total");
        s.n = static_cast<int>(integer_or(cfg, "model.n", 1));
        s.spherical = choose<Spherical>(cfg, "model.spherical", {{"uniform", Spherical::uniform}, {"axes", Spherical::axes}},
                                        Spherical::uniform);
        return stage("sample_stable", [&] { return sample_stable(s, count, rng, so); });
    }
    if (sampler == "compound") {
        LevyModel m = model_from_config(cfg);
        CompoundOptions co;
        co.gauss_smalljump = flag_or(cfg, "mc.gauss_smalljump", false);
        double eps = num(cfg, "mc.eps");
        return stage("sample_id_compound", [&] { return sample_id_compound(m, eps, count, rng, co, so); });
    }
    config_error("mc.sampler", "unknown sampler '" + sampler + "'");
}

json batch_summary(const SampleBatch& b) {
    auto v = b.dim == 1 ? b.values : b.column(0);
    MeanEstimate me = empirical_mean(v);
    MedianEstimate md = empirical_median(v);
    json s;
    s["sampler"] = b.sampler;
    s["params"] = b.params;
    s["seed"] = b.seed;
    s["stream"] = b.stream_id;
    s["count"] = b.count;
    s["dim"] = b.dim;
    s["mean"] = me.mean;
    s["mean_se"] = me.se;
    s["median"] = md.median;
    s["median_ci"] = {md.ci_lo, md.ci_hi};
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    s["min"] = *mn;
    s["max"] = *mx;
    return s;
}

RunOutcome run_simulate(const json& cfg) {
    SampleBatch b = simulate(cfg);
    fs::path dir = out_dir(cfg);
    std::string format = text_or(cfg, "out.format", "csv");
    if (format == "csv") write_batch_csv(b, (dir / "samples.csv").string());
    else if (format == "binary") write_batch_binary(b, (dir / "samples.bin").string());
    else config_error("out.format", "expected csv or binary");
    json s = batch_summary(b);
    s["config"] = cfg;
    write_json(dir / "summary.json", s);
    return {kExitOk, s};
}

RunOutcome run_verify(const json& cfg) {
    auto grid = grid_from(cfg, true);
    std::string name = text(cfg, "bound.name");
    // norm bounds audit |F|_2 - 2E|F|_2; the id lower bound audits |F - m|_2
    bool norm_bound = name == "levy_area_euclid" || name == "quad_euclid_iid" || name == "bounded_support_norm";
    bool median_norm = name == "id_lower";
    SampleBatch batch = simulate(cfg);
    std::vector<double> v;
    if (norm_bound) {
        v = batch.norms();
    } else if (median_norm) {
        SampleBatch shifted = batch;
        for (int d = 0; d < batch.dim; ++d) {
            double m = empirical_median(batch.column(d)).median;
            for (std::size_t i = 0; i < batch.count; ++i) shifted.values[i * batch.dim + d] -= m;
        }
        v = shifted.norms();
    } else {
        v = batch.dim == 1 ? batch.values : batch.column(0);
    }
    std::optional<double> mean_abs;
    double abs_se = 0.0;
    if (norm_bound) {
        MeanEstimate m = empirical_mean(v);
        mean_abs = m.mean;
        abs_se = m.se;
    }
    TailBound b = stage("bound_from_config", [&] { return build_bound(cfg, mean_abs); });
    double center = 0.0, center_se = 0.0;
    if (norm_bound || median_norm) {
        center = 0.0;
    } else if (b.center == Center::median) {
        center = empirical_median(v).median;
    } else {
        MeanEstimate m = empirical_mean(v);
        center = m.mean;
        center_se = m.se;
    }
    AuditOptions ao;
    ao.min_p_hat = num_or(cfg, "audit.min_p_hat", 0.0);
    ao.center_se = center_se;
    double shift = 0.0;
    if (b.center == Center::shifted_mean) {
        if (!mean_abs) fail(ErrorCode::CenterMismatch, b.name + ": shift needs an estimate of the mean norm");
        shift = 2.0 * *mean_abs;
        ao.shift = shift;
        ao.shift_se = 2.0 * abs_se;
    }
    std::vector<double> raw(grid.size());
    std::transform(grid.begin(), grid.end(), raw.begin(), [&](double x) { return x + center + shift; });
    double level = num_or(cfg, "audit.level", 0.99);
    TailCurve curve = stage("empirical_tail", [&] { return empirical_tail(v, raw, level); });
    VerificationReport r = stage("audit_bound", [&] { return audit_bound(curve, b, center, ao); });
    fs::path dir = out_dir(cfg);
    write_report_csv(r, (dir / "report.csv").string());
    json j = json::parse(report_json(r));
    j["sample"] = batch_summary(batch);
    if (mean_abs) j["mean_abs"] = {{"estimate", *mean_abs}, {"se", abs_se}};
    if (find(cfg, "audit.slope_window")) {
        const json& w = *find(cfg, "audit.slope_window");
        if (!w.is_array() || w.size() != 2) config_error("audit.slope_window", "expected [x_lo, x_hi]");
        SlopeFit f = stage("fit_log_slope", [&] { return fit_log_slope(curve, w[0].get<double>() + center, w[1].get<double>() + center); });
        j["slope_fit"] = {{"estimate", f.slope}, {"stderr", f.stderr_}, {"points", f.points}, {"window", w}};
    }
    j["config"] = cfg;
    write_json(dir / "report.json", j);
    return {r.overall == Verdict::violation ? kExitViolation : kExitOk, j};
}

void set_path(json& root, const std::string& path, const json& value) {
    json* cur = &root;
    std::stringstream ss(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(ss, key, '.')) keys.push_back(key);
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) cur = &(*cur)[keys[i]];
    (*cur)[keys.back()] = value;
}

RunOutcome run_sweep(const json& cfg) {
    const json* params = find(cfg, "sweep.params");
    if (!params || !params->is_object() || params->empty())
        config_error("sweep.params", "expected an object mapping field paths to value lists");
    std::string task = text_or(cfg, "sweep.task", "bound");
    if (task == "sweep") config_error("sweep.task", "nested sweeps are not supported");
    std::vector<std::string> keys;
    std::vector<std::vector<json>> values;
    for (auto it = params->begin(); it != params->end(); ++it) {
        if (!it.value().is_array() || it.value().empty())
            config_error("sweep.params." + it.key(), "expected a non-empty array");
        keys.push_back(it.key());
        values.emplace_back(it.value().begin(), it.value().end());
    }
    fs::path base = out_dir(cfg);
    std::vector<std::size_t> idx(keys.size(), 0);
    json cells = json::array();
    int exit_code = kExitOk;
    for (std::size_t cell = 0;; ++cell) {
        json c = cfg;
        c.erase("sweep");
        c["task"] = task;
        json assignment;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            set_path(c, keys[k], values[k][idx[k]]);
            assignment[keys[k]] = values[k][idx[k]];
        }
        char name[32];
        std::snprintf(name, sizeof name, "cell_%04zu", cell);
        c["out"]["dir"] = (base / name).string();
        RunOutcome o = run(c);
        exit_code = std::max(exit_code, o.exit_code);
        cells.push_back({{"cell", name}, {"assignment", assignment}, {"exit_code", o.exit_code}});
        std::size_t k = 0;
        for (; k < keys.size(); ++k) {
            if (++idx[k] < values[k].size()) break;
            idx[k] = 0;
        }
        if (k == keys.size()) break;
    }
    json s{{"task", "sweep"}, {"cells", cells}, {"config", cfg}};
    write_json(base / "sweep.json", s);
    return {exit_code, s};
}

} // namespace

json effective_config(json cfg, const Overrides& o) {
    if (!cfg.is_object()) fail(ErrorCode::ConfigError, "config: expected a JSON object");
    if (o.seed) cfg["mc"]["seed"] = *o.seed;
    if (o.count) cfg["mc"]["count"] = *o.count;
    if (o.out) cfg["out"]["dir"] = *o.out;
    return cfg;
}

LevyModel model_from_config(const json& cfg) {
    std::string v = text(cfg, "model.variant");
    return stage("model_from_config", [&]() -> LevyModel {
        if (v == "stable") return make_stable(num(cfg, "model.alpha"), num(cfg, "model.sigma_total"));
        if (v == "log_kernel") return make_log_kernel(num(cfg, "model.sigma_total"));
        if (v == "gauss_kernel") return make_gauss_kernel(num(cfg, "model.sigma_total"));
        if (v == "levy_area") return make_levy_area(model_T(cfg));
        if (v == "quadratic") {
            if (auto g = generator_from(cfg)) return make_quadratic(*g, generator_N(cfg));
            if (!find(cfg, "model.eigs")) config_error("model.eigs", "quadratic model needs eigs or generator");
            return make_quadratic(eigs_from(cfg));
        }
        if (v == "bounded_support") {
            const json* m = find(cfg, "model.abs_moments");
            if (!m || !m->is_array() || m->size() != 4) config_error("model.abs_moments", "expected four numbers");
            std::array<double, 4> am{};
            for (std::size_t i = 0; i < 4; ++i) am[i] = num(cfg, "model.abs_moments." + std::to_string(i));
            return make_bounded_support(num(cfg, "model.R_support"), am);
        }
        config_error("model.variant", "unknown model '" + v + "'");
    });
}

TailBound bound_from_config(const json& cfg) { return build_bound(cfg, std::nullopt); }

RunOutcome run(const json& cfg) {
    std::string task = text(cfg, "task");
    if (task == "bound") return run_bound(cfg);
    if (task == "simulate") return run_simulate(cfg);
    if (task == "verify") return run_verify(cfg);
    if (task == "sweep") return run_sweep(cfg);
    config_error("task", "unknown task '" + task + "' (allowed: bound, simulate, verify, sweep)");
}

int run_main(const json& cfg, std::ostream& log, std::ostream& err) {
    try {
        RunOutcome o = run(cfg);
        log << "task " << cfg.value("task", "?") << " finished with exit code " << o.exit_code << "\n";
        return o.exit_code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "config: cannot open " + path);
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ConfigError, std::string("config: parse error: ") + e.what());
    }
}

} // namespace idbounds::cli
