#include "vvlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "vvlab/biot_savart.hpp"
#include "vvlab/cutoff.hpp"
#include "vvlab/field.hpp"
#include "vvlab/norms.hpp"
#include "vvlab/quadrature.hpp"
#include "vvlab/truncation.hpp"

namespace vvlab {

using json = nlohmann::ordered_json;
using std::numbers::pi;

namespace {

constexpr const char* kVersion = "vvlab 0.1.0";
constexpr const char* kSchemaVersion = "1";
constexpr const char* kSigmaBump = "exp(1 - 1/(1 - (r/R0)^2)) scaled to mass m on [0, R0)";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
    std::vector<double> grid;
    std::istringstream ss(text);
    double v;
    while (ss >> v) grid.push_back(v);
    if (!ss.eof()) throw ConfigError("config field '" + key + "': not a number list");
    return grid;
}

void require_geometric(const std::vector<double>& grid, const std::string& key) {
    if (grid.size() < 2) return;
    for (double v : grid)
        if (v <= 0) throw ConfigError("config field '" + key + "': entries must be positive");
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    const double ratio = sorted[1] / sorted[0];
    if (ratio < 2.0 - 1e-9)
        throw ConfigError("config field '" + key + "': geometric ratio must be >= 2");
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        if (std::abs(sorted[i + 1] / sorted[i] - ratio) > 1e-6 * ratio)
            throw ConfigError("config field '" + key + "': grid must be geometric");
}

json fit_to_json(const RateFit& fit) {
    json j;
    j["quantity"] = fit.quantity;
    j["predicted"] = fit.predicted;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["max_residual"] = fit.max_residual;
    j["semantics"] = fit.semantics == FitSemantics::upper_bound ? "upper-bound" : "sharp";
    j["vacuous"] = fit.vacuous;
    j["pass"] = fit.pass;
    json pts = json::array();
    for (size_t i = 0; i < fit.abscissa.size(); ++i)
        pts.push_back({{"x", fit.abscissa[i]}, {"value", fit.values[i]}});
    j["points"] = pts;
    return j;
}

struct CheckRow {
    std::string name;
    double value;
    double threshold;
    bool less_than;  // pass iff value <= threshold (else >=)
    bool pass;
};

json check_to_json(const CheckRow& c) {
    json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["threshold"] = c.threshold;
    j["comparison"] = c.less_than ? "<=" : ">=";
    j["pass"] = c.pass;
    return j;
}

CheckRow make_check(std::string name, double value, double threshold, bool less_than) {
    CheckRow c{std::move(name), value, threshold, less_than, false};
    c.pass = less_than ? value <= threshold : value >= threshold;
    return c;
}

// 2 pi periodic inner products over the disk by polar panel quadrature
double disk_inner_product(const std::function<Vec2(Vec2)>& f,
                          const std::function<Vec2(Vec2)>& g, double R,
                          int rpanels, int angles) {
    auto redges = make_panels(0.0, R, {}, rpanels);
    auto gx = gauss_nodes(16);
    auto gw = gauss_weights(16);
    double acc = 0;
    for (size_t p = 0; p + 1 < redges.size(); ++p) {
        const double rm = 0.5 * (redges[p] + redges[p + 1]);
        const double rh = 0.5 * (redges[p + 1] - redges[p]);
        for (size_t i = 0; i < gx.size(); ++i) {
            const double rho = rm + rh * gx[i];
            const double wr = gw[i] * rh * rho * (2 * pi / angles);
            for (int j = 0; j < angles; ++j) {
                const double ang = 2 * pi * (j + 0.5) / angles;
                const Vec2 x{rho * std::cos(ang), rho * std::sin(ang)};
                acc += wr * f(x).dot(g(x));
            }
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// truncation rate sweeps

struct SweepResult {
    std::map<std::string, std::vector<double>> rows;
    std::vector<RateFit> fits;
};

SweepResult truncation_rates_2d(const ReferenceFlow& flow, const DomainSpec& base,
                                double theta, const std::vector<double>& R_grid,
                                double scale,
                                std::optional<StreamNormalization> normalization) {
    SweepResult out;
    QuadratureOptions q;
    q.scale = scale;
    const double m = flow.flow2d->mass();
    const double alpha = alpha_exponent(2, theta, m);
    const double beta = beta_exponent(2, theta, m);

    for (double R : R_grid) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(base, theta, R));
        auto tf = truncate_2d(flow.flow2d, cutoff, normalization);
        if (tf.radial()) {
            const auto& pr = *flow.flow2d->primary().profile;
            const double w = cutoff->collar_width();
            const double edge = R - w;
            std::vector<double> bp{R - 0.5 * w};
            (void)pr;
            out.rows["diff_L2"].push_back(
                norm_radial_2d([&](double r) { return std::abs(tf.diff_radial(r)); },
                               edge, R, bp, NormKind::L2, q)
                    .value);
            out.rows["stream_term_L2"].push_back(
                norm_radial_2d(
                    [&](double r) { return std::abs(tf.stream_term_radial(r)); }, edge,
                    R, bp, NormKind::L2, q)
                    .value);
            out.rows["grad_diff_L2"].push_back(
                norm_radial_2d(
                    [&](double rho) {
                        const double d = tf.diff_radial(rho), dd = tf.diff_radial_d(rho);
                        return rho > 0 ? std::sqrt(dd * dd + d * d / (rho * rho))
                                       : std::abs(dd);
                    },
                    edge, R, bp, NormKind::L2, q)
                    .value);
        } else {
            out.rows["diff_L2"].push_back(
                norm_collar_2d([&](Vec2 x) { return tf.diff(x).norm(); },
                               cutoff->chart(), NormKind::L2, q)
                    .value);
            out.rows["stream_term_L2"].push_back(
                norm_collar_2d([&](Vec2 x) { return tf.stream_term(x).norm(); },
                               cutoff->chart(), NormKind::L2, q)
                    .value);
            out.rows["grad_diff_L2"].push_back(
                norm_collar_2d([&](Vec2 x) { return tf.grad_diff(x).frobenius(); },
                               cutoff->chart(), NormKind::L2, q)
                    .value);
        }
    }
    out.fits.push_back(fit_rate(R_grid, out.rows["diff_L2"], -alpha,
                                FitSemantics::upper_bound, "u - T_R u L2"));
    out.fits.push_back(fit_rate(R_grid, out.rows["stream_term_L2"], -alpha,
                                FitSemantics::upper_bound, "u^R - phi u L2"));
    out.fits.push_back(fit_rate(R_grid, out.rows["grad_diff_L2"], -beta,
                                FitSemantics::upper_bound, "grad(u - T_R u) L2"));
    return out;
}

SweepResult truncation_rates_3d(const ReferenceFlow& flow,
                                const std::vector<double>& R_grid, double scale) {
    SweepResult out;
    QuadratureOptions q;
    q.scale = scale;
    DomainSpec ball{3, Shape::disk, 1, 1, 1};
    for (double R : R_grid) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(ball, 1.0, R));
        auto tf = truncate_3d(flow.flow3d, cutoff);
        const double w = cutoff->collar_width();
        const double edge = R - w;
        std::vector<double> bp{R - 0.5 * w};
        auto at = [](double rho, double z) { return Vec3{rho, 0.0, z}; };
        out.rows["diff_L2"].push_back(
            norm_shell_3d([&](double rho, double z) { return tf.diff(at(rho, z)).norm(); },
                          edge, R, NormKind::L2, q, bp)
                .value);
        out.rows["stream_term_L2"].push_back(
            norm_shell_3d(
                [&](double rho, double z) { return tf.stream_term(at(rho, z)).norm(); },
                edge, R, NormKind::L2, q, bp)
                .value);
        out.rows["grad_diff_L2"].push_back(
            norm_shell_3d(
                [&](double rho, double z) { return tf.grad_diff(at(rho, z)).frobenius(); },
                edge, R, NormKind::L2, q, bp)
                .value);
    }
    out.fits.push_back(fit_rate(R_grid, out.rows["diff_L2"], -0.5,
                                FitSemantics::upper_bound, "u - T_R u L2"));
    out.fits.push_back(fit_rate(R_grid, out.rows["stream_term_L2"], -0.5,
                                FitSemantics::upper_bound, "u^R - phi u L2"));
    out.fits.push_back(fit_rate(R_grid, out.rows["grad_diff_L2"], -1.5,
                                FitSemantics::upper_bound, "grad(u - T_R u) L2"));
    return out;
}

// ---------------------------------------------------------------------------

std::string csv_rates(const std::string& kind, const std::string& flow, double theta,
                      const std::vector<double>& R_grid, const SweepResult& sweep) {
    std::ostringstream os;
    os << "experiment,flow,theta,quantity,R,value\n";
    for (const auto& [name, vals] : sweep.rows)
        for (size_t i = 0; i < vals.size(); ++i)
            os << kind << ',' << flow << ',' << fmt(theta) << ',' << name << ','
               << fmt(R_grid[i]) << ',' << fmt(vals[i]) << '\n';
    return os.str();
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{
        "truncation-rates-2d", "truncation-rates-3d", "decay-probe",
        "lemma81-probe",       "projection-equivalence", "prop51-report",
        "theorem11-surface",   "non-disk-failure"};
    return kinds;
}

ExperimentConfig ExperimentConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        cfg.raw[key] = value;
    }

    auto get = [&](const char* key) -> const std::string* {
        auto it = cfg.raw.find(key);
        return it == cfg.raw.end() ? nullptr : &it->second;
    };
    auto number = [&](const char* key, double& dst) {
        if (auto* v = get(key)) {
            try {
                size_t pos = 0;
                dst = std::stod(*v, &pos);
                if (pos != v->size()) throw std::invalid_argument("");
            } catch (...) {
                throw ConfigError(std::string("config field '") + key + "': not a number");
            }
        }
    };
    auto integer = [&](const char* key, int& dst) {
        double d = dst;
        number(key, d);
        dst = static_cast<int>(std::lround(d));
    };

    if (auto* v = get("experiment")) cfg.kind = *v;
    if (auto* v = get("flow")) cfg.flow = *v;
    if (auto* v = get("shape")) cfg.shape = *v;
    number("ellipse_a", cfg.ellipse_a);
    number("ellipse_b", cfg.ellipse_b);
    number("theta", cfg.theta);
    number("T", cfg.T);
    number("resolution_scale", cfg.resolution_scale);
    number("nu_marginal_R_factor", cfg.nu_marginal_R_factor);
    integer("base_nodes", cfg.base_nodes);
    integer("steps", cfg.steps);
    integer("jobs", cfg.jobs);
    if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
    if (auto* v = get("out")) cfg.out = *v;
    if (auto* v = get("R_grid")) cfg.R_grid = parse_grid(*v, "R_grid");
    if (auto* v = get("nu_grid")) cfg.nu_grid = parse_grid(*v, "nu_grid");
    if (auto* v = get("nu_marginal_grid"))
        cfg.nu_marginal_grid = parse_grid(*v, "nu_marginal_grid");
    return cfg;
}

void ExperimentConfig::validate() const {
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw ConfigError("config field 'experiment': unknown kind '" + kind + "'");
    if (theta < 0.0 || theta > 1.0)
        throw ConfigError("config field 'theta': must lie in [0, 1]");
    if (shape != "disk" && shape != "ellipse")
        throw ConfigError("config field 'shape': must be 'disk' or 'ellipse'");
    if (shape == "ellipse" && (ellipse_a <= 0 || ellipse_b <= 0))
        throw ConfigError("config field 'ellipse_a/ellipse_b': must be positive");
    if (T < 0) throw ConfigError("config field 'T': must be >= 0");
    if (resolution_scale <= 0)
        throw ConfigError("config field 'resolution_scale': must be positive");
    if (jobs < 1) throw ConfigError("config field 'jobs': must be >= 1");
    if (!flow.empty()) {
        bool found = false;
        for (const auto& f : catalog()) found |= f.name == flow;
        if (!found) throw ConfigError("config field 'flow': unknown flow '" + flow + "'");
    }
    require_geometric(R_grid, "R_grid");
    // nu grids may contain 0 (frozen column); geometric check on the rest
    std::vector<double> positive;
    for (double v : nu_grid)
        if (v > 0) positive.push_back(v);
    require_geometric(positive, "nu_grid");
}

RunManifest run(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["version"] = kVersion;
    manifest["experiment"] = config.kind;
    json echo;
    for (const auto& [k, v] : config.raw) echo[k] = v;
    manifest["config"] = echo;
    manifest["seed"] = config.seed;
    {
        json dom;
        dom["shape"] = config.shape;
        if (config.shape == "ellipse") {
            dom["a"] = config.ellipse_a;
            dom["b"] = config.ellipse_b;
        }
        dom["theta"] = config.theta;
        manifest["domain"] = dom;
    }

    std::vector<RateFit> fits;
    std::vector<CheckRow> checks;
    RunManifest out;

    DomainSpec base{2, config.shape == "disk" ? Shape::disk : Shape::ellipse,
                    config.ellipse_a, config.ellipse_b, 1.0};

    if (config.kind == "truncation-rates-2d") {
        const auto& flow = flow_by_name(config.flow.empty() ? "patch-I-off" : config.flow);
        if (flow.dimension != 2) throw ConfigError("config field 'flow': expected a 2D flow");
        auto R = config.R_grid.empty() ? std::vector<double>{16, 32, 64, 128} : config.R_grid;
        auto sweep = truncation_rates_2d(flow, base, config.theta, R,
                                         config.resolution_scale, {});
        fits = sweep.fits;
        out.csv["results.csv"] = csv_rates(config.kind, flow.name, config.theta, R, sweep);
        manifest["flow"] = flow.name;
        manifest["R_grid"] = R;
    } else if (config.kind == "truncation-rates-3d") {
        const auto& flow = flow_by_name(config.flow.empty() ? "hill-III" : config.flow);
        if (flow.dimension != 3) throw ConfigError("config field 'flow': expected a 3D flow");
        auto R = config.R_grid.empty() ? std::vector<double>{8, 16, 32, 64} : config.R_grid;
        auto sweep = truncation_rates_3d(flow, R, config.resolution_scale);
        fits = sweep.fits;
        out.csv["results.csv"] = csv_rates(config.kind, flow.name, 1.0, R, sweep);
        manifest["flow"] = flow.name;
        manifest["R_grid"] = R;
    } else if (config.kind == "decay-probe") {
        std::mt19937_64 rng(config.seed);
        const double ray_angle =
            std::uniform_real_distribution<double>(0.15, 2 * pi)(rng);
        manifest["ray_angle"] = ray_angle;
        const auto& flow = flow_by_name(config.flow.empty() ? "patch-I-off" : config.flow);
        manifest["flow"] = flow.name;
        std::ostringstream csv;
        csv << "experiment,flow,quantity,radius,value\n";
        if (flow.dimension == 2) {
            // probe the zero-mass part: v itself when m = 0, else u - sigma
            Flow2D v = *flow.flow2d;
            double R0 = v.support_radius();
            if (std::abs(v.mass()) > 1e-12) {
                auto dec = em_decompose(CompactVorticity::from_flow(flow.flow2d));
                v = dec.v_part;
                manifest["sigma_bump"] = kSigmaBump;
            }
            const Vec2 dir{std::cos(ray_angle), std::sin(ray_angle)};
            auto record = [&](const char* name, const std::function<double(double)>& mag,
                              double predicted) {
                RateFit f = ray_decay_fit(mag, 2 * R0, 2.0, 6, predicted,
                                          FitSemantics::upper_bound, name);
                for (size_t i = 0; i < f.abscissa.size(); ++i)
                    csv << config.kind << ',' << flow.name << ',' << name << ','
                        << fmt(f.abscissa[i]) << ',' << fmt(f.values[i]) << '\n';
                fits.push_back(std::move(f));
            };
            record("v magnitude", [&](double r) { return v.velocity(r * dir).norm(); }, -2.0);
            record("grad v magnitude",
                   [&](double r) { return v.velocity_grad(r * dir).frobenius(); }, -3.0);
            record("psi_v magnitude", [&](double r) { return std::abs(v.psi(r * dir)); },
                   -1.0);
        } else {
            const auto& hill = *flow.flow3d;
            const Vec3 dir{std::cos(ray_angle) * 0.8, std::sin(ray_angle) * 0.8, 0.6};
            const Vec3 d = (1.0 / dir.norm()) * dir;
            RateFit f = ray_decay_fit(
                [&](double r) { return hill.velocity(r * d).norm(); }, 2 * hill.radius(),
                2.0, 6, -2.0, FitSemantics::upper_bound, "u magnitude");
            for (size_t i = 0; i < f.abscissa.size(); ++i)
                csv << config.kind << ',' << flow.name << ",u magnitude,"
                    << fmt(f.abscissa[i]) << ',' << fmt(f.values[i]) << '\n';
            fits.push_back(std::move(f));
        }
        out.csv["results.csv"] = csv.str();
    } else if (config.kind == "lemma81-probe") {
        RadialSource3D src;
        src.f = [](double r) { return r <= 1.0 ? 1.0 : 0.0; };
        src.L = 1.0;
        src.breakpoints = {1.0};
        auto R = config.R_grid.empty() ? std::vector<double>{8, 16, 32, 64} : config.R_grid;
        auto probe = convolution_decay_probe(src, R);
        fits = {probe.fit_l2, probe.fit_l2_grad, probe.fit_linf, probe.fit_linf_grad};
        std::ostringstream csv;
        csv << "experiment,quantity,R,value\n";
        auto emit = [&](const char* name, const std::vector<double>& vals) {
            for (size_t i = 0; i < vals.size(); ++i)
                csv << config.kind << ',' << name << ',' << fmt(R[i]) << ','
                    << fmt(vals[i]) << '\n';
        };
        emit("Ef_L2", probe.l2);
        emit("gradEf_L2", probe.l2_grad);
        emit("Ef_Linf", probe.linf);
        emit("gradEf_Linf", probe.linf_grad);
        out.csv["results.csv"] = csv.str();
        manifest["R_grid"] = R;
    } else if (config.kind == "projection-equivalence") {
        const double R = config.R_grid.empty() ? 6.0 : config.R_grid.front();
        struct Entry {
            std::string name;
            std::shared_ptr<const Flow2D> flow;
        };
        std::vector<Entry> entries;
        if (config.flow.empty()) {
            entries.push_back({"patch-II", flow_by_name("patch-II").flow2d});
            entries.push_back({"smooth-II", flow_by_name("smooth-II").flow2d});
            auto off = std::make_shared<Flow2D>(
                translate(*flow_by_name("smooth-II").flow2d, {R / 2.0, 0.0}));
            entries.push_back({"smooth-II@(R/2,0)", off});
        } else {
            entries.push_back({config.flow, flow_by_name(config.flow).flow2d});
        }
        std::ostringstream csv;
        csv << "experiment,flow,R,quantity,value\n";
        bool all_pass = true;
        // the route discrepancy is a near-roundoff field: fixed quadrature,
        // adaptive refinement cannot settle noise to a relative tolerance
        auto fixed_l2 = [&](const std::function<double(Vec2)>& mag) {
            auto redges = make_panels(0.0, R, {}, 24);
            auto gx = gauss_nodes(16);
            auto gw = gauss_weights(16);
            const int na = 96;
            double acc = 0;
            for (size_t p = 0; p + 1 < redges.size(); ++p) {
                const double rm = 0.5 * (redges[p] + redges[p + 1]);
                const double rh = 0.5 * (redges[p + 1] - redges[p]);
                for (size_t i = 0; i < gx.size(); ++i) {
                    const double rho = rm + rh * gx[i];
                    const double wr = gw[i] * rh * rho * (2 * pi / na);
                    for (int j = 0; j < na; ++j) {
                        const double ang = 2 * pi * (j + 0.5) / na;
                        const double v = mag({rho * std::cos(ang), rho * std::sin(ang)});
                        acc += wr * v * v;
                    }
                }
            }
            return std::sqrt(std::max(0.0, acc));
        };
        for (const auto& e : entries) {
            auto WA = project_W_vorticity(e.flow, R);
            auto WB = project_W_helmholtz(e.flow, R);
            const double dnorm =
                fixed_l2([&](Vec2 x) { return (WA.W(x) - WB.W(x)).norm(); });
            const double unorm = fixed_l2([&](Vec2 x) { return e.flow->velocity(x).norm(); });
            const double rel = dnorm / unorm;
            // 12-field orthogonality battery: w = perp-grad((1 - (rho/R)^2) q_j)
            double ortho_worst = 0;
            for (int jf = 0; jf < 12; ++jf) {
                auto chi = [R, jf](Vec2 x) {
                    const double X = x.x / R, Y = x.y / R;
                    const double r2 = X * X + Y * Y;
                    const double base = 1.0 - r2;
                    double qv = 1.0;
                    switch (jf) {
                        case 0: qv = 1.0; break;
                        case 1: qv = X; break;
                        case 2: qv = Y; break;
                        case 3: qv = X * Y; break;
                        case 4: qv = X * X - Y * Y; break;
                        case 5: qv = r2; break;
                        case 6: qv = X * r2; break;
                        case 7: qv = Y * r2; break;
                        case 8: qv = X * X * X - 3 * X * Y * Y; break;
                        case 9: qv = 3 * X * X * Y - Y * Y * Y; break;
                        case 10: qv = r2 * r2; break;
                        case 11: qv = X * Y * r2; break;
                    }
                    return base * qv;
                };
                auto w = [&](Vec2 x) {
                    const Vec2 g = fd_gradient(chi, x, 1e-3 * R);
                    return Vec2{-g.y, g.x};
                };
                auto resid = [&](Vec2 x) { return e.flow->velocity(x) - WB.W(x); };
                const double ip = disk_inner_product(resid, w, R, 24, 64);
                const double wn = std::sqrt(disk_inner_product(w, w, R, 24, 64));
                ortho_worst = std::max(ortho_worst, std::abs(ip) / (unorm * wn));
            }
            checks.push_back(make_check("route discrepancy (" + e.name + ")", rel, 1e-6, true));
            checks.push_back(
                make_check("orthogonality residual (" + e.name + ")", ortho_worst, 1e-8, true));
            all_pass &= checks[checks.size() - 2].pass && checks.back().pass;
            csv << config.kind << ',' << e.name << ',' << fmt(R) << ",route_discrepancy_rel,"
                << fmt(rel) << '\n';
            csv << config.kind << ',' << e.name << ',' << fmt(R) << ",ortho_residual_max,"
                << fmt(ortho_worst) << '\n';
            csv << config.kind << ',' << e.name << ',' << fmt(R) << ",vorticity_route_residual,"
                << fmt(WA.residual) << '\n';
            csv << config.kind << ',' << e.name << ',' << fmt(R) << ",mean_flux,"
                << fmt(WB.mean_flux) << '\n';
        }
        (void)all_pass;
        out.csv["results.csv"] = csv.str();
        manifest["R"] = R;
    } else if (config.kind == "prop51-report") {
        const auto& flow = flow_by_name(config.flow.empty() ? "smooth-II" : config.flow);
        auto R = config.R_grid;
        if (R.empty())
            R = flow.dimension == 2 ? std::vector<double>{81, 243, 729, 2187}
                                    : std::vector<double>{8, 16, 32, 64};
        Prop51Options popt;
        popt.resolution_scale = config.resolution_scale;
        popt.include_laplacian = flow.smoothness >= 2.0;
        auto rep = proposition51_report(flow, config.theta, R, popt);
        fits = rep.fits;
        std::ostringstream csv;
        csv << "experiment,flow,theta,item,R,value\n";
        for (const auto& [item, vals] : rep.rows)
            for (size_t i = 0; i < vals.size(); ++i)
                csv << config.kind << ',' << flow.name << ',' << fmt(rep.theta) << ','
                    << item << ',' << fmt(R[i]) << ',' << fmt(vals[i]) << '\n';
        out.csv["results.csv"] = csv.str();
        for (const auto& b : rep.bounded)
            checks.push_back(make_check("bounded " + b.item + " (max/min)", b.max_over_min,
                                        1.25, true));
        manifest["flow"] = flow.name;
        manifest["alpha"] = rep.alpha;
        manifest["beta"] = rep.beta;
    } else if (config.kind == "theorem11-surface") {
        const auto& flow = flow_by_name(config.flow.empty() ? "smooth-II" : config.flow);
        Theorem11Options topt;
        if (!config.nu_grid.empty()) topt.nu_grid = config.nu_grid;
        if (!config.R_grid.empty()) topt.R_grid = config.R_grid;
        if (!config.nu_marginal_grid.empty()) topt.nu_marginal_grid = config.nu_marginal_grid;
        topt.nu_marginal_R_factor = config.nu_marginal_R_factor;
        topt.T = config.T;
        topt.theta = config.theta;
        topt.base_nodes = config.base_nodes;
        topt.steps = config.steps;
        topt.resolution_scale = config.resolution_scale;
        topt.jobs = config.jobs;
        auto surf = theorem11_experiment(flow, topt);

        std::ostringstream csv;
        csv << "case,theta,nu,R,T,error,F,envelope,pass\n";
        for (const auto& cell : surf.cells)
            csv << surf.case_tag << ',' << fmt(surf.theta) << ',' << fmt(cell.nu) << ','
                << fmt(cell.R) << ',' << fmt(surf.T) << ',' << fmt(cell.error) << ','
                << fmt(cell.F) << ',' << fmt(cell.envelope) << ','
                << (cell.pass ? "1" : "0") << '\n';
        out.csv["surface.csv"] = csv.str();

        fits.push_back(surf.nu_marginal);
        if (!surf.R_marginal.abscissa.empty()) fits.push_back(surf.R_marginal);
        checks.push_back(make_check("envelope covers all cells (fitted C)", surf.fitted_C,
                                    1e6, true));
        checks.push_back(make_check("nu-marginal slope", surf.nu_marginal.slope,
                                    surf.nu_marginal_required - 0.1, false));
        checks.push_back(
            make_check("diagonal error decreasing", surf.diagonal_decreasing ? 1.0 : 0.0,
                       1.0, false));
        checks.push_back(make_check("error monotone in nu", surf.monotone_in_nu ? 1.0 : 0.0,
                                    1.0, false));
        double zero_col = 0;
        for (const auto& cell : surf.cells)
            if (cell.vacuous) zero_col = std::max(zero_col, cell.error);
        checks.push_back(make_check("nu = 0 column error", zero_col, 0.0, true));
        manifest["flow"] = flow.name;
        manifest["alpha"] = surf.alpha;
        manifest["fitted_C"] = surf.fitted_C;
        manifest["nu_marginal_R"] = surf.nu_marginal_R;
        json surface = json::array();
        for (const auto& cell : surf.cells)
            surface.push_back({{"nu", cell.nu},
                               {"R", cell.R},
                               {"error", cell.error},
                               {"F", cell.F},
                               {"envelope", cell.envelope},
                               {"pass", cell.pass},
                               {"vacuous", cell.vacuous}});
        manifest["surface"] = surface;
    } else if (config.kind == "non-disk-failure") {
        const auto& flow = flow_by_name(config.flow.empty() ? "patch-II" : config.flow);
        DomainSpec ell{2, Shape::ellipse, config.ellipse_a, config.ellipse_b, 1.0};
        auto R = config.R_grid.empty() ? std::vector<double>{16, 32, 64, 128} : config.R_grid;
        auto sweep = truncation_rates_2d(flow, ell, config.theta, R,
                                         config.resolution_scale,
                                         StreamNormalization::mean_zero_collar);
        // the negative result: no decay of the truncation error
        RateFit f = sweep.fits.front();
        checks.push_back(make_check("non-decay slope (u - T_R u)", f.slope, -0.05, false));
        fits = sweep.fits;
        out.csv["results.csv"] = csv_rates(config.kind, flow.name, config.theta, R, sweep);
        manifest["flow"] = flow.name;
        manifest["shape"] = "ellipse";
    } else {
        throw ConfigError("unknown experiment kind: " + config.kind);
    }

    json jfits = json::array();
    bool pass = true;
    for (const auto& f : fits) {
        jfits.push_back(fit_to_json(f));
        pass &= f.pass;
    }
    // the failure-mode experiment judges its fits through the check instead
    if (config.kind == "non-disk-failure") {
        pass = true;
    }
    json jchecks = json::array();
    for (const auto& c : checks) {
        jchecks.push_back(check_to_json(c));
        pass &= c.pass;
    }
    manifest["fits"] = jfits;
    manifest["checks"] = jchecks;
    manifest["pass"] = pass;
    json files = json::array();
    for (const auto& [name, _] : out.csv) files.push_back(name);
    manifest["csv_files"] = files;

    out.pass = pass;
    out.json = manifest.dump(2) + "\n";
    const auto t1 = std::chrono::steady_clock::now();
    std::ostringstream log;
    log << config.kind << " wall-clock: "
        << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms\n";
    out.log = log.str();
    return out;
}

std::vector<std::filesystem::path> write_outputs(const RunManifest& manifest,
                                                 const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out);
    std::vector<fs::path> written;
    const fs::path mpath = fs::path(config.out) / "manifest.json";
    std::ofstream(mpath) << manifest.json;
    written.push_back(mpath);
    for (const auto& [name, content] : manifest.csv) {
        const fs::path p = fs::path(config.out) / name;
        std::ofstream(p) << content;
        written.push_back(p);
    }
    const fs::path lpath = fs::path(config.out) / "run.log";
    std::ofstream(lpath) << manifest.log;
    return written;
}

std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& manifest_path,
                                                 const std::filesystem::path& out_dir,
                                                 std::string* notice) {
    namespace fs = std::filesystem;
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest: " + manifest_path.string());
    json manifest = json::parse(in);
    fs::create_directories(out_dir);
    std::vector<fs::path> written;

    auto slug = [](std::string s) {
        for (auto& c : s)
            if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
        return s;
    };

    if (manifest.contains("fits"))
        for (const auto& f : manifest["fits"]) {
            const auto& pts = f["points"];
            if (pts.empty()) continue;
            const fs::path p = out_dir / (slug(f["quantity"].get<std::string>()) + ".dat");
            std::ofstream os(p);
            os << "# quantity: " << f["quantity"].get<std::string>() << "\n";
            os << "# slope= " << fmt(f["slope"].get<double>())
               << " intercept= " << fmt(f["intercept"].get<double>())
               << " predicted= " << fmt(f["predicted"].get<double>())
               << " semantics= " << f["semantics"].get<std::string>()
               << " pass= " << (f["pass"].get<bool>() ? 1 : 0) << "\n";
            os << "# columns: log10(x) log10(value)\n";
            for (const auto& pt : pts) {
                const double x = pt["x"].get<double>(), v = pt["value"].get<double>();
                if (x > 0 && v > 0)
                    os << fmt(std::log10(x)) << ' ' << fmt(std::log10(v)) << '\n';
            }
            written.push_back(p);
        }
    if (manifest.contains("surface")) {
        const fs::path p = out_dir / "surface_long.dat";
        std::ofstream os(p);
        os << "# columns: nu R error F envelope pass\n";
        for (const auto& cell : manifest["surface"])
            os << fmt(cell["nu"].get<double>()) << ' ' << fmt(cell["R"].get<double>()) << ' '
               << fmt(cell["error"].get<double>()) << ' ' << fmt(cell["F"].get<double>())
               << ' ' << fmt(cell["envelope"].get<double>()) << ' '
               << (cell["pass"].get<bool>() ? 1 : 0) << '\n';
        written.push_back(p);
    }
    if (written.empty() && notice)
        *notice = "manifest has no fits or surface sections; nothing to emit";
    return written;
}

}  // namespace vvlab
