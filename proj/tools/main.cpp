// grimlab: checks and sweeps for translating-soliton geometry, with
// deterministic CSV/JSON artifacts.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grimlab/catalog.hpp"
#include "grimlab/cutoff.hpp"
#include "grimlab/hypersurface.hpp"
#include "grimlab/quadrature.hpp"
#include "grimlab/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    std::string command;
    std::uint64_t seed = 12345;
    std::string out_dir = ".";
    std::string format = "csv";
    std::map<std::string, std::string> params; // canonical key=value set

    void set(const std::string& key, const std::string& value) { params[key] = value; }
    void set(const std::string& key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        params[key] = buf;
    }
    void set(const std::string& key, long long value) {
        params[key] = std::to_string(value);
    }

    std::string canonical() const {
        std::string s = command;
        s += ";seed=" + std::to_string(seed);
        s += ";format=" + format;
        for (const auto& [k, v] : params)
            s += ";" + k + "=" + v;
        return s;
    }

    std::uint64_t hash() const {
        // FNV-1a over the canonical parameter string.
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

    std::string header(const std::string& check) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(hash()));
        std::string line = "# grimlab " + command + " config=" + buf +
                           " seed=" + std::to_string(seed) + " check=" + check;
        for (const auto& [k, v] : params)
            line += " " + k + "=" + v;
        line += "\n";
        return line;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (i ? "," : "") + fmt(values[i]);
    return s;
}

std::string join_ints(const std::vector<int>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (i ? "," : "") + std::to_string(values[i]);
    return s;
}

fs::path output_path(const RunConfig& cfg, const std::string& name) {
    fs::path dir(cfg.out_dir);
    if (!dir.empty())
        fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw grimlab::InputError("cannot open output file: " + path.string());
    out << contents;
}

std::vector<grimlab::ParamPoint> random_grim_grid(int n, int samples, std::uint64_t seed,
                                                  bool arclength) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> axis(arclength ? -3.0 : -1.3,
                                                arclength ? 3.0 : 1.3);
    std::uniform_real_distribution<double> lateral(-3.0, 3.0);
    std::vector<grimlab::ParamPoint> grid;
    grid.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        grimlab::ParamPoint p(n);
        p(0) = axis(rng);
        for (int i = 1; i < n; ++i)
            p(i) = lateral(rng);
        grid.push_back(std::move(p));
    }
    return grid;
}

std::vector<grimlab::ParamPoint> random_plane_grid(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lateral(-3.0, 3.0);
    std::vector<grimlab::ParamPoint> grid;
    grid.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        grimlab::ParamPoint p(n);
        for (int i = 0; i < n; ++i)
            p(i) = lateral(rng);
        grid.push_back(std::move(p));
    }
    return grid;
}

std::vector<grimlab::ParamPoint> random_bowl_grid(int n, int samples, std::uint64_t seed,
                                                  double rho_lo, double rho_hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(rho_lo, rho_hi);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<grimlab::ParamPoint> grid;
    grid.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        grimlab::ParamPoint dir(n);
        for (int i = 0; i < n; ++i)
            dir(i) = gauss(rng);
        if (dir.norm() < 1e-12)
            dir(0) = 1.0;
        dir.normalize();
        grid.push_back(grimlab::ParamPoint(radius(rng) * dir));
    }
    return grid;
}

grimlab::AmbientVector translation_axis(int n) {
    grimlab::AmbientVector w = grimlab::AmbientVector::Zero(n + 1);
    w(n) = 1.0;
    return w;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

// Tabular artifact honoring --format: CSV rows or the same rows wrapped
// into a JSON document.
fs::path write_table(const RunConfig& cfg, const std::string& stem,
                     const std::string& check, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
    if (cfg.format == "json") {
        json doc = {{"check", check}, {"columns", columns}, {"rows", rows}};
        const fs::path path = output_path(cfg, stem + ".json");
        write_file(path, cfg.header(check) + doc.dump(2) + "\n");
        return path;
    }
    std::string body;
    for (std::size_t i = 0; i < columns.size(); ++i)
        body += (i ? "," : "") + columns[i];
    body += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            body += (i ? "," : "") + fmt(row[i]);
        body += "\n";
    }
    const fs::path path = output_path(cfg, stem + ".csv");
    write_file(path, cfg.header(check) + body);
    return path;
}

int cmd_grim_asymptotics(RunConfig cfg, int n, std::vector<double> r_grid, double r_max,
                         double tol) {
    if (r_grid.empty()) {
        if (r_max < 5.0)
            throw grimlab::InputError("--r-max must be at least 5");
        for (double R = 5.0; R <= r_max + 1e-9; R += 5.0)
            r_grid.push_back(R);
    }
    cfg.set("n", static_cast<long long>(n));
    cfg.set("r_grid", join(r_grid));
    cfg.set("tol", tol);

    const double limit = grimlab::unit_ball_volume(n - 1) * std::numbers::pi;
    std::vector<std::vector<double>> rows;
    double final_gap = 0.0;
    for (double R : r_grid) {
        const double value = grimlab::weighted_curvature_reduced(n, R);
        const double scaled = R > 0.0 ? value / std::pow(R, n - 1) : 0.0;
        const double gap = R > 0.0 ? std::abs(scaled - limit) / limit : 0.0;
        final_gap = gap;
        rows.push_back({R, value, scaled, limit, gap});
    }

    const fs::path path = write_table(
        cfg, "grim-asymptotics", "weighted_curvature_limit",
        {"R", "integral", "integral_over_R_pow_n_minus_1", "limit", "relative_gap"}, rows);
    const bool pass = final_gap < tol;
    std::cout << "grim-asymptotics: n=" << n << " final_gap=" << fmt(final_gap)
              << " tol=" << fmt(tol) << (pass ? " PASS" : " FAIL") << "\n"
              << "wrote " << path.string() << "\n";
    return pass ? kExitPass : kExitCheckFailed;
}

int cmd_growth_fit(RunConfig cfg, std::vector<int> n_list, double r_min, double r_max,
                   int points, double tol) {
    if (n_list.empty())
        n_list = {2, 3, 4, 5};
    if (points < 4)
        throw grimlab::InputError("growth fit needs at least 4 radii");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = r_min + (r_max - r_min) * i / (points - 1);

    cfg.set("n_list", join_ints(n_list));
    cfg.set("r_min", r_min);
    cfg.set("r_max", r_max);
    cfg.set("points", static_cast<long long>(points));
    cfg.set("tol", tol);

    json slopes = json::array();
    for (int n : n_list) {
        const double slope = grimlab::growth_fit(n, grid);
        slopes.push_back({{"n", n},
                          {"slope", slope},
                          {"quadratic_bound_holds", slope <= 2.0 + tol}});
    }
    json doc = {{"check", "growth_exponent"},
                {"r_min", r_min},
                {"r_max", r_max},
                {"points", points},
                {"tol", tol},
                {"slopes", slopes}};

    const fs::path path = output_path(cfg, "growth-fit.json");
    write_file(path, cfg.header("growth_exponent") + doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\nwrote " << path.string() << "\n";
    return kExitPass;
}

int cmd_soliton_check(RunConfig cfg, const std::string& surface_id, int n, int samples,
                      double tol) {
    cfg.set("surface", surface_id);
    cfg.set("n", static_cast<long long>(n));
    cfg.set("samples", static_cast<long long>(samples));
    cfg.set("tol", tol);

    const grimlab::AmbientVector w = translation_axis(n);
    std::vector<grimlab::ParamPoint> grid;
    std::unique_ptr<grimlab::ParamSurface> surface;

    if (surface_id == "grim") {
        surface = std::make_unique<grimlab::GrimSurface>(n, grimlab::GrimMode::graph);
        grid = random_grim_grid(n, samples, cfg.seed, false);
    } else if (surface_id == "plane-vertical") {
        surface = std::make_unique<grimlab::HyperplaneSurface>(
            grimlab::HyperplaneSurface::vertical(n));
        grid = random_plane_grid(n, samples, cfg.seed);
    } else if (surface_id == "plane-horizontal") {
        surface = std::make_unique<grimlab::HyperplaneSurface>(
            grimlab::HyperplaneSurface::horizontal(n, 0.0));
        grid = random_plane_grid(n, samples, cfg.seed);
    } else if (surface_id == "bowl") {
        surface = std::make_unique<grimlab::BowlSurface>(grimlab::bowl_solve(n, 6.0));
        grid = random_bowl_grid(n, samples, cfg.seed, 0.05, 5.5);
    } else {
        throw CLI::ValidationError("--surface",
                                   "unknown surface id: " + surface_id);
    }

    double max_residual = 0.0;
    for (const grimlab::ParamPoint& p : grid)
        max_residual = std::max(max_residual, std::abs(grimlab::soliton_residual(*surface, p, w)));

    const bool pass = max_residual < tol;
    json doc = {{"check", "translator_residual"}, {"surface", surface_id},
                {"n", n},                         {"grid", samples},
                {"statistic", max_residual},      {"tol", tol},
                {"pass", pass}};

    const fs::path path = output_path(cfg, "soliton-check.json");
    write_file(path, cfg.header("translator_residual") + doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\nwrote " << path.string() << "\n";
    return pass ? kExitPass : kExitCheckFailed;
}

int cmd_bowl_solve(RunConfig cfg, int n, double rho_max, double tol) {
    cfg.set("n", static_cast<long long>(n));
    cfg.set("rho_max", rho_max);
    cfg.set("ode_tol", tol);

    const grimlab::BowlProfile profile = grimlab::bowl_solve(n, rho_max, tol);
    std::vector<std::vector<double>> rows;
    rows.reserve(profile.rho.size());
    for (std::size_t k = 0; k < profile.rho.size(); ++k)
        rows.push_back({profile.rho[k], profile.u[k], profile.du[k]});

    const fs::path path = write_table(cfg, "bowl-solve", "bowl_profile",
                                      {"rho", "u", "du"}, rows);
    std::cout << "bowl-solve: n=" << n << " nodes=" << profile.rho.size()
              << " u(rho_max)=" << fmt(profile.u.back()) << "\n"
              << "wrote " << path.string() << "\n";
    return kExitPass;
}

int cmd_stability(RunConfig cfg, std::vector<double> rect, int grid, double tol) {
    if (rect.empty())
        rect = {-1.0, 1.0, -1.0, 1.0};
    if (rect.size() != 4)
        throw CLI::ValidationError("--rect", "expected r1,r2,y1,y2");
    cfg.set("rect", join(rect));
    cfg.set("grid", static_cast<long long>(grid));
    cfg.set("tol", tol);

    std::vector<int> levels;
    if (grid / 2 >= 16)
        levels.push_back(grid / 2);
    levels.push_back(grid);
    const grimlab::EigenSolve solve =
        grimlab::dirichlet_lambda1_levels(rect[0], rect[1], rect[2], rect[3], levels);

    json refinement = json::array();
    for (const auto& [g, lambda] : solve.refinement)
        refinement.push_back({{"grid", g}, {"lambda1", lambda}});

    const bool pass = solve.lambda1 >= -tol;
    json doc = {{"check", "dirichlet_lambda1"},
                {"surface", "grim-arclength"},
                {"grid", grid},
                {"rect", rect},
                {"statistic", solve.lambda1},
                {"residual_norm", solve.residual_norm},
                {"eigvec_positive", solve.eigvec_positive},
                {"refinement", refinement},
                {"tol", tol},
                {"pass", pass}};

    const fs::path path = output_path(cfg, "stability.json");
    write_file(path, cfg.header("dirichlet_lambda1") + doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\nwrote " << path.string() << "\n";
    return pass ? kExitPass : kExitCheckFailed;
}

int cmd_cutoff(RunConfig cfg, const std::string& kappa_id, double R, int points) {
    cfg.set("kappa", kappa_id);
    cfg.set("R", R);
    cfg.set("points", static_cast<long long>(points));

    grimlab::GrowthFunction gf = [&] {
        try {
            return grimlab::builtin_kappa(kappa_id);
        } catch (const grimlab::GrowthRejection& e) {
            std::cerr << "cutoff: kappa '" << kappa_id << "' rejected (" << e.what()
                      << ")\n";
            if (e.clause == grimlab::GrowthClause::positivity)
                std::cerr << "hint: a pure quadratic kappa(t) = C t^2 makes the beta "
                             "integrand 1/t non-integrable at 0; use the regularized "
                             "form C (1 + t^2).\n";
            throw;
        }
    }();

    const double xi_2R = gf.xi(2.0 * R);
    const grimlab::CutoffProfile profile = grimlab::make_cutoff_profile(gf, R);
    std::vector<std::vector<double>> rows;
    rows.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double r = 1.1 * xi_2R * i / (points - 1);
        const auto s = profile.eval(gf, r);
        rows.push_back({r, s.psi, s.grad_magnitude});
    }

    const fs::path path =
        write_table(cfg, "cutoff", "cutoff_profile", {"r", "psi", "grad"}, rows);
    std::cout << "cutoff: kappa=" << kappa_id << " R=" << fmt(R)
              << " xi(R)=" << fmt(profile.xi_R) << " xi(2R)=" << fmt(xi_2R) << "\n"
              << "wrote " << path.string() << "\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grimlab: translating-soliton geometry checks and sweeps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file (sections per subcommand)");

    RunConfig cfg;
    app.add_option("--out", cfg.out_dir, "output directory")
        ->envname("GRIMLAB_OUT")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized sampling")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "output format hint")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // grim-asymptotics
    auto* asym = app.add_subcommand("grim-asymptotics",
                                    "weighted total curvature sweep over R");
    int asym_n = 2;
    std::vector<double> asym_grid;
    double asym_rmax = 30.0, asym_tol = 0.01;
    asym->add_option("--n", asym_n, "intrinsic dimension")->check(CLI::Range(2, 8));
    asym->add_option("--r-grid", asym_grid, "comma-separated radii")->delimiter(',');
    asym->add_option("--r-max", asym_rmax, "largest radius of the default grid (step 5)");
    asym->add_option("--tol", asym_tol, "relative gap tolerance")->check(CLI::PositiveNumber);

    // growth-fit
    auto* fit = app.add_subcommand("growth-fit", "growth exponent of the curvature sweep");
    std::vector<int> fit_n;
    double fit_rmin = 20.0, fit_rmax = 100.0, fit_tol = 0.05;
    int fit_points = 9;
    fit->add_option("--n", fit_n, "dimensions to fit")->delimiter(',');
    fit->add_option("--r-min", fit_rmin, "smallest radius");
    fit->add_option("--r-max", fit_rmax, "largest radius");
    fit->add_option("--points", fit_points, "grid size");
    fit->add_option("--tol", fit_tol, "slope slack for the quadratic-bound verdict")
        ->check(CLI::PositiveNumber);

    // soliton-check
    auto* check = app.add_subcommand("soliton-check", "translator residual over a sample");
    std::string check_surface = "grim";
    int check_n = 2, check_samples = 1000;
    double check_tol = 1e-6;
    check->add_option("--surface", check_surface, "surface id")
        ->check(CLI::IsMember({"grim", "plane-vertical", "plane-horizontal", "bowl"}));
    check->add_option("--n", check_n, "intrinsic dimension")->check(CLI::Range(2, 8));
    check->add_option("--samples", check_samples, "sample count")->check(CLI::PositiveNumber);
    check->add_option("--tol", check_tol, "max residual tolerance")
        ->check(CLI::PositiveNumber);

    // bowl-solve
    auto* bowl = app.add_subcommand("bowl-solve", "solve the bowl profile ODE");
    int bowl_n = 2;
    double bowl_rho_max = 10.0, bowl_tol = 1e-10;
    bowl->add_option("--n", bowl_n, "intrinsic dimension")->check(CLI::Range(2, 8));
    bowl->add_option("--rho-max", bowl_rho_max, "profile radius")->check(CLI::PositiveNumber);
    bowl->add_option("--tol", bowl_tol, "ODE tolerance")->check(CLI::PositiveNumber);

    // stability
    auto* stab = app.add_subcommand("stability", "first Dirichlet eigenvalue on a rectangle");
    std::vector<double> stab_rect;
    int stab_grid = 64;
    double stab_tol = 1e-3;
    stab->add_option("--rect", stab_rect, "r1,y... rectangle r1,r2,y1,y2")->delimiter(',');
    stab->add_option("--grid", stab_grid, "interior grid points per side")
        ->check(CLI::Range(16, 1024));
    stab->add_option("--tol", stab_tol, "lambda1 floor")->check(CLI::PositiveNumber);

    // cutoff
    auto* cut = app.add_subcommand("cutoff", "growth-function cutoff profile");
    std::string cut_kappa = "quad";
    double cut_R = 1.0;
    int cut_points = 201;
    cut->add_option("--kappa", cut_kappa, "growth function id")
        ->check(CLI::IsMember({"quad", "quadlog", "quadloglog", "t2"}));
    cut->add_option("--R", cut_R, "cutoff radius parameter")->check(CLI::PositiveNumber);
    cut->add_option("--points", cut_points, "profile sample count")->check(CLI::Range(2, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (asym->parsed()) {
            cfg.command = "grim-asymptotics";
            return cmd_grim_asymptotics(cfg, asym_n, asym_grid, asym_rmax, asym_tol);
        }
        if (fit->parsed()) {
            cfg.command = "growth-fit";
            return cmd_growth_fit(cfg, fit_n, fit_rmin, fit_rmax, fit_points, fit_tol);
        }
        if (check->parsed()) {
            cfg.command = "soliton-check";
            return cmd_soliton_check(cfg, check_surface, check_n, check_samples, check_tol);
        }
        if (bowl->parsed()) {
            cfg.command = "bowl-solve";
            return cmd_bowl_solve(cfg, bowl_n, bowl_rho_max, bowl_tol);
        }
        if (stab->parsed()) {
            cfg.command = "stability";
            return cmd_stability(cfg, stab_rect, stab_grid, stab_tol);
        }
        if (cut->parsed()) {
            cfg.command = "cutoff";
            return cmd_cutoff(cfg, cut_kappa, cut_R, cut_points);
        }
    } catch (const grimlab::InputError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.get_name() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
