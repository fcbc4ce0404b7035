#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rabi/bethe.hpp"
#include "rabi/constraints.hpp"
#include "rabi/log.hpp"
#include "rabi/model.hpp"
#include "rabi/spectrum.hpp"
#include "rabi/wavefunction.hpp"

using nlohmann::json;

namespace {

struct CliState {
    std::string omega = "1";
    std::string delta = "0";
    std::string epsilon = "0";
    std::string g = "0";
    int n = 1;
    int m = 1;
    int steps = 241;
    int k = 12;
    int n_max = 60;
    double g_min = 0.0;
    double g_max = 1.2;
    double tol = 1e-6;
    std::string branch = "plus";
    std::string format = "json";
    std::string out;
    std::string verify;
    std::string preset;
};

double parse_real(const std::string& text) {
    return rabi::to_double(rabi::rational_from_string(text));
}

rabi::Branch parse_branch(const std::string& text) {
    return text == "minus" ? rabi::Branch::Minus : rabi::Branch::Plus;
}

rabi::ModelParams model_of(const CliState& s) {
    rabi::ModelParams p;
    p.omega = parse_real(s.omega);
    p.delta = parse_real(s.delta);
    p.epsilon = parse_real(s.epsilon);
    p.g = parse_real(s.g);
    return rabi::validate_params(p);
}

rabi::RatParams rat_of(const CliState& s) {
    return rabi::RatParams{rabi::rational_from_string(s.omega),
                           abs(rabi::rational_from_string(s.delta)),
                           rabi::rational_from_string(s.epsilon)};
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

void emit(const json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text(out, text);
        rabi::log_info("wrote " + out);
    }
}

json roots_to_json(const std::vector<rabi::Complex>& roots) {
    json arr = json::array();
    for (const rabi::Complex& z : roots) arr.push_back({{"re", z.real()}, {"im", z.imag()}});
    return arr;
}

std::string spectrum_csv(const rabi::SpectrumTable& t) {
    std::string s = "g";
    size_t k = t.levels.empty() ? 0 : t.levels.front().size();
    for (size_t j = 1; j <= k; ++j) s += ",E_" + std::to_string(j);
    s += "\n";
    for (size_t i = 0; i < t.g_grid.size(); ++i) {
        s += fmt12(t.g_grid[i]);
        for (double e : t.levels[i]) {
            s += ",";
            s += fmt12(e);
        }
        s += "\n";
    }
    return s;
}

struct MarkedPoint {
    double g, energy;
    int n;
    rabi::Branch branch;
};

std::string spectrum_svg(const rabi::SpectrumTable& t, const std::vector<MarkedPoint>& marks,
                         bool parabolas) {
    const double width = 840, height = 620;
    const double ml = 70, mr = 25, mt = 25, mb = 55;
    double x0 = t.g_grid.front(), x1 = t.g_grid.back();
    double y0 = 1e300, y1 = -1e300;
    for (const auto& row : t.levels) {
        for (double e : row) {
            y0 = std::min(y0, e);
            y1 = std::max(y1, e);
        }
    }
    double pad = 0.04 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double g) { return ml + (g - x0) / (x1 - x0) * (width - ml - mr); };
    auto py = [&](double e) { return height - mb - (e - y0) / (y1 - y0) * (height - mt - mb); };

    std::string s;
    char buf[256];
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"620\" "
         "viewBox=\"0 0 840 620\">\n";
    s += "<rect width=\"840\" height=\"620\" fill=\"white\"/>\n";

    for (double gx = std::ceil(x0 / 0.2) * 0.2; gx <= x1 + 1e-9; gx += 0.2) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#000\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">%.1f</text>\n",
                      px(gx), height - mb, px(gx), height - mb + 6, px(gx), height - mb + 22, gx);
        s += buf;
    }
    for (double ey = std::ceil(y0); ey <= y1; ey += 1.0) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#000\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"end\">%.0f</text>\n",
                      ml - 6, py(ey), ml, py(ey), ml - 10, py(ey) + 4, ey);
        s += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  ml, mt, width - ml - mr, height - mt - mb);
    s += buf;
    s += "<text x=\"" + fmt12(ml + (width - ml - mr) / 2) + "\" y=\"" + fmt12(height - 10) +
         "\" font-size=\"15\" text-anchor=\"middle\">g</text>\n";
    s += "<text x=\"18\" y=\"" + fmt12(mt + (height - mt - mb) / 2) +
         "\" font-size=\"15\" text-anchor=\"middle\">E</text>\n";

    size_t k = t.levels.front().size();
    for (size_t j = 0; j < k; ++j) {
        s += "<polyline fill=\"none\" stroke=\"#9a9a9a\" stroke-width=\"1.3\" points=\"";
        for (size_t i = 0; i < t.g_grid.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(t.g_grid[i]), py(t.levels[i][j]));
            s += buf;
        }
        s += "\"/>\n";
    }
    if (parabolas) {
        for (int n = 1; n <= 5; ++n) {
            s += "<polyline fill=\"none\" stroke=\"#2a5fd0\" stroke-width=\"2\" points=\"";
            for (double gx : t.g_grid) {
                rabi::ModelParams p = t.params;
                p.g = gx;
                double e = rabi::exceptional_energy(p, n, rabi::Branch::Plus);
                if (e < y0 || e > y1) continue;
                std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(gx), py(e));
                s += buf;
            }
            s += "\"/>\n";
        }
    }
    for (const MarkedPoint& mp : marks) {
        if (mp.energy < y0 || mp.energy > y1) continue;
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"6\" fill=\"none\" stroke=\"#c43131\" "
                      "stroke-width=\"1.8\"/>\n",
                      px(mp.g), py(mp.energy));
        s += buf;
    }
    s += "</svg>\n";
    return s;
}

int run_constraint(const CliState& s) {
    rabi::RatParams rp = rat_of(s);
    rabi::Branch branch = parse_branch(s.branch);
    rabi::RatPoly q = rabi::constraint_poly(rp, s.n, branch);

    json j;
    j["n"] = s.n;
    j["branch"] = rabi::branch_name(branch);
    json coeffs = json::array(), exact = json::array();
    for (const rabi::Rational& c : q.coeffs()) {
        coeffs.push_back(rabi::to_double(c));
        exact.push_back(rabi::to_string(c));
    }
    j["coeffs"] = coeffs;
    j["coeffs_exact"] = exact;

    if (s.n >= 1) {
        rabi::RootCountReport report = rabi::exceptional_couplings(rp, s.n, branch);
        j["predicted"] = report.predicted;
        j["counted"] = report.counted;
        j["roots_x"] = report.roots_x;
        j["couplings_g"] = report.couplings_g;
        json energies = json::array();
        double w = rabi::to_double(rp.omega);
        double eps = rabi::to_double(rp.epsilon);
        for (double g : report.couplings_g) {
            energies.push_back(s.n * w - g * g / w + rabi::branch_sign(branch) * eps);
        }
        j["energies"] = energies;
    } else {
        j["predicted"] = 0;
        j["counted"] = 0;
        j["roots_x"] = json::array();
        j["couplings_g"] = json::array();
        j["energies"] = json::array();
    }

    if (!s.verify.empty()) {
        std::ifstream f(s.verify);
        if (!f) throw std::runtime_error("cannot read " + s.verify);
        json previous = json::parse(f);
        bool same = previous["roots_x"] == j["roots_x"] && previous["coeffs_exact"] == j["coeffs_exact"];
        j["verified"] = same;
        if (!same) {
            json err = {{"error", {{"code", "VerifyMismatch"},
                                   {"message", "recomputed roots differ from " + s.verify}}}};
            std::fputs((err.dump(2) + "\n").c_str(), stderr);
            emit(j, s.out);
            return 1;
        }
    }
    emit(j, s.out);
    return 0;
}

int run_heun_check(const CliState& s) {
    rabi::ModelParams p = model_of(s);
    rabi::Branch branch = parse_branch(s.branch);
    rabi::HeunSeries series = rabi::heun_series(p, s.n, branch);
    double tail = rabi::heun_tail(p, s.n, branch);

    json j;
    j["n"] = s.n;
    j["branch"] = rabi::branch_name(branch);
    j["g"] = p.g;
    j["h"] = series.h;
    json abc = json::array();
    for (const auto& row : series.coeffs_abc) abc.push_back({row[0], row[1], row[2]});
    j["abc"] = abc;
    j["tail"] = tail;
    j["on_surface"] = std::fabs(tail) <= 1e-8;
    emit(j, s.out);
    return 0;
}

int run_bethe(const CliState& s) {
    rabi::ModelParams p = model_of(s);
    rabi::Branch branch = parse_branch(s.branch);
    rabi::RootSet roots = rabi::solve_bethe(p, s.n, branch);

    json j;
    j["n"] = s.n;
    j["branch"] = rabi::branch_name(branch);
    j["energy"] = rabi::exceptional_energy(p, s.n, branch);
    j["roots"] = roots_to_json(roots.roots);
    j["degenerate_atomic"] = roots.degenerate_atomic;
    j["constraint_residual"] = rabi::constraint_residual(roots, p, s.n, branch);
    if (!roots.degenerate_atomic) {
        j["residuals"] = rabi::bethe_residual(roots, p, s.n, branch);
    }
    emit(j, s.out);
    return 0;
}

int run_wavefn_check(const CliState& s) {
    rabi::ModelParams p = model_of(s);
    rabi::Branch branch = parse_branch(s.branch);
    rabi::RootSet roots = rabi::solve_bethe(p, s.n, branch);
    rabi::WavefunctionPair w = rabi::make_wavefunction(p, s.n, branch, roots);
    std::vector<rabi::Complex> grid = rabi::standard_sample_grid(p);
    double residual = rabi::schrodinger_residual(w, grid);

    json j;
    j["n"] = s.n;
    j["branch"] = rabi::branch_name(branch);
    j["energy"] = w.energy;
    j["roots"] = roots_to_json(w.roots.roots);
    j["grid_points"] = grid.size();
    j["residual"] = residual;
    j["pass"] = residual <= 1e-10;
    emit(j, s.out);
    return 0;
}

int run_spectrum(const CliState& s) {
    rabi::ModelParams p = model_of(s);
    rabi::SpectrumTable t = rabi::sweep_levels(p, s.g_min, s.g_max, s.steps, s.k, s.n_max);
    if (s.format == "csv") {
        std::string csv = spectrum_csv(t);
        if (s.out.empty()) std::fputs(csv.c_str(), stdout);
        else write_text(s.out, csv);
        return 0;
    }
    if (s.format == "svg") {
        std::string svg = spectrum_svg(t, {}, false);
        if (s.out.empty()) std::fputs(svg.c_str(), stdout);
        else write_text(s.out, svg);
        return 0;
    }
    json j;
    j["g_grid"] = t.g_grid;
    j["levels"] = t.levels;
    j["n_max"] = t.n_max;
    j["convergence_drift"] = t.convergence_drift;
    emit(j, s.out);
    return 0;
}

int run_crossings(const CliState& s) {
    rabi::Rational omega = rabi::rational_from_string(s.omega);
    rabi::Rational delta = abs(rabi::rational_from_string(s.delta));
    double deviation = rabi::crossing_coincidence(omega, delta, s.n, s.m);

    rabi::RatParams rp{omega, delta, rabi::Rational(s.m) * omega / 2};
    std::vector<rabi::RootInterval> rn =
        rabi::isolate_positive_roots(rabi::constraint_poly(rp, s.n, rabi::Branch::Plus));
    std::vector<rabi::RootInterval> rm =
        rabi::isolate_positive_roots(rabi::constraint_poly(rp, s.n + s.m, rabi::Branch::Minus));

    json j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["epsilon"] = rabi::to_double(rp.epsilon);
    j["deviation"] = deviation;
    json a = json::array(), b = json::array();
    for (const auto& iv : rn) a.push_back(iv.refined);
    for (const auto& iv : rm) b.push_back(iv.refined);
    j["roots_x"] = a;
    j["primed_roots_x"] = b;
    emit(j, s.out);
    return 0;
}

int run_interlace(const CliState& s) {
    rabi::RatParams rp = rat_of(s);
    bool ok = rabi::verify_interlacing(rp, s.n);
    json j;
    j["n"] = s.n;
    j["interlacing"] = ok;
    emit(j, s.out);
    return 0;
}

int run_figure(const CliState& s) {
    CliState cfg = s;
    if (s.preset == "fig1") {
        cfg.delta = "6/5";
        cfg.epsilon = "1/2";
    } else if (s.preset == "fig2") {
        cfg.delta = "3/2";
        cfg.epsilon = "1/2";
    } else {
        cfg.delta = "6/5";
        cfg.epsilon = "3/10";
    }
    cfg.omega = "1";
    rabi::ModelParams p = model_of(cfg);
    rabi::SpectrumTable t = rabi::sweep_levels(p, 0.0, 1.2, cfg.steps, cfg.k, cfg.n_max);

    std::vector<MarkedPoint> marks;
    json points = json::array();
    rabi::RatParams rp = rat_of(cfg);
    for (rabi::Branch branch : {rabi::Branch::Plus, rabi::Branch::Minus}) {
        for (int n = 1; n <= 5; ++n) {
            rabi::RootCountReport report = rabi::exceptional_couplings(rp, n, branch);
            for (double g : report.couplings_g) {
                rabi::ModelParams pg = p;
                pg.g = g;
                double e = rabi::exceptional_energy(pg, n, branch);
                marks.push_back({g, e, n, branch});
                points.push_back({{"n", n},
                                  {"branch", rabi::branch_name(branch)},
                                  {"g", g},
                                  {"energy", e}});
            }
        }
    }

    std::string base = s.out.empty() ? s.preset : s.out;
    write_text(base + ".csv", spectrum_csv(t));
    write_text(base + ".svg", spectrum_svg(t, marks, true));

    json j;
    j["preset"] = s.preset;
    j["csv"] = base + ".csv";
    j["svg"] = base + ".svg";
    j["convergence_drift"] = t.convergence_drift;
    j["exceptional_points"] = points;
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exceptional (Juddian) spectrum of the generalised Rabi model"};
    app.require_subcommand(1);
    CliState s;

    auto add_params = [&](CLI::App* sub, bool with_g) {
        sub->add_option("--omega", s.omega, "field frequency (rational or decimal)")
            ->capture_default_str();
        sub->add_option("--delta", s.delta, "level splitting")->capture_default_str();
        sub->add_option("--epsilon", s.epsilon, "driving strength")->capture_default_str();
        if (with_g) sub->add_option("--g", s.g, "coupling")->capture_default_str();
        sub->add_option("--out", s.out, "output path (default: stdout)");
    };
    auto add_level = [&](CLI::App* sub) {
        sub->add_option("--n", s.n, "level index N")->capture_default_str();
        sub->add_option("--branch", s.branch, "solution branch")
            ->check(CLI::IsMember({"plus", "minus"}))
            ->capture_default_str();
    };

    CLI::App* c_constraint = app.add_subcommand("constraint", "constraint polynomial, Sturm counts, couplings");
    add_params(c_constraint, false);
    add_level(c_constraint);
    c_constraint->add_option("--format", s.format)->check(CLI::IsMember({"json"}));
    c_constraint->add_option("--verify", s.verify, "previous JSON output to compare against");

    CLI::App* c_heun = app.add_subcommand("heun-check", "series recurrence tail residual");
    add_params(c_heun, true);
    add_level(c_heun);
    c_heun->add_option("--format", s.format)->check(CLI::IsMember({"json"}));

    CLI::App* c_bethe = app.add_subcommand("bethe", "solve the algebraic root equations");
    add_params(c_bethe, true);
    add_level(c_bethe);
    c_bethe->add_option("--format", s.format)->check(CLI::IsMember({"json"}));

    CLI::App* c_wavefn = app.add_subcommand("wavefn-check", "wavefunction pair residual on the sample grid");
    add_params(c_wavefn, true);
    add_level(c_wavefn);
    c_wavefn->add_option("--format", s.format)->check(CLI::IsMember({"json"}));

    CLI::App* c_spectrum = app.add_subcommand("spectrum", "truncated-basis eigenvalue sweep");
    add_params(c_spectrum, false);
    c_spectrum->add_option("--g-min", s.g_min)->capture_default_str();
    c_spectrum->add_option("--g-max", s.g_max)->capture_default_str();
    c_spectrum->add_option("--steps", s.steps)->capture_default_str();
    c_spectrum->add_option("--k", s.k, "levels per grid point")->capture_default_str();
    c_spectrum->add_option("--n-max", s.n_max, "boson cutoff")->capture_default_str();
    c_spectrum->add_option("--format", s.format)->check(CLI::IsMember({"json", "csv", "svg"}));

    CLI::App* c_crossings = app.add_subcommand("crossings", "root coincidence at epsilon = m omega/2");
    add_params(c_crossings, false);
    c_crossings->add_option("--n", s.n)->capture_default_str();
    c_crossings->add_option("--m", s.m, "half-integer drive index")->capture_default_str();
    c_crossings->add_option("--format", s.format)->check(CLI::IsMember({"json"}));

    CLI::App* c_interlace = app.add_subcommand("interlace", "strict interlacing of consecutive root sets");
    add_params(c_interlace, false);
    c_interlace->add_option("--n", s.n)->capture_default_str();
    c_interlace->add_option("--format", s.format)->check(CLI::IsMember({"json"}));

    CLI::App* c_figure = app.add_subcommand("figure", "preset sweep with exceptional points (CSV + SVG)");
    c_figure->add_option("--preset", s.preset, "fig1 | fig2 | fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    c_figure->add_option("--steps", s.steps)->capture_default_str();
    c_figure->add_option("--k", s.k)->capture_default_str();
    c_figure->add_option("--n-max", s.n_max)->capture_default_str();
    c_figure->add_option("--out", s.out, "output base path (default: preset name)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_constraint->parsed()) return run_constraint(s);
        if (c_heun->parsed()) return run_heun_check(s);
        if (c_bethe->parsed()) return run_bethe(s);
        if (c_wavefn->parsed()) return run_wavefn_check(s);
        if (c_spectrum->parsed()) return run_spectrum(s);
        if (c_crossings->parsed()) return run_crossings(s);
        if (c_interlace->parsed()) return run_interlace(s);
        if (c_figure->parsed()) return run_figure(s);
    } catch (const rabi::Error& e) {
        json err = {{"error", {{"code", rabi::error_name(e.code())}, {"message", e.what()}}}};
        std::fputs((err.dump(2) + "\n").c_str(), stderr);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid flag value: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        json err = {{"error", {{"code", "Internal"}, {"message", e.what()}}}};
        std::fputs((err.dump(2) + "\n").c_str(), stderr);
        return 1;
    }
    return 2;
}
