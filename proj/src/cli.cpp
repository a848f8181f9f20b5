#include "cataplex/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cataplex/backlund.hpp"
#include "cataplex/bessel.hpp"
#include "cataplex/entwine.hpp"
#include "cataplex/errors.hpp"
#include "cataplex/liouville.hpp"
#include "cataplex/parallel.hpp"
#include "cataplex/timemap.hpp"

namespace cataplex::cli {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("empty grid");
    if (t.find(':') == std::string::npos) return parse_list(t);
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw UsageError("grid must be lo:hi:n or lo:hi:step, got '" + text + "'");
    const double lo = parse_number(trim(parts[0]));
    const double hi = parse_number(trim(parts[1]));
    const double third = parse_number(trim(parts[2]));
    if (hi < lo) throw UsageError("grid has hi < lo: '" + text + "'");
    std::vector<double> out;
    if (third >= 2.0 && third == std::floor(third) && parts[2].find('.') == std::string::npos) {
        const auto n = static_cast<std::size_t>(third);
        if (n > 100'000'000) throw UsageError("grid too large");
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        return out;
    }
    if (!(third > 0.0)) throw UsageError("grid step must be positive: '" + text + "'");
    const double count = std::floor((hi - lo) / third + 1e-9);
    if (count > 1e8) throw UsageError("grid too large");
    const auto n = static_cast<std::size_t>(count) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(lo + third * static_cast<double>(i));
    if (n > 1 && std::abs(out.back() - hi) <= 1e-9 * third) out.back() = hi;
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("empty list");
    std::vector<double> out;
    for (const auto& p : split(t, ',')) {
        const std::string item = trim(p);
        if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
        out.push_back(parse_number(item));
    }
    return out;
}

Summary Report::summary() const {
    Summary s;
    for (const auto& r : records) {
        ++s.count;
        if (r.pass) ++s.passed; else ++s.failed;
        if (std::isnan(r.residual)) s.max_residual = r.residual;
        else if (!std::isnan(s.max_residual)) s.max_residual = std::max(s.max_residual, r.residual);
    }
    return s;
}

Record make_record(std::string id, std::vector<std::pair<std::string, double>> inputs, double computed,
                   double reference, double residual, double tolerance) {
    return {std::move(id), std::move(inputs), computed, reference, residual, tolerance, residual <= tolerance};
}

namespace {

std::vector<double> grid_or(const RunConfig& c, const std::string& name, const std::string& fallback) {
    const auto it = c.grids.find(name);
    return parse_grid(it == c.grids.end() ? fallback : it->second);
}

int threads_of(const RunConfig& c) { return c.threads > 0 ? c.threads : default_thread_count(); }

Report run_macdonald(const RunConfig& c) {
    const auto xs = grid_or(c, "x", "-2:1:4"), ys = grid_or(c, "y", "-2:1:4"), mus = grid_or(c, "mu", "0.5,1,2");
    const double tol = c.tol.value_or(1e-6);
    struct Item { double x, y, mu; };
    std::vector<Item> items;
    for (double mu : mus)
        for (double x : xs)
            for (double y : ys) items.push_back({x, y, mu});
    Report r;
    r.records = parallel_map<Record>(items.size(), [&](std::size_t i) {
        const auto [x, y, mu] = items[i];
        const auto chk = liouville::verify_macdonald(x, y, bessel::ImaginaryOrder(mu));
        return make_record("macdonald", {{"x", x}, {"y", y}, {"mu", mu}}, chk.lhs, chk.rhs, chk.residual, tol);
    }, threads_of(c));
    return r;
}

Report run_sister(const RunConfig& c) {
    const auto xs = grid_or(c, "x", "-1"), ys = grid_or(c, "y", "1"), nus = grid_or(c, "nu", "0,0.5,1");
    const double tol = c.tol.value_or(1e-5);
    struct Item { double x, y, nu; };
    std::vector<Item> items;
    for (double nu : nus)
        for (double x : xs)
            for (double y : ys) items.push_back({x, y, nu});
    Report r;
    r.records = parallel_map<Record>(items.size(), [&](std::size_t i) {
        const auto [x, y, nu] = items[i];
        const auto chk = liouville::verify_sister(x, y, nu);
        return make_record("sister", {{"x", x}, {"y", y}, {"nu", nu}}, chk.lhs, chk.rhs, chk.residual, tol);
    }, threads_of(c));
    return r;
}

Report run_propagator(const RunConfig& c) {
    const auto xs = grid_or(c, "x", "-1:1:3"), ys = grid_or(c, "y", "-1:1:3"), zs = grid_or(c, "z", "-1:1:3");
    const double tol = c.tol.value_or(1e-4);
    std::vector<liouville::KernelPoint> items;
    for (double x : xs)
        for (double y : ys)
            for (double z : zs) items.push_back({x, y, z});
    const auto pairs = parallel_map<std::pair<Record, Record>>(items.size(), [&](std::size_t i) {
        const auto p = items[i];
        const double closed = liouville::propagator_closed_form(p).S;
        const auto a = liouville::spectral_propagator(p);
        const auto b = liouville::spectral_propagator(p, {1e-11, 2.0 * a.e_max});
        const std::vector<std::pair<std::string, double>> in{{"x", p.x}, {"y", p.y}, {"z", p.z}};
        return std::pair{make_record("propagator.spectral", in, a.value, closed, std::abs(a.value - closed) / closed, tol),
                         make_record("propagator.doubling", in, b.value, a.value,
                                     std::abs(b.value - a.value) / std::abs(a.value), 1e-5)};
    }, threads_of(c));
    Report r;
    for (const auto& [s, d] : pairs) {
        r.records.push_back(s);
        r.records.push_back(d);
    }
    return r;
}

Report run_timemap(const RunConfig& c) {
    const auto es = grid_or(c, "energy", "1"), zs = grid_or(c, "z", "3");
    const double tol = c.tol.value_or(1e-3);
    Report r;
    for (double e : es) {
        const liouville::EnergyShell shell(e);
        for (double z : zs) {
            const double k = bessel::k_imag(bessel::ImaginaryOrder(shell.mu()), std::exp(z));
            const double T = -std::log(k) / e;
            double previous = std::numeric_limits<double>::infinity(), rise = 0.0, err3 = 0.0;
            for (int order = 0; order <= 3; ++order) {
                const double err = std::abs(timemap::euclidean_T_series(shell, z, order) - T);
                if (order <= 2) rise = std::max(rise, err - previous);
                previous = err;
                if (order == 3) err3 = err;
            }
            r.records.push_back(make_record("timemap.series", {{"energy", e}, {"z", z}},
                                            timemap::euclidean_T_series(shell, z, 3), T, err3 / std::abs(T), tol));
            r.records.push_back(make_record("timemap.series_decreasing", {{"energy", e}, {"z", z}}, rise, 0.0,
                                            std::max(0.0, rise), 0.0));
            const auto st = timemap::t_of_z(shell, {z, 0.0});
            const double back = std::abs(std::exp(std::complex<double>(0.0, -e) * st.t));
            r.records.push_back(make_record("timemap.roundtrip", {{"energy", e}, {"z", z}}, back, k,
                                            std::abs(back - k) / k, 1e-10));
        }
    }
    return r;
}

Report run_contour(const RunConfig& c) {
    const auto es = grid_or(c, "energy", "0.5,1,2");
    const double tol = c.tol.value_or(1e-8);
    const auto rows = parallel_map<std::vector<Record>>(es.size(), [&](std::size_t i) {
        const double e = es[i];
        const liouville::EnergyShell shell(e);
        const std::complex<double> seed = timemap::real_zeros(shell, 1).front() + 0.1;
        const auto trace = timemap::trace_level_contour(shell, seed, c.step, c.max_steps);
        const auto finer = timemap::trace_level_contour(shell, seed, 0.5 * c.step, 2 * c.max_steps);
        const std::complex<double> nu(0.0, shell.mu());
        double level_err = 0.0;
        int non_monotone = 0;
        for (std::size_t k = 0; k < trace.points.size(); ++k) {
            const double mod = std::abs(bessel::k_complex(nu, std::exp(trace.points[k].z)));
            level_err = std::max(level_err, std::abs(mod / trace.level - 1.0));
            if (k > 0 && !(trace.points[k].phase > trace.points[k - 1].phase)) ++non_monotone;
        }
        const bool same = timemap::classify_contour(trace) == timemap::classify_contour(finer);
        const std::vector<std::pair<std::string, double>> in{{"energy", e}, {"step", c.step}};
        return std::vector<Record>{
            make_record("contour.level", in, trace.level, trace.level, level_err, tol),
            make_record("contour.closure_stable", in, trace.closed ? 1.0 : 0.0, finer.closed ? 1.0 : 0.0,
                        same ? 0.0 : 1.0, 0.0),
            make_record("contour.phase_monotone", in, static_cast<double>(trace.points.size()), 0.0,
                        static_cast<double>(non_monotone), 0.0),
            make_record("contour.winding", in, trace.winding(), finer.winding(),
                        std::abs(trace.winding() - finer.winding()), 0.0)};
    }, threads_of(c));
    Report r;
    for (const auto& v : rows) r.records.insert(r.records.end(), v.begin(), v.end());
    return r;
}

Report run_soliton(const RunConfig& c) {
    const auto model = backlund::parse_model(c.model);
    const auto sigma = grid_or(c, "sigma", "-5:5:0.001");
    if (sigma.size() < 3) throw UsageError("soliton needs at least three grid points");
    backlund::FieldSlice seed = backlund::FieldSlice::vacuum(sigma.front(), sigma.back(), sigma.size());
    seed.sigma = sigma;
    const double rate = 2.0 * std::cosh(c.z);
    double psi_left = 0.0;
    if (c.psi_left) psi_left = *c.psi_left;
    else if (model == backlund::ModelKind::SineGordon) psi_left = 2.0 * std::atan(std::exp(-rate * sigma.front()));
    else if (model == backlund::ModelKind::SinhGordon) psi_left = 1.0;
    else psi_left = 0.5 * std::log(std::exp(c.z) / (2.0 * std::cosh(c.z)));
    const auto out = backlund::solve_backlund(model, seed, {c.z, psi_left});

    Report r;
    r.table_header = {"sigma", "phi", "pi_phi", "psi", "pi_psi"};
    for (std::size_t i = 0; i < out.size(); ++i) {
        r.table.push_back({out.sigma[i], seed.phi[i], seed.pi[i], out.phi[i], out.pi[i]});
    }
    const std::vector<std::pair<std::string, double>> in{{"z", c.z}, {"psi_left", psi_left}, {"points", static_cast<double>(out.size())}};
    const double tol = c.tol.value_or(1e-8);
    if (model == backlund::ModelKind::SineGordon) {
        // tan(psi/2) = tan(psi_left/2) e^{-2 cosh z (sigma - sigma_0)}
        const double t0 = std::tan(0.5 * psi_left);
        double worst = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double exact = 2.0 * std::atan(t0 * std::exp(-rate * (out.sigma[i] - sigma.front())));
            worst = std::max(worst, std::abs(out.phi[i] - exact));
        }
        r.records.push_back(make_record("soliton.kink", in, worst, 0.0, worst, tol));
    } else if (model == backlund::ModelKind::SinhGordon) {
        const double t0 = std::tanh(0.5 * psi_left);
        double worst = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double exact = t0 * std::exp(-rate * (out.sigma[i] - sigma.front()));
            worst = std::max(worst, std::abs(std::tanh(0.5 * out.phi[i]) - exact));
        }
        r.records.push_back(make_record("soliton.tanh_law", in, worst, 0.0, worst, tol));
    }
    if (model != backlund::ModelKind::Liouville && c.z == 0.0) {
        // Three-point truncation: h^2/12 |psi''''|, with |psi''''| <= ~24 for these profiles.
        const double h = out.spacing();
        r.records.push_back(make_record("soliton.eom", in, backlund::eom_residual(model, out), 0.0,
                                        backlund::eom_residual(model, out), 4.0 * h * h));
    }
    return r;
}

Report run_contract(const RunConfig& c) {
    const auto ws = grid_or(c, "w", "0,1,3,5");
    const double tol = c.tol.value_or(1e-10);
    entwine::Lcg rng{c.seed};
    Report r;
    for (int k = 0; k < c.configs; ++k) {
        const backlund::ContractionSample s{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        for (double w : ws) {
            const double d = backlund::contract_to_liouville(w, s);
            const double law = backlund::contraction_remainder(w, s);
            r.records.push_back(make_record("contract.remainder",
                                            {{"sample", k}, {"phi", s.phi}, {"psi", s.psi}, {"z", s.z}, {"w", w}},
                                            d, law, std::abs(d / law - 1.0), tol));
        }
    }
    return r;
}

Report run_entwine(const RunConfig& c) {
    std::vector<backlund::ModelKind> models;
    if (c.model == "all") models.assign(std::begin(backlund::kAllModels), std::end(backlund::kAllModels));
    else models.push_back(backlund::parse_model(c.model));
    const entwine::Lattice lat{c.n_sites, c.spacing};
    try {
        lat.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const double grad_tol = c.tol.value_or(1e-6);
    Report r;
    for (auto m : models) {
        const double model_id = static_cast<double>(static_cast<int>(m));
        auto grads = parallel_map<Record>(static_cast<std::size_t>(c.configs), [&](std::size_t i) {
            const auto p = entwine::random_pair(lat, c.seed, i);
            const double err = entwine::gradient_fd_error(m, p, 1e-4);
            return make_record(std::string("entwine.gradient.") + backlund::to_string(m),
                               {{"config", static_cast<double>(i)}, {"n_sites", lat.n_sites}, {"spacing", lat.spacing}},
                               err, 0.0, err, grad_tol);
        }, threads_of(c));
        r.records.insert(r.records.end(), grads.begin(), grads.end());

        // Constant fields: the zero configuration (exact zeros) and one seeded constant.
        entwine::Lcg rng{c.seed ^ 0xC0FFEEULL};
        const double p = rng.uniform(-1, 1), q = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
        for (const auto& pair : {entwine::constant_pair(lat, 0, 0, 0), entwine::constant_pair(lat, p, q, z)}) {
            const bool zero = pair.phi[0] == 0.0 && pair.psi[0] == 0.0;
            const double scale = zero ? 0.0 : 8.0 * kEps * entwine::energy_term_scale(m, pair, 0);
            const double global = scale * lat.n_sites * lat.spacing;
            const std::vector<std::pair<std::string, double>> in{{"model", model_id}, {"phi", pair.phi[0]},
                                                                 {"psi", pair.psi[0]}, {"z", pair.z}};
            const double mom = std::abs(entwine::momentum_entwine_residual(m, pair));
            const double en = entwine::max_energy_residual(m, pair);
            const double ip = std::abs(entwine::improved_entwine_residual(m, pair, entwine::Chirality::Plus));
            const double im = std::abs(entwine::improved_entwine_residual(m, pair, entwine::Chirality::Minus));
            r.records.push_back(make_record("entwine.constant.momentum", in, mom, 0.0, mom, 0.0));
            r.records.push_back(make_record("entwine.constant.energy", in, en, 0.0, en, scale));
            r.records.push_back(make_record("entwine.constant.improved+", in, ip, 0.0, ip, global));
            r.records.push_back(make_record("entwine.constant.improved-", in, im, 0.0, im, global));
        }

        for (auto id : {entwine::Identity::Momentum, entwine::Identity::Energy, entwine::Identity::ImprovedPlus,
                        entwine::Identity::ImprovedMinus}) {
            const auto rows = entwine::refinement_study(m, id, {32, 0.25}, 5);
            const double order = rows.back().order;
            const bool momentum = id == entwine::Identity::Momentum;
            const double target = momentum ? 2.0 : 1.0;
            const double residual = momentum ? std::abs(order - target) : std::max(0.0, target - order);
            r.records.push_back(make_record(std::string("entwine.order.") + entwine::to_string(id),
                                            {{"model", model_id}, {"n_fine", rows.back().n_sites}}, order, target,
                                            residual, momentum ? 0.1 : 0.05));
        }
    }
    return r;
}

}  // namespace

Report run_command(const RunConfig& config) {
    Report r;
    const std::string& cmd = config.command;
    if (cmd == "macdonald") r = run_macdonald(config);
    else if (cmd == "sister") r = run_sister(config);
    else if (cmd == "propagator") r = run_propagator(config);
    else if (cmd == "timemap") r = run_timemap(config);
    else if (cmd == "contour") r = run_contour(config);
    else if (cmd == "soliton") r = run_soliton(config);
    else if (cmd == "contract") r = run_contract(config);
    else if (cmd == "entwine") r = run_entwine(config);
    else throw UsageError("unknown command '" + cmd + "'");
    r.command = cmd;
    r.seed = config.seed;
    return r;
}

std::string render_report(const Report& report, Format format) {
    const Summary s = report.summary();
    if (format == Format::Json) {
        nlohmann::ordered_json j;
        j["command"] = report.command;
        j["seed"] = report.seed;
        j["records"] = nlohmann::ordered_json::array();
        for (const auto& rec : report.records) {
            nlohmann::ordered_json in = nlohmann::ordered_json::object();
            for (const auto& [k, v] : rec.inputs) in[k] = v;
            j["records"].push_back({{"check_id", rec.check_id},
                                    {"inputs", in},
                                    {"computed", rec.computed},
                                    {"reference", rec.reference},
                                    {"residual", rec.residual},
                                    {"tolerance", rec.tolerance},
                                    {"pass", rec.pass}});
        }
        j["summary"] = {{"count", s.count}, {"passed", s.passed}, {"failed", s.failed}, {"max_residual", s.max_residual}};
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "check_id,inputs,computed,reference,residual,tolerance,pass\n";
    for (const auto& rec : report.records) {
        out << rec.check_id << ',';
        for (std::size_t i = 0; i < rec.inputs.size(); ++i) {
            if (i) out << ';';
            out << rec.inputs[i].first << '=' << fmt(rec.inputs[i].second);
        }
        out << ',' << fmt(rec.computed) << ',' << fmt(rec.reference) << ',' << fmt(rec.residual) << ','
            << fmt(rec.tolerance) << ',' << (rec.pass ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string render_table(const Report& report) {
    std::ostringstream out;
    for (std::size_t i = 0; i < report.table_header.size(); ++i) out << (i ? "," : "") << report.table_header[i];
    out << '\n';
    for (const auto& row : report.table) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
        out << '\n';
    }
    return out.str();
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

namespace {

// key=value lines become "--key value" tokens placed before the real
// arguments, so flags given on the command line win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty() || key == "config") throw UsageError(path + ":" + std::to_string(lineno) + ": bad key");
        tokens.push_back("--" + key + "=" + trim(t.substr(eq + 1)));
    }
    return tokens;
}

}  // namespace

int main_entry(int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> args(argv + 1, argv + argc);

    // A config file is expanded up front so its settings sit under the flags.
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
        } else {
            continue;
        }
        try {
            auto tokens = config_tokens(path);
            args.insert(args.begin(), tokens.begin(), tokens.end());
        } catch (const UsageError& e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return 2;
        }
        break;
    }

    CLI::App app{"Numerical checks of exponential-kernel propagators and entwining identities"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    RunConfig cfg;
    std::string format = "csv";
    std::map<std::string, std::string> grid_text;
    double tol = 0.0, psi_left = 0.0;
    std::string model;
    app.add_option("command", cfg.command, "macdonald|sister|propagator|timemap|contour|soliton|contract|entwine")
        ->required();
    app.add_option("--config", "key=value file (flags override it)");
    const std::vector<std::pair<std::string, std::string>> grid_flags{
        {"--x-grid", "x"}, {"--y-grid", "y"}, {"--z-grid", "z"}, {"--mu", "mu"},
        {"--nu", "nu"},    {"--energy", "energy"}, {"--sigma", "sigma"}, {"--w", "w"}};
    for (const auto& [flag, key] : grid_flags) {
        app.add_option(flag, grid_text[key], "grid lo:hi:n, lo:hi:step or a comma list");
    }
    auto* tol_opt = app.add_option("--tol", tol, "tolerance (command default when omitted)");
    auto* model_opt = app.add_option("--model", model, "liouville|sinh-gordon|sine-gordon (entwine: also all)");
    app.add_option("--z", cfg.z, "Backlund parameter (soliton)");
    auto* psi_opt = app.add_option("--psi-left", psi_left, "psi at the left grid end (soliton)");
    app.add_option("--step", cfg.step, "contour step length");
    app.add_option("--max-steps", cfg.max_steps, "contour step budget");
    app.add_option("--n-sites", cfg.n_sites, "lattice sites (entwine)");
    app.add_option("--spacing", cfg.spacing, "lattice spacing (entwine)");
    app.add_option("--configs", cfg.configs, "random configurations / samples");
    app.add_option("--seed", cfg.seed, "64-bit RNG seed");
    app.add_option("--threads", cfg.threads, "worker threads (default CATAPLEX_THREADS)");
    app.add_option("--out", cfg.out, "output path, - for stdout");
    auto* report_opt = app.add_option("--report", "report path for soliton (default: summary only)");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    if (*tol_opt) cfg.tol = tol;
    if (*psi_opt) cfg.psi_left = psi_left;
    if (*report_opt) cfg.report_path = report_opt->as<std::string>();
    cfg.model = *model_opt ? model : (cfg.command == "entwine" ? "all" : "sine-gordon");
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    for (const auto& [flag, key] : grid_flags) {
        if (*app.get_option(flag)) cfg.grids[key] = grid_text[key];
    }

    int code = 0;
    try {
        const Report report = run_command(cfg);
        if (cfg.command == "soliton") {
            write_text(render_table(report), cfg.out);
            if (cfg.report_path) write_text(render_report(report, cfg.format), *cfg.report_path);
        } else {
            write_text(render_report(report, cfg.format), cfg.out);
        }
        const Summary s = report.summary();
        std::cerr << cfg.command << ": " << s.passed << "/" << s.count << " checks passed, max residual "
                  << fmt(s.max_residual) << '\n';
        code = s.failed == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        code = 2;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        code = 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        code = 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        code = 3;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "wall time " << secs << " s\n";
    return code;
}

}  // namespace cataplex::cli
