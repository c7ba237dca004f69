#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qdiff/errors.hpp"
#include "qdiff/moduli.hpp"
#include "qdiff/pic.hpp"
#include "qdiff/qmod.hpp"
#include "qdiff/text.hpp"
#include "qdiff/torus.hpp"

namespace qdiff::cli {
namespace {

struct Config {
    std::string field = "rational";
    std::string q = "2";
    long prec = 32;
    long orbit_bound = 24;
    long retries = 1;
    std::uint64_t seed = 1;
    std::size_t height_cap = default_height_cap;
    std::vector<std::string> vars;
    std::string out;
    bool json = false;
    bool timing = false;
};

// Parsed view of the configuration shared by all subcommands.
struct Env {
    FieldSpec field;
    Quadratic q;
    ScalarVars vars;
};

Env make_env(const Config& cfg) {
    Env env;
    env.field = parse_field(cfg.field);
    env.q = parse_scalar(cfg.q);
    env.vars.emplace("q", env.q);
    for (const auto& v : cfg.vars) {
        auto eq = v.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("--var expects name=value, got '" + v + "'");
        env.vars[v.substr(0, eq)] = parse_scalar(v.substr(eq + 1), env.vars);
    }
    return env;
}

void check_in_field(const Quadratic& x, const FieldSpec& f) {
    if (x.is_rational()) return;
    if (f.kind != FieldSpec::Kind::quadratic || f.quad().d != x.d())
        throw MathError(to_string(x) + " does not lie in the field " + to_string(f));
}

Context make_ctx(const Env& env, const Quadratic& q, long prec) {
    if (env.field.kind == FieldSpec::Kind::padic)
        throw MathError("q-difference modules need a rational or quadratic field, got " + to_string(env.field));
    check_in_field(q, env.field);
    return make_context(env.field.quad(), q, prec);
}

std::string read_input(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    os << in.rdbuf();
    return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string matrix_text(const SMatrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " | " : "") << to_string(m(i, j));
        os << "\n";
    }
    return os.str();
}

std::string rationals_text(const std::vector<Rational>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + to_string(xs[i]);
    return s;
}

nlohmann::json config_json(const Config& cfg) {
    return {{"field", cfg.field}, {"q", cfg.q},       {"prec", cfg.prec},
            {"orbit_bound", cfg.orbit_bound}, {"seed", cfg.seed}, {"vars", cfg.vars}};
}

std::vector<IndecompLabel> classify_file(const Config& cfg, const Env& env, const std::string& text, std::ostream& err) {
    ClassifyOptions opt{cfg.orbit_bound, cfg.seed};
    long prec = cfg.prec;
    for (long attempt = 0;; ++attempt) {
        try {
            return classify(read_module(text, make_ctx(env, env.q, prec), env.vars), opt);
        } catch (const PrecisionError& e) {
            if (attempt >= cfg.retries) throw;
            err << "note: " << e.what() << "; retrying at prec " << 2 * prec << "\n";
            prec *= 2;
        }
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact q-difference modules, Picard classes, quantum tori and lattice moduli", "qdiff"};
    app.fallthrough();
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--field", cfg.field, "rational | quadratic D | padic P N")->capture_default_str();
    app.add_option("--q", cfg.q, "the parameter q")->capture_default_str();
    app.add_option("--prec", cfg.prec, "series precision")->check(CLI::Range(8L, 1L << 20))->capture_default_str();
    app.add_option("--orbit-bound", cfg.orbit_bound, "orbit bound M for a mod q^Z")
        ->check(CLI::Range(1L, 1L << 20))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--retries", cfg.retries, "precision doublings on PrecisionError")
        ->check(CLI::Range(0L, 8L))
        ->capture_default_str();
    app.add_option("--height-cap", cfg.height_cap, "coefficient height cap in bits")->capture_default_str();
    app.add_option("--var", cfg.vars, "scalar binding name=value (repeatable)");
    app.add_option("--out", cfg.out, "write output to a file instead of stdout");
    app.add_flag("--json", cfg.json, "machine-readable output where supported");
    app.add_flag("--timing", cfg.timing, "report elapsed time on stderr");

    std::string file1, file2;
    long window = 8, n = 0, n_max = 0;
    std::string kind = "f", root, expr_g, expr_u, expr_v, radius, eps, tau, mu, lattice, other;
    bool fit = false;
    long floor = Padic::default_floor;

    auto* classify_cmd = app.add_subcommand("classify", "normal-form labels of a module file");
    classify_cmd->add_option("module", file1, "module file ('-' for stdin)")->required();

    auto* build_cmd = app.add_subcommand("build", "module file from a label file");
    build_cmd->add_option("labels", file1, "label file")->required();

    auto* iso_cmd = app.add_subcommand("isocheck", "isomorphism test by the bounded linear oracle");
    iso_cmd->add_option("first", file1)->required();
    iso_cmd->add_option("second", file2)->required();
    iso_cmd->add_option("--window", window, "Laurent support window D")->check(CLI::Range(0L, 64L))->capture_default_str();

    auto* hom_cmd = app.add_subcommand("homdim", "dimension of Hom(V, W) in a window");
    hom_cmd->add_option("first", file1)->required();
    hom_cmd->add_option("second", file2)->required();
    hom_cmd->add_option("--window", window, "Laurent support window D")->check(CLI::Range(0L, 64L))->capture_default_str();

    auto* cocycle_cmd = app.add_subcommand("cocycle", "solve a(qz) - a(z) = g - g_0");
    cocycle_cmd->add_option("--g", expr_g, "series g")->required();
    cocycle_cmd->add_option("--n-max", n_max, "rows of small-divisor diagnostics")->check(CLI::Range(0L, 100000L));

    auto* picard_cmd = app.add_subcommand("picard", "Picard class of a unit");
    picard_cmd->add_option("--u", expr_u, "unit series")->required();
    picard_cmd->add_option("--v", expr_v, "second unit, compared with the first");

    auto* diag_cmd = app.add_subcommand("diagq", "small divisors |q^n - 1| as CSV");
    n_max = 0;
    diag_cmd->add_option("--n-max", n_max, "largest n")->check(CLI::Range(1L, 100000L))->required();
    diag_cmd->add_flag("--fit", fit, "append the least-squares fit as a comment");

    auto* push_cmd = app.add_subcommand("pushforward", "pushforward along z -> z^n (f) or xi -> xi^n (g)");
    auto* pull_cmd = app.add_subcommand("pullback", "pullback along z -> z^n (f) or xi -> xi^n (g)");
    for (auto* c : {push_cmd, pull_cmd}) {
        c->add_option("module", file1)->required();
        c->add_option("--n", n, "degree of the covering")->check(CLI::Range(1L, 64L))->required();
        c->add_option("--kind", kind, "f or g")->check(CLI::IsMember({"f", "g"}))->capture_default_str();
        c->add_option("--root", root, "s with s^n = q, when the target lives over s");
    }

    auto* tmul_cmd = app.add_subcommand("torus-mul", "product of two torus elements");
    tmul_cmd->add_option("first", file1)->required();
    tmul_cmd->add_option("second", file2)->required();
    tmul_cmd->add_option("--floor", floor, "relative precision floor")->check(CLI::Range(0L, 1L << 20))->capture_default_str();

    auto* tnorm_cmd = app.add_subcommand("torus-norm", "Banach norm and certified truncation");
    tnorm_cmd->add_option("element", file1)->required();
    tnorm_cmd->add_option("--radius", radius, "radius vector, e.g. '1/5, 3'")->required();
    tnorm_cmd->add_option("--eps", eps, "truncate terms of norm below eps");

    auto* moduli_cmd = app.add_subcommand("moduli", "SL2(Z) moduli of lattices");
    moduli_cmd->require_subcommand(1);
    auto* reduce_cmd = moduli_cmd->add_subcommand("reduce", "reduce an upper-half point");
    reduce_cmd->add_option("--tau", tau)->required();
    auto* equiv_cmd = moduli_cmd->add_subcommand("equiv", "SL2(Z) equivalence of two points");
    equiv_cmd->add_option("--tau", tau)->required();
    equiv_cmd->add_option("--mu", mu)->required();
    auto* similar_cmd = moduli_cmd->add_subcommand("similar", "similarity of two lattices");
    similar_cmd->add_option("--lattice", lattice, "'w1, w2'")->required();
    similar_cmd->add_option("--other", other, "'w1, w2'")->required();
    auto* stab_cmd = moduli_cmd->add_subcommand("stab", "the group {a : a L = L}");
    stab_cmd->add_option("--lattice", lattice, "'w1, w2'")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::parse);
    }

    auto start = std::chrono::steady_clock::now();
    std::ostringstream os;
    try {
        Env env = make_env(cfg);
        if (classify_cmd->parsed()) {
            auto labels = classify_file(cfg, env, read_input(file1), err);
            if (cfg.json) {
                nlohmann::json j{{"command", "classify"}, {"input", file1}, {"config", config_json(cfg)}, {"status", "ok"}};
                j["labels"] = nlohmann::json::array();
                for (const auto& l : labels)
                    j["labels"].push_back({{"n", l.n}, {"k", l.k}, {"l", l.l}, {"a", to_string(l.a)}, {"orbit_bound", l.orbit_bound}});
                os << j.dump(2) << "\n";
            } else {
                os << write_labels(labels);
            }
        } else if (build_cmd->parsed()) {
            auto labels = read_labels(read_input(file1), env.vars, cfg.orbit_bound);
            os << write_module(build(make_ctx(env, env.q, cfg.prec), labels));
        } else if (iso_cmd->parsed()) {
            auto ctx = make_ctx(env, env.q, cfg.prec);
            auto r = iso_oracle(read_module(read_input(file1), ctx, env.vars), read_module(read_input(file2), ctx, env.vars),
                                window, cfg.seed);
            using S = IsoResult::Status;
            os << (r.status == S::isomorphic ? "isomorphic" : r.status == S::not_isomorphic ? "not isomorphic" : "inconclusive")
               << "\nnullity " << r.nullity << "\nstabilized " << yes_no(r.stabilized) << "\n";
            if (r.witness) os << "witness\n" << matrix_text(*r.witness);
        } else if (hom_cmd->parsed()) {
            auto ctx = make_ctx(env, env.q, cfg.prec);
            auto h = hom_dim(read_module(read_input(file1), ctx, env.vars), read_module(read_input(file2), ctx, env.vars), window);
            os << "dimension " << h.dimension << "\nstabilized " << yes_no(h.stabilized) << "\n";
        } else if (cocycle_cmd->parsed()) {
            auto ctx = make_ctx(env, env.q, cfg.prec);
            auto sol = solve_additive(*ctx, parse_series_expr(expr_g, cfg.prec, env.vars), cfg.height_cap);
            os << "obstruction " << to_string(sol.obstruction) << "\nsolution " << to_string(sol.a) << "\n";
            if (n_max > 0) os << "# small divisors\n" << diagnostics_csv(divisor_diagnostics(env.q, env.field.quad(), n_max));
        } else if (picard_cmd->parsed()) {
            auto ctx = make_ctx(env, env.q, cfg.prec);
            auto cu = picard_class(*ctx, unit_from_series(parse_series_expr(expr_u, cfg.prec, env.vars)), cfg.orbit_bound);
            os << to_string(cu) << "\n";
            if (!expr_v.empty()) {
                auto cv = picard_class(*ctx, unit_from_series(parse_series_expr(expr_v, cfg.prec, env.vars)), cfg.orbit_bound);
                os << to_string(cv) << "\n" << to_string(class_eq(cu, cv, env.q)) << "\n";
            }
        } else if (diag_cmd->parsed()) {
            DivisorDiagnostics d;
            if (env.field.kind == FieldSpec::Kind::padic) {
                if (!env.q.is_rational()) throw MathError("a p-adic q must be rational");
                d = divisor_diagnostics(Padic::from_rational(env.q.a(), env.field.p, env.field.precision), n_max);
            } else {
                check_in_field(env.q, env.field);
                d = divisor_diagnostics(env.q, env.field.quad(), n_max);
            }
            os << diagnostics_csv(d);
            if (fit && d.fit_l) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "# fit L=%.12g C=%.12g\n", *d.fit_l, *d.fit_c);
                os << buf;
            }
        } else if (push_cmd->parsed() || pull_cmd->parsed()) {
            bool push = push_cmd->parsed();
            auto ctx = make_ctx(env, env.q, cfg.prec);
            auto v = read_module(read_input(file1), ctx, env.vars);
            // f_* and g^* land over q^n; f^* and g_* land over a root s.
            bool to_power = push == (kind == "f");
            QDiffModule w;
            if (to_power) {
                w = push ? pushforward_f(v, n) : pullback_g(v, n);
            } else {
                if (root.empty()) throw ParseError("--root is required: the target lives over s with s^n = q");
                Quadratic s = parse_scalar(root, env.vars);
                auto target = make_ctx(env, s, cfg.prec);
                w = push ? pushforward_g(v, n, target) : pullback_f(v, n, target);
            }
            os << "# q = " << to_string(w.ctx->q) << "\n" << write_module(w);
        } else if (tmul_cmd->parsed()) {
            os << write_torus(t_mul(read_torus(read_input(file1)), read_torus(read_input(file2)), floor));
        } else if (tnorm_cmd->parsed()) {
            auto x = read_torus(read_input(file1));
            auto r = parse_radius(radius);
            os << "norm " << to_string(t_norm(x, r)) << "\nterm-norms " << rationals_text(t_membership_report(x, r)) << "\n";
            if (!eps.empty()) {
                Quadratic e = parse_scalar(eps);
                if (!e.is_rational() || sgn(e.a()) <= 0) throw ParseError("--eps must be a positive rational");
                auto tr = t_truncate(x, r, e.a());
                os << "tail-bound " << to_string(tr.tail_bound) << "\nkept\n" << write_torus(tr.kept);
            }
        } else if (moduli_cmd->parsed()) {
            if (reduce_cmd->parsed()) {
                auto red = reduce_upper(parse_scalar(tau, env.vars));
                os << "tau " << to_string(red.tau) << "\nwitness " << to_string(red.g) << "\n";
            } else if (equiv_cmd->parsed()) {
                Quadratic t = parse_scalar(tau, env.vars), m = parse_scalar(mu, env.vars);
                auto e = sl2_equivalent(t, m);
                os << (e.equivalent ? "equivalent" : "inequivalent") << "\n";
                if (e.witness) os << "witness " << to_string(*e.witness) << "\n";
                if (!e.equivalent && e.gl2_equivalent) os << "gl2-equivalent\n";
            } else if (similar_cmd->parsed()) {
                auto s = lattice_similar(parse_lattice(lattice), parse_lattice(other));
                os << (s.similar ? "similar" : "not similar") << "\n";
                if (s.similar) os << "alpha " << to_string(s.alpha) << "\nbasis " << to_string(s.basis) << "\n";
            } else if (stab_cmd->parsed()) {
                os << to_string(isom_group_description(parse_lattice(lattice)));
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return static_cast<int>(ExitCode::resource);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::math);
    }

    if (cfg.out.empty()) {
        out << os.str();
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!(f << os.str())) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return static_cast<int>(ExitCode::resource);
        }
    }
    if (cfg.timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        err << "elapsed " << ms << " ms\n";
    }
    return 0;
}

}  // namespace qdiff::cli
