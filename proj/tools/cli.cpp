#include "cli.hpp"

#include <cstdint>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "skewalg/holonomy.hpp"
#include "skewalg/model_io.hpp"
#include "skewalg/reduction.hpp"

namespace skewalg {

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kUsage = 2;

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string dual_label(int index) { return "e^" + std::to_string(index + 1); }

std::string frame_label(const AlgebroidPtr& E, int index) { return E->frame()[index]; }

std::string print_form(const EForm& form) {
    EForm s = form.simplified();
    if (s.coeffs().empty()) return "0";
    std::string out;
    for (const auto& [tuple, coeff] : s.coeffs()) {
        if (!out.empty()) out += " + ";
        std::string label;
        for (size_t r = 0; r < tuple.size(); ++r) {
            if (r) label += "^";
            label += dual_label(tuple[r]);
        }
        std::string c = coeff.to_string();
        if (c == "1" && !label.empty()) out += label;
        else if (label.empty()) out += c;
        else out += "(" + c + ")*" + label;
    }
    return out;
}

std::string print_section(const Section& section) {
    Section s = section.simplified();
    if (s.coeffs().empty()) return "0";
    std::string out;
    const auto& E = s.host();
    for (const auto& [tuple, coeff] : s.coeffs()) {
        if (!out.empty()) out += " + ";
        std::string c = coeff.to_string();
        if (c == "1") out += frame_label(E, tuple[0]);
        else out += "(" + c + ")*" + frame_label(E, tuple[0]);
    }
    return out;
}

std::vector<Expr> parse_components(const std::string& list, int expected,
                                   const std::set<std::string>& symbols, const char* what) {
    std::vector<Expr> out;
    std::string cur;
    std::istringstream stream(list);
    while (std::getline(stream, cur, ','))
        out.push_back(parse_expr(cur, symbols));
    if (static_cast<int>(out.size()) != expected)
        throw DomainError(std::string(what) + ": expected " + std::to_string(expected) +
                          " comma-separated components, got " + std::to_string(out.size()));
    return out;
}

Env parse_at(const std::string& spec) {
    Env env;
    if (spec.empty()) return env;
    std::istringstream stream(spec);
    std::string item;
    while (std::getline(stream, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw DomainError("--at expects k=v pairs, got " + item);
        std::string key = item.substr(0, eq);
        Expr value = parse_expr(item.substr(eq + 1), {});
        env[key] = eval_scalar(value, {});
    }
    return env;
}

Expr parse_value(const std::string& text) { return parse_expr(text, {}); }

int cmd_check(const std::string& file, int trials, int samples, double tol, uint64_t seed) {
    Model model = load_model(file);
    const auto& E = model.algebroid;
    std::cout << "model: " << file << "\n";
    std::cout << "base_dim: " << E->base_dim() << "  rank: " << E->rank() << "\n";
    std::cout << "lie: " << (is_lie(E, trials) ? "true" : "false") << "\n";

    bool almost = true;
    for (int i = 0; i < E->rank() && almost; ++i)
        for (int j = i + 1; j < E->rank() && almost; ++j)
            almost = almost_lie_defect(Section::basis(E, i), Section::basis(E, j))
                         .symbolically_zero(trials, tol);
    std::cout << "almost_lie: " << (almost ? "true" : "false") << "\n";
    std::cout << "modular_form: " << print_form(modular_form(E).representative) << "\n";

    int exit_code = kOk;
    if (model.subalgebroid) {
        auto [n0, m0] = *model.subalgebroid;
        auto report = subalgebroid_check(E, n0, m0, samples, tol, seed);
        std::cout << "subalgebroid(n0=" << n0 << ", m0=" << m0 << "): "
                  << (report.ok ? "ok" : "violated") << "\n";
        if (!report.ok) {
            for (const auto& f : report.failures) std::cout << "  violation: " << f << "\n";
            std::cout << "  max_violation: " << fmt(report.max_violation) << "\n";
            exit_code = kMathFailure;
        } else {
            std::cout << "relative_modular_class: "
                      << print_form(relative_modular_class(E, n0, m0).representative) << "\n";
        }
    }
    return exit_code;
}

int cmd_modular(const std::string& file) {
    Model model = load_model(file);
    std::cout << print_form(modular_form(model.algebroid).representative) << "\n";
    return kOk;
}

int cmd_bracket(const std::string& file, const std::string& xs, const std::string& ys,
                const std::string& at) {
    Model model = load_model(file);
    const auto& E = model.algebroid;
    auto syms = E->scalar_symbols();
    Section X = Section::from_components(E, parse_components(xs, E->rank(), syms, "--x"));
    Section Y = Section::from_components(E, parse_components(ys, E->rank(), syms, "--y"));
    Section B = bracket(X, Y);
    std::cout << "[X,Y] = " << print_section(B) << "\n";
    Env env = parse_at(at);
    if (!env.empty()) {
        auto comps = B.components();
        for (int k = 0; k < E->rank(); ++k)
            std::cout << "  [X,Y]^" << (k + 1) << " = " << fmt(eval_expr(comps[k], env)) << "\n";
    }
    return kOk;
}

int cmd_derham(const std::string& file, const std::string& function,
               const std::string& oneform) {
    Model model = load_model(file);
    const auto& E = model.algebroid;
    if (function.empty() == oneform.empty())
        throw DomainError("derham: pass exactly one of --function or --oneform");
    EForm input = function.empty()
                      ? EForm::from_components(
                            E, parse_components(oneform, E->rank(), E->scalar_symbols(),
                                                "--oneform"))
                      : EForm::function(E, parse_expr(function, E->scalar_symbols()));
    std::cout << "d(omega) = " << print_form(de_rham(input)) << "\n";
    return kOk;
}

int cmd_hamiltonian(const std::string& file, const std::string& H_text, const std::string& at) {
    Model model = load_model(file);
    const auto& E = model.algebroid;
    auto syms = E->scalar_symbols();
    for (const auto& xi : E->momentum_names()) syms.insert(xi);
    Expr H = parse_expr(H_text, syms);
    VectorFieldExpr XH = hamiltonian_vf(E, H);
    for (size_t i = 0; i < XH.coords().size(); ++i)
        std::cout << "d/dt " << XH.coords()[i] << " = " << simplify(XH.components()[i]).to_string()
                  << "\n";
    Env env = parse_at(at);
    if (!env.empty()) {
        std::cout << "at " << at << ":\n";
        for (size_t i = 0; i < XH.coords().size(); ++i)
            std::cout << "  d/dt " << XH.coords()[i] << " = "
                      << fmt(eval_expr(XH.components()[i], env)) << "\n";
    }
    return kOk;
}

int cmd_sleigh(const std::string& m, const std::string& J, const std::string& a,
               const std::string& b, const std::string& complement, bool symbolic) {
    SleighComplement mode = complement == "metric" ? SleighComplement::Metric
                                                   : SleighComplement::Paper;
    if (complement != "metric" && complement != "paper")
        throw DomainError("--complement must be paper or metric");
    auto value = [&](const std::string& text, const char* name) {
        return symbolic ? Expr::sym(name) : parse_value(text);
    };
    auto result = chaplygin_sleigh(value(m, "m"), value(J, "J"), value(a, "a"), value(b, "b"),
                                   mode);
    std::cout << "complement: " << complement << "\n";
    std::cout << "c^1_12 = " << simplify(result.c112).to_string() << "\n";
    std::cout << "c^2_12 = " << simplify(result.c212).to_string() << "\n";
    std::cout << "mod(D) = " << print_form(result.modular.representative) << "\n";
    if (!symbolic) {
        Env empty;
        std::cout << "numeric: c^1_12 = " << fmt(eval_expr(result.c112, empty))
                  << ", c^2_12 = " << fmt(eval_expr(result.c212, empty)) << "\n";
    }
    return kOk;
}

int cmd_product(const std::string& file1, const std::string& file2) {
    Model m1 = load_model(file1), m2 = load_model(file2);
    AlgebroidPtr P = direct_product(m1.algebroid, m2.algebroid);
    std::cout << "base_dim: " << P->base_dim() << "  rank: " << P->rank() << "\n";
    EForm mod = modular_form(P).representative;
    std::cout << "modular_form: " << print_form(mod) << "\n";

    // Verify the product formula against the factor representatives.
    int n1 = m1.algebroid->rank();
    EForm expected(P, 1);
    auto f1 = modular_form(m1.algebroid).representative.components();
    auto f2 = modular_form(m2.algebroid).representative.components();
    std::map<std::string, Expr> rename;
    for (int a = 0; a < m2.algebroid->base_dim(); ++a)
        rename[m2.algebroid->coords()[a]] = Expr::sym(P->coords()[m1.algebroid->base_dim() + a]);
    for (int i = 0; i < n1; ++i) expected.add_term({i}, f1[i]);
    for (int i = 0; i < m2.algebroid->rank(); ++i)
        expected.add_term({n1 + i}, subst_expr(f2[i], rename));
    bool ok = (mod - expected).symbolically_zero();
    std::cout << "product_formula: " << (ok ? "ok" : "violated") << "\n";
    return ok ? kOk : kMathFailure;
}

int cmd_holonomy(const std::string& file, const std::string& path_name, int steps, int n0_flag,
                 int m0_flag, double tol, const std::string& at) {
    Model model = load_model(file);
    const auto& E = model.algebroid;
    int n0 = n0_flag, m0 = m0_flag;
    if (n0 <= 0 && model.subalgebroid) {
        n0 = model.subalgebroid->first;
        m0 = model.subalgebroid->second;
    }
    if (n0 <= 0)
        throw DomainError("holonomy: pass --n0 (and --m0) or declare subalgebroid in the model");
    if (m0 < 0) m0 = E->base_dim();

    AlgebroidPtr E0 = restrict_algebroid(E, n0, m0);
    auto it = model.paths.find(path_name);
    if (it == model.paths.end()) throw DomainError("holonomy: no path named " + path_name);
    // the stored path is interpreted on the restricted algebroid
    std::vector<Expr> base(it->second.base.begin(), it->second.base.begin() + m0);
    std::vector<Expr> fiber(it->second.fiber.begin(), it->second.fiber.begin() + n0);
    PathSpec p(E0, base, fiber);

    Env params = parse_at(at);
    auto result = relative_holonomy(E, n0, m0, p, steps, params);
    double rel_error = std::abs(result.ode_value - result.formula_value) /
                       std::max(1e-300, std::abs(result.formula_value));
    std::cout << "ode_value:     " << fmt(result.ode_value) << "\n";
    std::cout << "formula_value: " << fmt(result.formula_value) << "\n";
    std::cout << "rel_error:     " << fmt(rel_error) << "\n";
    std::cout << "holonomy_identity: " << (rel_error <= tol ? "ok" : "violated") << "\n";
    return rel_error <= tol ? kOk : kMathFailure;
}

int cmd_relation(const std::string& file1, const std::string& file2,
                 const std::string& fiber_map, const std::string& base_map, bool swap_legs) {
    Model m1 = load_model(file1), m2 = load_model(file2);
    const auto& E1 = m1.algebroid;
    const auto& E2 = m2.algebroid;

    Morphism phi;
    phi.source = E1;
    phi.leg.target = E2;
    std::istringstream rows(fiber_map);
    std::string row;
    while (std::getline(rows, row, ';'))
        phi.leg.fiber_map.push_back(
            parse_components(row, E1->rank(), E1->scalar_symbols(), "--fiber-map row"));
    if (static_cast<int>(phi.leg.fiber_map.size()) != E2->rank())
        throw DomainError("relation: --fiber-map needs n2 rows separated by ';'");
    if (!base_map.empty())
        phi.leg.base_map = parse_components(base_map, E2->base_dim(), E1->scalar_symbols(),
                                            "--base-map");
    else if (E2->base_dim() > 0)
        throw DomainError("relation: --base-map required when the target has coordinates");

    auto report = morphism_check(phi);
    std::cout << "morphism: " << (report.ok ? "ok" : "violated") << "\n";
    for (const auto& f : report.failures) std::cout << "  violation: " << f << "\n";

    LinearRelation R = relation_from_graph(phi);
    if (swap_legs) R = relation_swap(R);
    std::cout << "relation_modular_class: " << print_form(relation_modular_class(R)) << "\n";
    if (report.ok) {
        std::cout << "morphism_modular_class: "
                  << print_form(morphism_modular_class(phi).representative) << "\n";
    }
    return report.ok ? kOk : kMathFailure;
}

int cmd_dump(const std::string& file) {
    Model model = load_model(file);
    std::cout << dump_model(model);
    return kOk;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"skewalg: skew algebroid calculus, modular classes, and holonomy"};
    app.require_subcommand(1);

    std::string file, file2, xs, ys, at, function, oneform, H_text, path_name;
    std::string m_text = "1", J_text = "1", a_text = "0", b_text = "0";
    std::string complement = "paper", fiber_map, base_map;
    int trials = 32, samples = 101, steps = 1000, n0 = -1, m0 = -1;
    std::uint64_t seed = 0x5ab5abull;
    double tol = 1e-9, holonomy_tol = 1e-6;
    bool symbolic = false, swap_legs = false;

    auto* check = app.add_subcommand("check", "Lie/almost-Lie/modular report for a model");
    check->add_option("model", file)->required();
    check->add_option("--trials", trials);
    check->add_option("--samples", samples);
    check->add_option("--tol", tol);
    check->add_option("--seed", seed);

    auto* modular = app.add_subcommand("modular", "print the modular form");
    modular->add_option("model", file)->required();

    auto* bracket_cmd = app.add_subcommand("bracket", "bracket of two sections");
    bracket_cmd->add_option("model", file)->required();
    bracket_cmd->add_option("--x", xs)->required();
    bracket_cmd->add_option("--y", ys)->required();
    bracket_cmd->add_option("--at", at);

    auto* derham = app.add_subcommand("derham", "de Rham derivative of a function or 1-form");
    derham->add_option("model", file)->required();
    derham->add_option("--function", function);
    derham->add_option("--oneform", oneform);

    auto* ham = app.add_subcommand("hamiltonian", "Hamiltonian vector field on E*");
    ham->add_option("model", file)->required();
    ham->add_option("--H", H_text)->required();
    ham->add_option("--at", at);

    auto* sleigh = app.add_subcommand("sleigh", "Chaplygin sleigh reduction on se(2)");
    sleigh->add_option("--m", m_text);
    sleigh->add_option("--J", J_text);
    sleigh->add_option("--a", a_text);
    sleigh->add_option("--b", b_text);
    sleigh->add_option("--complement", complement);
    sleigh->add_flag("--symbolic", symbolic);

    auto* product = app.add_subcommand("product", "direct product and the product formula");
    product->add_option("model1", file)->required();
    product->add_option("model2", file2)->required();

    auto* holonomy = app.add_subcommand("holonomy", "linear holonomy vs the relative class");
    holonomy->add_option("model", file)->required();
    holonomy->add_option("--path", path_name)->required();
    holonomy->add_option("--steps", steps);
    holonomy->add_option("--n0", n0);
    holonomy->add_option("--m0", m0);
    holonomy->add_option("--tol", holonomy_tol);
    holonomy->add_option("--at", at);

    auto* relation = app.add_subcommand("relation", "morphism graph as a relation");
    relation->add_option("model1", file)->required();
    relation->add_option("model2", file2)->required();
    relation->add_option("--fiber-map", fiber_map)->required();
    relation->add_option("--base-map", base_map);
    relation->add_flag("--swap", swap_legs);

    auto* dump = app.add_subcommand("dump", "canonical re-serialization of a model");
    dump->add_option("model", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (check->parsed()) return cmd_check(file, trials, samples, tol, seed);
        if (modular->parsed()) return cmd_modular(file);
        if (bracket_cmd->parsed()) return cmd_bracket(file, xs, ys, at);
        if (derham->parsed()) return cmd_derham(file, function, oneform);
        if (ham->parsed()) return cmd_hamiltonian(file, H_text, at);
        if (sleigh->parsed()) return cmd_sleigh(m_text, J_text, a_text, b_text, complement, symbolic);
        if (product->parsed()) return cmd_product(file, file2);
        if (holonomy->parsed())
            return cmd_holonomy(file, path_name, steps, n0, m0, holonomy_tol, at);
        if (relation->parsed()) return cmd_relation(file, file2, fiber_map, base_map, swap_legs);
        if (dump->parsed()) return cmd_dump(file);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace skewalg
