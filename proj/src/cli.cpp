#include "degen/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "degen/harness.hpp"

namespace degen::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kComplexHelp =
    "Complex literals: 're', 're+imi', 're-imi' or 'imi', each part with an optional exponent "
    "(e.g. 2, -1.5e-3+2i, 0.5-0.25i, 3i).";

// Argument problems map to exit status 2.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

FamilyKind family_kind(const std::string& name)
{
    try {
        return family_from_string(name);
    } catch (const std::exception&) {
        throw ArgumentError("unknown family '" + name + "' (node, cusp1, cusp2, custom)");
    }
}

ordered_json complex_pair(Complex v) { return ordered_json::array({v.real(), v.imag()}); }

ordered_json matrix_json(const CMatrix& M)
{
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            row.push_back(complex_pair(M(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Complex complex_from_json(const ordered_json& v)
{
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_string())
        return parse_complex(v.get<std::string>());
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ArgumentError("config: expected a complex value, got " + v.dump());
}

std::vector<Complex> complex_list_from_json(const ordered_json& v)
{
    std::vector<Complex> out;
    if (!v.is_array())
        throw ArgumentError("config: expected a list of complex values");
    for (const auto& e : v)
        out.push_back(complex_from_json(e));
    return out;
}

RootPoly polynomial(const CliConfig& cfg)
{
    if (!cfg.proots.empty())
        return poly_from_roots(cfg.proots, {1.0, 0.0});
    if (cfg.a && cfg.b)
        return poly_from_roots({*cfg.a, *cfg.b}, {1.0, 0.0});
    throw ArgumentError("the polynomial P is required (--proots, or --a and --b for genus 2)");
}

CurveSpec curve(const CliConfig& cfg, Complex lambda)
{
    const FamilyKind kind = family_kind(cfg.family);
    if (kind == FamilyKind::Generic) {
        if (cfg.proots.empty())
            throw ArgumentError("custom curves need --proots with all 2g+1 branch points");
        return make_generic(cfg.proots);
    }
    return make_family(kind, cfg.genus, polynomial(cfg), lambda);
}

QuadratureConfig quadrature(const CliConfig& cfg)
{
    QuadratureConfig q;
    q.order = cfg.order;
    q.max_order = std::max(q.max_order, 32 * cfg.order);
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        throw ArgumentError(e.what());
    }
    return q;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw ArgumentError("cannot open output file '" + path + "'");
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

int cmd_periods(const CliConfig& cfg, std::ostream& out)
{
    const auto lams = parse_lambda(cfg.lambda);
    if (lams.size() != 1)
        throw ArgumentError("periods takes a single lambda value");
    const CurveSpec spec = curve(cfg, lams.front());
    const PeriodData pd = compute_periods(spec, paper_basis(spec), quadrature(cfg));
    ordered_json j;
    j["A"] = matrix_json(pd.A);
    j["B"] = matrix_json(pd.B);
    j["Z"] = matrix_json(pd.Z);
    j["sym_defect"] = pd.sym_defect;
    j["min_eig"] = pd.min_eig;
    j["cond_A"] = pd.cond_A;
    j["orientation_flipped"] = pd.orientation_flipped;
    Output o(cfg.out, out);
    o.stream() << j.dump(2) << '\n';
    return 0;
}

int cmd_kernel(const CliConfig& cfg, std::ostream& out)
{
    const auto lams = parse_lambda(cfg.lambda);
    const QuadratureConfig quad = quadrature(cfg);
    const CurveSpec first = curve(cfg, lams.front());
    if (first.kind == FamilyKind::Generic)
        throw ArgumentError("kernel needs a degenerating family (k0 lives on its normalization)");
    const CurveSpec norm = normalization_curve(first);
    const PeriodData pd0 = compute_periods(norm, paper_basis(norm), quad);

    std::vector<KernelSample> samples;
    for (const auto& lam : lams) {
        const CurveSpec spec = curve(cfg, lam);
        const PeriodData pd = compute_periods(spec, paper_basis(spec), quad);
        for (const auto& z : cfg.z)
            samples.push_back(sample_kernel(spec, pd, pd0, z));
    }
    Output o(cfg.out, out);
    if (cfg.format == "csv") {
        o.stream() << "lambda_re,lambda_im,z_re,z_im,k_lambda,k0,psi,mu_lambda\n";
        for (const auto& s : samples)
            o.stream() << format_double(s.lambda.real()) << ',' << format_double(s.lambda.imag()) << ','
                       << format_double(s.z.real()) << ',' << format_double(s.z.imag()) << ','
                       << format_double(s.k_lambda) << ',' << format_double(s.k0) << ',' << format_double(s.psi)
                       << ',' << format_double(s.mu_lambda) << '\n';
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& s : samples)
            arr.push_back({{"lambda", complex_pair(s.lambda)},
                           {"z", complex_pair(s.z)},
                           {"k_lambda", s.k_lambda},
                           {"k0", s.k0},
                           {"psi", s.psi},
                           {"mu_lambda", s.mu_lambda}});
        o.stream() << arr.dump(2) << '\n';
    }
    return 0;
}

int cmd_constants(const CliConfig& cfg, std::ostream& out)
{
    Complex a, b;
    if (cfg.a && cfg.b) {
        a = *cfg.a;
        b = *cfg.b;
    } else if (cfg.proots.size() == 2) {
        a = cfg.proots[0];
        b = cfg.proots[1];
    } else {
        throw ArgumentError("constants needs the genus-2 parameters --a and --b");
    }
    if (cfg.genus != 2)
        throw ArgumentError("constants is defined for genus 2 only");
    const auto k = genus2_constants(a, b, quadrature(cfg));
    Output o(cfg.out, out);
    o.stream() << constants_to_json(k) << '\n';
    return 0;
}

int cmd_sweep(const CliConfig& cfg, std::ostream& out)
{
    SweepConfig sc;
    sc.kind = family_kind(cfg.family);
    if (sc.kind == FamilyKind::Generic)
        throw ArgumentError("sweep needs a degenerating family");
    sc.genus = cfg.genus;
    sc.P = polynomial(cfg);
    sc.lambdas = parse_lambda(cfg.lambda);
    sc.zs = cfg.z;
    sc.quad = quadrature(cfg);
    sc.threads = cfg.threads;
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ArgumentError(e.what());
    }
    const SweepReport rep = run_sweep(sc);
    Output o(cfg.out, out);
    if (cfg.format == "csv")
        write_csv(rep, o.stream());
    else
        o.stream() << report_to_json(rep) << '\n';
    return 0;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out)
{
    SweepReport rep;
    try {
        rep = acceptance_run(cfg.suite, cfg.threads);
    } catch (const std::invalid_argument& e) {
        throw ArgumentError(e.what());
    }
    for (const auto& v : rep.verdicts)
        out << (v.pass ? "PASS" : "FAIL") << "  [" << v.id << "] " << v.title << ": " << v.measured
            << " (expected " << v.expected << ")\n";
    if (!cfg.out.empty()) {
        Output o(cfg.out, out);
        o.stream() << report_to_json(rep) << '\n';
    }
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

Complex parse_complex(const std::string& text)
{
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex full("^([+-]?" + num + ")([+-]" + num + ")?i$");
    static const std::regex imag_only("^([+-]?" + num + ")?i$");
    static const std::regex real_only("^([+-]?" + num + ")$");
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    std::smatch m;
    try {
        if (std::regex_match(s, m, real_only))
            return {std::stod(m[1]), 0.0};
        if (std::regex_match(s, m, full) && m[2].matched)
            return {std::stod(m[1]), std::stod(m[2])};
        if (std::regex_match(s, m, imag_only))
            return {0.0, m[1].matched ? std::stod(m[1]) : 1.0};
        if (s == "-i")
            return {0.0, -1.0};
        if (s == "+i")
            return {0.0, 1.0};
    } catch (const std::out_of_range&) {
        throw ArgumentError("complex literal out of range: '" + text + "'");
    }
    throw ArgumentError("malformed complex literal '" + text + "'");
}

std::string format_complex(Complex v)
{
    if (v.imag() == 0.0 && !std::signbit(v.imag()))
        return format_double(v.real());
    return format_double(v.real()) + (std::signbit(v.imag()) ? "-" : "+") + format_double(std::abs(v.imag())) + "i";
}

std::vector<Complex> parse_lambda(const std::string& text)
{
    const auto c1 = text.find(':');
    if (c1 == std::string::npos)
        return {parse_complex(text)};
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw ArgumentError("lambda range must read START:END:PER_DECADE");
    const Complex start = parse_complex(text.substr(0, c1));
    const Complex end = parse_complex(text.substr(c1 + 1, c2 - c1 - 1));
    int per = 0;
    try {
        std::size_t used = 0;
        per = std::stoi(text.substr(c2 + 1), &used);
        if (used != text.size() - c2 - 1)
            throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw ArgumentError("lambda range: PER_DECADE must be an integer");
    }
    try {
        return geometric_lambdas(std::abs(start), std::abs(end), per, std::arg(start));
    } catch (const std::invalid_argument& e) {
        throw ArgumentError(e.what());
    }
}

std::string config_to_json(const CliConfig& cfg)
{
    ordered_json j;
    j["subcommand"] = cfg.subcommand;
    j["family"] = cfg.family;
    j["genus"] = cfg.genus;
    ordered_json pr = ordered_json::array();
    for (const auto& r : cfg.proots)
        pr.push_back(format_complex(r));
    j["proots"] = pr;
    j["a"] = cfg.a ? ordered_json(format_complex(*cfg.a)) : ordered_json(nullptr);
    j["b"] = cfg.b ? ordered_json(format_complex(*cfg.b)) : ordered_json(nullptr);
    j["lambda"] = cfg.lambda;
    ordered_json zs = ordered_json::array();
    for (const auto& z : cfg.z)
        zs.push_back(format_complex(z));
    j["z"] = zs;
    j["order"] = cfg.order;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    j["suite"] = cfg.suite;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

void apply_config_json(CliConfig& cfg, const std::string& json_text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ArgumentError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ArgumentError("config: top level must be an object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "subcommand")
                cfg.subcommand = v.get<std::string>();
            else if (key == "family")
                cfg.family = v.get<std::string>();
            else if (key == "genus")
                cfg.genus = v.get<int>();
            else if (key == "proots")
                cfg.proots = complex_list_from_json(v);
            else if (key == "a")
                cfg.a = v.is_null() ? std::nullopt : std::optional<Complex>(complex_from_json(v));
            else if (key == "b")
                cfg.b = v.is_null() ? std::nullopt : std::optional<Complex>(complex_from_json(v));
            else if (key == "lambda")
                cfg.lambda = v.is_string() ? v.get<std::string>() : format_complex(complex_from_json(v));
            else if (key == "z")
                cfg.z = v.is_array() ? complex_list_from_json(v) : std::vector<Complex>{complex_from_json(v)};
            else if (key == "order")
                cfg.order = v.get<int>();
            else if (key == "out")
                cfg.out = v.get<std::string>();
            else if (key == "format")
                cfg.format = v.get<std::string>();
            else if (key == "suite")
                cfg.suite = v.get<std::string>();
            else if (key == "threads")
                cfg.threads = v.get<int>();
            else
                throw ArgumentError("config: unknown field '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("config: ") + e.what());
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Period matrices, Bergman kernels and asymptotic checks for degenerating hyperelliptic curves.\n" +
                 std::string(kComplexHelp)};
    app.name("degen-bergman");

    std::string config_path, family, lambda, out_path, format, suite, a_text, b_text;
    std::vector<std::string> proots, zs;
    int genus = 0, order = 0, threads = 0;
    bool print_config = false;

    app.add_option("--config", config_path, "JSON file with the same field names as the flags");
    auto* o_family = app.add_option("--family", family, "node | cusp1 | cusp2 | custom");
    auto* o_genus = app.add_option("--genus", genus, "genus g (2..6 for families)");
    auto* o_proots = app.add_option("--proots", proots, "roots of P (custom: all branch points)");
    auto* o_a = app.add_option("--a", a_text, "genus-2 shorthand: P = (x - a)(x - b)");
    auto* o_b = app.add_option("--b", b_text, "genus-2 shorthand: P = (x - a)(x - b)");
    auto* o_lambda = app.add_option("--lambda", lambda, "single value or START:END:PER_DECADE");
    auto* o_z = app.add_option("--z", zs, "kernel points z = sqrt(x)");
    auto* o_order = app.add_option("--order", order, "initial quadrature order");
    auto* o_out = app.add_option("--out", out_path, "output file (default: standard output)");
    auto* o_format = app.add_option("--format", format, "csv | json");
    auto* o_suite = app.add_option("--suite", suite, "verify selector: full | quadrature | lemmas");
    auto* o_threads = app.add_option("--threads", threads, "worker threads (overrides DEGEN_BERGMAN_THREADS)");
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");

    const char* names[][2] = {{"periods", "period matrices A, B, Z as JSON"},
                              {"kernel", "kernel samples k_lambda, k0, psi, mu_lambda"},
                              {"constants", "genus-2 constants as JSON"},
                              {"sweep", "lambda sweep report (csv or json)"},
                              {"verify", "acceptance suite; exit 0 iff every criterion passes"}};
    std::vector<CLI::App*> subs;
    for (const auto& n : names)
        subs.push_back(app.add_subcommand(n[0], n[1])->fallthrough());
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        CliConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw ArgumentError("cannot read config file '" + config_path + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            apply_config_json(cfg, buf.str());
        }
        for (auto* s : subs)
            if (s->parsed())
                cfg.subcommand = s->get_name();
        if (*o_family)
            cfg.family = family;
        if (*o_genus)
            cfg.genus = genus;
        if (*o_proots) {
            cfg.proots.clear();
            for (const auto& p : proots)
                cfg.proots.push_back(parse_complex(p));
        }
        if (*o_a)
            cfg.a = parse_complex(a_text);
        if (*o_b)
            cfg.b = parse_complex(b_text);
        if (*o_lambda)
            cfg.lambda = lambda;
        if (*o_z) {
            cfg.z.clear();
            for (const auto& z : zs)
                cfg.z.push_back(parse_complex(z));
        }
        if (*o_order)
            cfg.order = order;
        if (*o_out)
            cfg.out = out_path;
        if (*o_format)
            cfg.format = format;
        if (*o_suite)
            cfg.suite = suite;
        if (*o_threads)
            cfg.threads = threads;

        if (cfg.format != "csv" && cfg.format != "json")
            throw ArgumentError("format must be csv or json");
        if (print_config) {
            out << config_to_json(cfg) << '\n';
            return 0;
        }
        if (cfg.subcommand == "periods")
            return cmd_periods(cfg, out);
        if (cfg.subcommand == "kernel")
            return cmd_kernel(cfg, out);
        if (cfg.subcommand == "constants")
            return cmd_constants(cfg, out);
        if (cfg.subcommand == "sweep")
            return cmd_sweep(cfg, out);
        if (cfg.subcommand == "verify")
            return cmd_verify(cfg, out);
        throw ArgumentError(cfg.subcommand.empty() ? "a subcommand is required (see --help)"
                                                   : "unknown subcommand '" + cfg.subcommand + "'");
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace degen::cli
