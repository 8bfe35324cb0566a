#include "degen/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace degen {

namespace {

constexpr double kMinSeparation = 0.05;
constexpr std::size_t kFitDepth = 6;

bool z_less(Complex a, Complex b)
{
    if (a.real() != b.real())
        return a.real() < b.real();
    return a.imag() < b.imag();
}

std::string z_label(Complex z)
{
    return "z=" + format_double(z.real()) + (z.imag() < 0 ? "" : "+") + format_double(z.imag()) + "i";
}

}  // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool SweepReport::all_pass() const
{
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

void SweepConfig::validate() const
{
    if (kind == FamilyKind::Generic)
        throw std::invalid_argument("sweep: a degenerating family is required");
    if (lambdas.empty())
        throw std::invalid_argument("sweep: no lambda values");
    if (zs.empty())
        throw std::invalid_argument("sweep: no z values");
    quad.validate();
    for (const auto& lam : lambdas) {
        const CurveSpec spec = make_family(kind, genus, P, lam);
        for (const auto& z : zs) {
            require_finite(z, "sweep z");
            if (z == Complex{0.0, 0.0})
                throw std::invalid_argument("sweep: z must be nonzero");
            for (const auto& r : spec.roots())
                if (std::abs(z * z - r) < kMinSeparation)
                    throw std::invalid_argument("sweep: z^2 is closer than 0.05 to a branch point");
        }
    }
}

std::vector<Complex> geometric_lambdas(double start, double end, int per_decade, double phase)
{
    if (!(start > 0.0) || !(end > 0.0) || !(start > end))
        throw std::invalid_argument("geometric_lambdas: need start > end > 0");
    if (per_decade < 1)
        throw std::invalid_argument("geometric_lambdas: per_decade must be >= 1");
    const double l0 = std::log10(start), l1 = std::log10(end);
    const int steps = static_cast<int>(std::lround((l0 - l1) * per_decade));
    std::vector<Complex> out;
    for (int k = 0; k <= steps; ++k) {
        const double m = std::pow(10.0, l0 - static_cast<double>(k) / per_decade);
        out.push_back(std::polar(m, phase));
    }
    return out;
}

int worker_count(int requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("DEGEN_BERGMAN_THREADS")) {
        char* endp = nullptr;
        const long v = std::strtol(env, &endp, 10);
        if (endp != env && v > 0)
            return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepReport run_sweep(const SweepConfig& cfg)
{
    cfg.validate();
    const CurveSpec tmpl = make_family(cfg.kind, cfg.genus, cfg.P, cfg.lambdas.front());
    const CurveSpec norm = normalization_curve(tmpl);
    const PeriodData pd0 = compute_periods(norm, paper_basis(norm), cfg.quad);
    const auto star = star_vector(cfg.genus, cfg.P);

    const std::size_t nl = cfg.lambdas.size(), nz = cfg.zs.size();
    std::vector<SweepRow> rows(nl * nz);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t li = next++; li < nl; li = next++) {
            const Complex lam = cfg.lambdas[li];
            try {
                const CurveSpec spec = make_family(cfg.kind, cfg.genus, cfg.P, lam);
                const PeriodData pd = compute_periods(spec, paper_basis(spec), cfg.quad);
                const double L = -std::log(std::abs(lam));
                for (std::size_t zi = 0; zi < nz; ++zi) {
                    SweepRow& row = rows[li * nz + zi];
                    const Complex z = cfg.zs[zi];
                    try {
                        row.sample = sample_kernel(spec, pd, pd0, z);
                        row.psi_minus_logk0 = row.sample.psi - std::log(row.sample.k0);
                        row.det_imZ = det_im_Z(pd);
                        row.sym_defect = pd.sym_defect;
                        row.min_eig = pd.min_eig;
                        switch (cfg.kind) {
                        case FamilyKind::Node:
                            row.predicted = kPi * node_prediction(z, pd0.Z, pd0.A, star);
                            row.ratio = row.psi_minus_logk0 * L / row.predicted;
                            break;
                        case FamilyKind::CuspII:
                            row.predicted = cuspII_prediction(z, spec, pd0);
                            row.ratio = row.psi_minus_logk0 * L / row.predicted;
                            break;
                        case FamilyKind::CuspI:
                            row.predicted = cuspI_limit(z, spec, pd0);
                            row.ratio = row.sample.k_lambda / row.predicted;
                            break;
                        case FamilyKind::Generic: break;
                        }
                    } catch (const std::exception& e) {
                        row.sample.lambda = lam;
                        row.sample.z = z;
                        row.error = e.what();
                    }
                }
            } catch (const std::exception& e) {
                for (std::size_t zi = 0; zi < nz; ++zi) {
                    SweepRow& row = rows[li * nz + zi];
                    row.sample.lambda = lam;
                    row.sample.z = cfg.zs[zi];
                    row.error = e.what();
                }
            }
        }
    };
    const int nthreads = std::min<int>(worker_count(cfg.threads), static_cast<int>(nl));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        const double ma = std::abs(a.sample.lambda), mb = std::abs(b.sample.lambda);
        if (ma != mb)
            return ma > mb;
        const double pa = std::arg(a.sample.lambda), pb = std::arg(b.sample.lambda);
        if (pa != pb)
            return pa < pb;
        return z_less(a.sample.z, b.sample.z);
    });

    SweepReport rep;
    rep.rows = rows;
    for (const auto& z : cfg.zs) {
        std::vector<double> lams, ys;
        for (const auto& row : rep.rows) {
            if (!row.error.empty() || row.sample.z != z)
                continue;
            lams.push_back(std::abs(row.sample.lambda));
            if (cfg.kind == FamilyKind::CuspI)
                ys.push_back(std::abs(row.sample.k_lambda - row.predicted));
            else
                ys.push_back(row.psi_minus_logk0);
        }
        if (lams.size() > kFitDepth) {
            lams.erase(lams.begin(), lams.end() - kFitDepth);
            ys.erase(ys.begin(), ys.end() - kFitDepth);
        }
        try {
            if (cfg.kind == FamilyKind::CuspI)
                rep.fits["remainder_loglog:" + z_label(z)] = fit_loglog(lams, ys);
            else
                rep.fits["log_inverse:" + z_label(z)] = fit_log_inverse(lams, ys);
        } catch (const std::exception&) {
            // Too few usable rows; the rows themselves carry the diagnostics.
        }
    }
    return rep;
}

FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_loglog: size mismatch");
    if (xs.size() < 3)
        throw std::invalid_argument("fit_loglog: at least 3 points are required");
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::invalid_argument("fit_loglog: entries must be positive");
    const bool inc = xs[1] > xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i)
        if ((xs[i] > xs[i - 1]) != inc || xs[i] == xs[i - 1])
            throw std::invalid_argument("fit_loglog: xs must be strictly monotone");

    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (f.intercept + f.slope * lx[i]);
        f.residuals.push_back(r);
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

FitResult fit_log_inverse(const std::vector<double>& abs_lambdas, const std::vector<double>& Es)
{
    if (abs_lambdas.size() != Es.size())
        throw std::invalid_argument("fit_log_inverse: size mismatch");
    if (abs_lambdas.size() < 3)
        throw std::invalid_argument("fit_log_inverse: at least 3 points are required");
    std::vector<double> u;
    for (std::size_t i = 0; i < abs_lambdas.size(); ++i) {
        const double m = abs_lambdas[i];
        if (!(m > 0.0) || !(m < 1.0))
            throw std::invalid_argument("fit_log_inverse: |lambda| must lie in (0, 1)");
        if (i > 0 && !(m < abs_lambdas[i - 1]))
            throw std::invalid_argument("fit_log_inverse: |lambda| must be strictly decreasing");
        u.push_back(1.0 / -std::log(m));
    }
    double suu = 0.0, sue = 0.0, mean_e = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += u[i] * u[i];
        sue += u[i] * Es[i];
        mean_e += Es[i];
    }
    mean_e /= Es.size();
    FitResult f;
    f.slope = sue / suu;
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = Es[i] - f.slope * u[i];
        f.residuals.push_back(r);
        sse += r * r;
        sst += (Es[i] - mean_e) * (Es[i] - mean_e);
    }
    f.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    return f;
}

double phase_average(const CurveSpec& tmpl, double abs_lambda, int n_phases, Complex z, const QuadratureConfig& quad)
{
    if (tmpl.kind != FamilyKind::CuspI)
        throw std::invalid_argument("phase_average: only defined for the cusp I family");
    if (n_phases < 8)
        throw std::invalid_argument("phase_average: at least 8 phases are needed to cancel quarter powers");
    if (!(abs_lambda > 0.0))
        throw std::invalid_argument("phase_average: |lambda| must be positive");
    const CurveSpec norm = normalization_curve(tmpl);
    const PeriodData pd0 = compute_periods(norm, paper_basis(norm), quad);
    const double limit = cuspI_limit(z, tmpl, pd0);
    double acc = 0.0;
    for (int j = 0; j < n_phases; ++j) {
        const CurveSpec spec = with_lambda(tmpl, std::polar(abs_lambda, 2.0 * kPi * j / n_phases));
        const PeriodData pd = compute_periods(spec, paper_basis(spec), quad);
        acc += kernel_at(spec, pd, z) - limit;
    }
    return acc / n_phases;
}

void write_csv(const SweepReport& report, std::ostream& os)
{
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : report.rows) {
        if (!r.error.empty())
            continue;
        const auto& s = r.sample;
        const double vals[] = {s.lambda.real(), s.lambda.imag(), std::abs(s.lambda), s.z.real(), s.z.imag(),
                               s.k_lambda, s.k0, s.psi, r.psi_minus_logk0, r.predicted, r.ratio, r.det_imZ,
                               s.mu_lambda, r.sym_defect, r.min_eig};
        for (std::size_t i = 0; i < std::size(vals); ++i)
            os << (i ? "," : "") << format_double(vals[i]);
        os << '\n';
    }
}

std::string report_to_json(const SweepReport& report, int indent)
{
    using nlohmann::ordered_json;
    auto num = [](double v) -> ordered_json {
        if (std::isfinite(v))
            return v;
        return nullptr;
    };
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        const auto& s = r.sample;
        ordered_json o;
        o["lambda_re"] = num(s.lambda.real());
        o["lambda_im"] = num(s.lambda.imag());
        o["abs_lambda"] = num(std::abs(s.lambda));
        o["z_re"] = num(s.z.real());
        o["z_im"] = num(s.z.imag());
        if (!r.error.empty()) {
            o["error"] = r.error;
        } else {
            o["k_lambda"] = num(s.k_lambda);
            o["k0"] = num(s.k0);
            o["psi"] = num(s.psi);
            o["psi_minus_logk0"] = num(r.psi_minus_logk0);
            o["predicted"] = num(r.predicted);
            o["ratio"] = num(r.ratio);
            o["det_imZ"] = num(r.det_imZ);
            o["mu_lambda"] = num(s.mu_lambda);
            o["sym_defect"] = num(r.sym_defect);
            o["min_eig"] = num(r.min_eig);
        }
        rows.push_back(o);
    }
    ordered_json fits = ordered_json::object();
    for (const auto& [name, f] : report.fits) {
        ordered_json res = ordered_json::array();
        for (double r : f.residuals)
            res.push_back(num(r));
        fits[name] = {{"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"r2", num(f.r2)}, {"residuals", res}};
    }
    ordered_json verdicts = ordered_json::object();
    for (const auto& v : report.verdicts)
        verdicts[v.id] = {{"title", v.title}, {"pass", v.pass}, {"measured", v.measured}, {"expected", v.expected}};
    ordered_json doc;
    doc["rows"] = rows;
    doc["fits"] = fits;
    doc["verdicts"] = verdicts;
    return doc.dump(indent);
}

}  // namespace degen
