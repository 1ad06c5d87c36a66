// One line per acceptance criterion; exit status is the number of failures.

#include "zigzag/commands.hpp"

#include <iostream>

using namespace zz;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
    int id;
    std::string what;
    bool ok;
    std::string detail;
    double seconds;
    double target;
};

std::vector<Line> lines;

template <class F>
void criterion(int id, const std::string& what, double target, F&& body)
{
    auto t0 = Clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_time = s < target;
    if (!in_time)
        detail += "; over the runtime target";
    lines.push_back({id, what, ok && in_time, detail, s, target});
    auto& l = lines.back();
    std::printf("%s  %2d  %-58s %7.1f s / %4.0f s  %s\n", l.ok ? "PASS" : "FAIL", l.id, l.what.c_str(), l.seconds,
                l.target, l.detail.c_str());
    std::fflush(stdout);
}

std::string sci(double v)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", v);
    return b;
}

bool all_pass(std::initializer_list<CheckResult> rs, std::string& detail)
{
    bool ok = true;
    long cases = 0, failures = 0;
    for (auto& r : rs) {
        ok = ok && r.pass();
        cases += r.cases;
        failures += r.failures;
    }
    detail = std::to_string(cases) + " cases, " + std::to_string(failures) + " failures";
    return ok;
}

std::string search_text(const SearchResult& s)
{
    return std::to_string(s.passing.size()) + "/" + std::to_string(s.candidates) + " conventions pass" +
           (s.unique_frozen() ? " (unique, frozen)" : "");
}

} // namespace

int main()
{
    SuiteOptions o;

    criterion(1, "exact D^2 = 0, exhaustive n<=2,k<=2 + 500 random", 120, [&](std::string& d) {
        auto ex = check_zz_square_exhaustive(o);
        auto rnd = check_zz_square_random(o);
        auto s = search_zigzag_signs(o);
        bool ok = all_pass({ex, rnd}, d) && ex.cases == o.shapes.count(2) && rnd.cases == 500 && s.unique_frozen();
        d += "; " + search_text(s);
        return ok;
    });

    criterion(2, "derivation and associativity of the shuffle product", 120, [&](std::string& d) {
        auto der = check_derivation(o, 200);
        auto as = check_associativity(o);
        bool ok = all_pass({der, as}, d);
        d += " [" + der.note + "; " + as.note + "]";
        return ok;
    });

    criterion(3, "Col is a chain and algebra map (1x1)", 60, [&](std::string& d) {
        auto c = check_collapse(o);
        bool ok = all_pass({c}, d);
        d += " [" + c.note + "]";
        return ok;
    });

    criterion(4, "curved D^2 = 0 and its five pieces, exhaustive", 180, [&](std::string& d) {
        auto r = check_curved_identities(o, 0, 200);
        auto s = search_curved_signs(o);
        bool ok = all_pass({r.parts[0], r.parts[1], r.parts[2], r.parts[3], r.parts[4], r.parts[5], r.parts[6]}, d);
        d += "; " + search_text(s);
        return ok && s.unique_frozen();
    });

    criterion(5, "rect D^2, rect curved D^2 and star identities", 180, [&](std::string& d) {
        auto r = check_rect(o);
        auto s = search_rect_signs(o);
        bool ok = all_pass({r.parts[0], r.parts[1], r.parts[2], r.parts[3], r.parts[4], r.parts[5]}, d);
        d += "; " + search_text(s);
        return ok && s.unique_frozen();
    });

    criterion(6, "numerical chain map, 3 families x 5 chains", 180, [&](std::string& d) {
        auto out = cmd_verify_chainmap(default_config("verify-chainmap"));
        double r = out.report["residual"], rh = out.report["residual_half_points"];
        d = "max residual " + sci(r) + " at P=24, " + sci(rh) + " at P=12";
        return r <= 1e-6 && rh > r;
    });

    criterion(7, "It(x.y) = It(x) ^ It(y)", 120, [&](std::string& d) {
        auto alg = bundled::chain_algebra();
        auto ch = bundled::chains();
        QuadratureSpec q;
        std::vector<double> u = bundled::samples(0)[0].u;
        double worst = 0;
        int cases = 0;
        for (auto& fam : bundled::path_families())
            for (auto& x : ch)
                for (auto& y : ch) {
                    int px = chain_shifted_degree(alg, x.chain), py = chain_shifted_degree(alg, y.chain);
                    if (px + py > fam.params())
                        continue;
                    auto it = [&](const FormChain& c) {
                        return [&](const std::vector<double>& uu, const Dirs& dirs) {
                            return it_chain(c, fam, uu, dirs, q, 2);
                        };
                    };
                    auto xy = zz_shuffle(alg, x.chain, y.chain);
                    auto lhs = param_form(it(xy), u, 2, px + py, 2);
                    auto rhs = wedge(param_form(it(x.chain), u, 2, px, 2), param_form(it(y.chain), u, 2, py, 2));
                    for (auto& [J, v] : lhs.comps)
                        worst = std::max(worst, max_abs(v - rhs.comps[J]));
                    ++cases;
                }
        d = std::to_string(cases) + " pairs, max " + sci(worst);
        return cases > 0 && worst <= 1e-6;
    });

    criterion(8, "1-holonomy: ordered series (N=12) vs ODE", 60, [&](std::string& d) {
        QuadratureSpec q;
        CompiledForm A(bundled::connection());
        auto u = bundled::base_point();
        auto fam = bundled::transport_path();
        double gap = max_abs(holonomy1(A, fam, u, 12, q).value -
                             parallel_transport(A, fam, u, 0, 1, TransportMode::ode, q).value);
        CompiledForm N(bundled::nilpotent_connection());
        auto line = bundled::nilpotent_path();
        Mat expect = Mat::Identity(2, 2);
        expect(0, 1) = 1;
        double nil = 0;
        for (int n = 1; n <= 12; ++n)
            nil = std::max(nil, max_abs(holonomy1(N, line, u, n, q).value - expect));
        nil = std::max(nil, max_abs(parallel_transport(N, line, u, 0, 1, TransportMode::ode, q).value - expect));
        d = "bounded gap " + sci(gap) + ", nilpotent gap " + sci(nil) + " (N=1..12)";
        return gap <= 1e-8 && nil <= 1e-12;
    });

    criterion(9, "abelian closed forms exp(int a), exp(iint B)", 60, [&](std::string& d) {
        QuadratureSpec q;
        q.trunc = 14;
        auto u = bundled::base_point();
        auto a = bundled::abelian_connection();
        CompiledForm cA(a);
        auto path = bundled::transport_path();
        double exact = abelian_transport(a, path, u);
        double t1 = std::abs(parallel_transport(cA, path, u, 0, 1, TransportMode::ode, q).value(0, 0) - exact);
        double t2 = std::abs(holonomy1(cA, path, u, q.trunc, q).value(0, 0) - exact);
        auto B = bundled::abelian_curving();
        CompiledForm cB(B), zero(PolyMatrixForm(2, 1));
        double h = 0;
        for (auto& fam : bundled::bigons()) {
            double e = abelian_holonomy2(B, fam, u);
            h = std::max(h, std::abs(holonomy2({&zero, &cB}, fam, u, q.trunc, q).value(0, 0) - e));
        }
        d = "transport " + sci(std::max(t1, t2)) + ", holonomy2 " + sci(h);
        return std::max(t1, t2) <= 1e-8 && h <= 1e-8;
    });

    criterion(10, "2-holonomy (M=6) vs ODE; square-mode correction", 300, [&](std::string& d) {
        QuadratureSpec q;
        auto u = bundled::base_point();
        CompiledForm A(bundled::connection()), B1(bundled::curving()), B2(bundled::curving_alt());
        double gap = 0;
        for (auto& fam : bundled::bigons())
            for (auto* B : {&B1, &B2}) {
                SurfaceData s{&A, B};
                gap = std::max(gap, max_abs(holonomy2(s, fam, u, 6, q).value - ode_holonomy2(s, fam, u, 400, q)));
            }
        SurfaceData s{&A, &B1};
        auto sq = bundled::square();
        auto h = holonomy2(s, sq, u, 6, q, true);
        Mat ode = ode_holonomy2(s, sq, u, 400, q);
        double raw = max_abs(h.series * h.left_edge - ode), fixed = max_abs(h.value - ode);
        d = "bigon gap " + sci(gap) + "; square gap " + sci(raw) + " -> " + sci(fixed) + " corrected";
        return gap <= 1e-6 && fixed <= 1e-6 && raw > 1e-6;
    });

    criterion(11, "Col then It^I equals It^ZZ (1x1 forms)", 60, [&](std::string& d) {
        FormAlgebra alg{2, 1};
        QuadratureSpec q;
        double worst = 0, mag = 0;
        int cases = 0;
        for (auto& fam : bundled::path_families())
            for (auto& c : bundled::scalar_chains()) {
                int p = chain_shifted_degree(alg, c.chain);
                auto col = collapse(alg, c.chain);
                for (auto& smp : bundled::samples(p)) {
                    Dirs dirs(smp.dirs.begin(), smp.dirs.begin() + p);
                    Mat zz = it_chain(c.chain, fam, smp.u, dirs, q, 1);
                    Mat in = it_chain(col, fam, smp.u, dirs, q, 1);
                    worst = std::max(worst, max_abs(zz - in));
                    mag = std::max(mag, max_abs(zz));
                    ++cases;
                }
            }
        d = std::to_string(cases) + " cases, max " + sci(worst) + " (values up to " + sci(mag) + ")";
        return cases > 0 && worst <= 1e-8;
    });

    int failed = 0;
    for (auto& l : lines)
        failed += !l.ok;
    std::printf("%d of %zu criteria pass\n", int(lines.size()) - failed, lines.size());
    return failed;
}
