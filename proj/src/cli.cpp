#include "layered_elastica/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "layered_elastica/bie2d.hpp"
#include "layered_elastica/green2d.hpp"
#include "layered_elastica/green3d.hpp"
#include "layered_elastica/parallel.hpp"
#include "layered_elastica/specfun.hpp"
#include "layered_elastica/verify.hpp"

namespace le::cli {

std::vector<double> parse_list(const std::string& spec) {
    std::string s = spec;
    for (char& c : s)
        if (c == '[' || c == ']' || c == ',') c = ' ';
    std::istringstream in(s);
    std::vector<double> v;
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        double d = 0.0;
        try {
            d = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size()) throw Error(ErrorCode::invalid_input, "not a number: '" + tok + "'");
        v.push_back(d);
    }
    return v;
}

std::vector<double> parse_range(const std::string& spec) {
    std::string s = spec;
    for (char& c : s)
        if (c == ':') c = ',';
    std::vector<double> p = parse_list(s);
    if (p.size() == 1) p = {p[0], p[0], 1.0};
    if (p.size() != 3 || p[2] < 1 || p[2] != std::floor(p[2]) || !std::isfinite(p[0]) || !std::isfinite(p[1]))
        throw Error(ErrorCode::invalid_input, "range must be a:b:n with integer n >= 1, got '" + spec + "'");
    int n = (int)p[2];
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? p[0] : p[0] + (p[1] - p[0]) * i / (n - 1);
    return v;
}

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::invalid_input, "cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw Error(ErrorCode::invalid_input, "write failed for '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::invalid_input, "cannot rename to '" + path + "': " + ec.message());
    }
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::invalid_input, "cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Inline JSON when the argument starts with '{', else a file name.
std::string json_arg(const std::string& arg) {
    auto p = arg.find_first_not_of(" \t\n");
    if (p != std::string::npos && arg[p] == '{') return arg;
    return read_file(arg);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-")
        std::cout << content << std::flush;
    else
        write_atomic(out, content);
}

template <int D>
Eigen::Matrix<double, D, 1> vec_arg(const std::string& s, const char* what) {
    std::vector<double> v = parse_list(s);
    if ((int)v.size() != D)
        throw Error(ErrorCode::invalid_input, std::string(what) + " needs " + std::to_string(D) + " values");
    Eigen::Matrix<double, D, 1> x;
    for (int i = 0; i < D; ++i) x(i) = v[i];
    return x;
}

struct Common {
    std::string medium, quad, out;
};

ElasticMedium load_medium(const Common& c, int dim) {
    if (c.medium.empty()) throw Error(ErrorCode::invalid_input, "--medium is required");
    ElasticMedium m = medium_from_json(json_arg(c.medium));
    m.dim = dim;
    m.validate();
    return m;
}

QuadConfig load_quad(const Common& c) { return c.quad.empty() ? QuadConfig{} : quad_config_from_json(json_arg(c.quad)); }

// ---------------------------------------------------------------------------

struct EvalArgs {
    Common c;
    int dim = 2;
    std::string y, x1 = "-2:2:64", x2 = "-2:2:64";
    double x3 = 0.5;
};

int cmd_eval(const EvalArgs& a) {
    if (a.dim != 2 && a.dim != 3) throw Error(ErrorCode::invalid_input, "--dim must be 2 or 3");
    ElasticMedium m = load_medium(a.c, a.dim);
    QuadConfig q = load_quad(a.c);
    std::vector<double> g1 = parse_range(a.x1), g2 = parse_range(a.x2);
    const int d = a.dim;
    const std::size_t n = g1.size() * g2.size();
    std::vector<std::string> rows(n);
    Vec3 y3 = Vec3::Zero();
    Vec2 y2 = Vec2::Zero();
    if (a.y.empty()) throw Error(ErrorCode::invalid_input, "--y is required");
    if (d == 2)
        y2 = vec_arg<2>(a.y, "--y");
    else
        y3 = vec_arg<3>(a.y, "--y");
    parallel_for(n, [&](std::size_t k) {
        double x1 = g1[k / g2.size()], x2 = g2[k % g2.size()];
        CMatX G(d, d);
        try {
            if (d == 2)
                G = assemble_G(Vec2(x1, x2), y2, m, q).G;
            else
                G = assemble_G3d(Vec3(x1, x2, a.x3), y3, m, q).G;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::coincident_points) throw;
            G.setConstant(cplx(std::nan(""), std::nan("")));
        }
        std::string r = num(x1) + "," + num(x2);
        if (d == 3) r += "," + num(a.x3);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) r += "," + num(G(i, j).real()) + "," + num(G(i, j).imag());
        rows[k] = r + "\n";
    });
    std::string csv = d == 2 ? "x1,x2" : "x1,x2,x3";
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
            std::string e = "G" + std::to_string(i) + std::to_string(j);
            csv += "," + e + "_re," + e + "_im";
        }
    csv += "\n";
    for (const auto& r : rows) csv += r;
    emit(a.c.out, csv);
    return 0;
}

struct FarArgs {
    Common c;
    int dim = 2;
    std::string wave = "p", key, y, angles = "0.1:3.0:30";
    int column = 1;
    double phi = 0.0;
};

int cmd_farfield(const FarArgs& a) {
    if (a.dim != 2 && a.dim != 3) throw Error(ErrorCode::invalid_input, "--dim must be 2 or 3");
    ElasticMedium m = load_medium(a.c, a.dim);
    std::vector<double> th = parse_range(a.angles);
    if (a.y.empty()) throw Error(ErrorCode::invalid_input, "--y is required");
    std::string csv;
    if (a.dim == 2) {
        if (a.wave != "p" && a.wave != "s") throw Error(ErrorCode::invalid_input, "--wave must be p or s");
        if (a.column != 1 && a.column != 2) throw Error(ErrorCode::invalid_input, "--column must be 1 or 2");
        Vec2 y = vec_arg<2>(a.y, "--y");
        Wave w = a.wave == "p" ? Wave::p : Wave::s;
        csv = "theta,U_re,U_im\n";
        for (double t : th) {
            cplx v = far_field(w, a.column, t, y, m).value;
            csv += num(t) + "," + num(v.real()) + "," + num(v.imag()) + "\n";
        }
    } else {
        Vec3 y = vec_arg<3>(a.y, "--y");
        const Coeff3DKey* key = nullptr;
        for (const auto& k : all_keys3d())
            if (key_name(k) == a.key) key = &k;
        if (!key) {
            std::string names;
            for (const auto& k : all_keys3d()) names += " " + key_name(k);
            throw Error(ErrorCode::invalid_key, "unknown --key '" + a.key + "'; valid:" + names);
        }
        csv = "theta,phi,case,F_re,F_im\n";
        for (double t : th) {
            int cs = far_field_case_of(*key, side_of(t));
            if (cs == 0)
                throw Error(ErrorCode::invalid_key, a.key + " has no far field on the side of theta = " + num(t));
            cplx v = far_field3d(cs, *key, t, a.phi, y, m).value;
            csv += num(t) + "," + num(a.phi) + "," + std::to_string(cs) + "," + num(v.real()) + "," +
                   num(v.imag()) + "\n";
        }
    }
    emit(a.c.out, csv);
    return 0;
}

struct VerifyArgs {
    std::string suite, out;
    bool all = false;
    std::uint64_t seed = 7;
};

int cmd_verify(const VerifyArgs& a) {
    if (a.all == !a.suite.empty()) throw Error(ErrorCode::invalid_input, "give exactly one of --suite or --all");
    std::vector<std::string> names = a.all ? suite_names() : std::vector<std::string>{a.suite};
    suite_description(names.front());  // rejects unknown names before any work
    VerifyOptions o;
    o.seed = a.seed;
    bool ok = true;
    std::vector<std::string> reps;
    for (const auto& n : names) {
        SuiteReport r = run_suite(n, o);
        std::cerr << (r.pass ? "PASS " : "FAIL ") << n << " (" << r.runtime << " s)\n";
        ok = ok && r.pass;
        reps.push_back(r.to_json());
    }
    std::cerr << transcription_report().summary() << "\n";
    std::string body;
    if (a.all) {
        body = "[\n";
        for (std::size_t i = 0; i < reps.size(); ++i) body += reps[i] + (i + 1 < reps.size() ? ",\n" : "\n");
        body += "]\n";
    } else {
        body = reps.front() + "\n";
    }
    emit(a.out, body);
    return ok ? 0 : 2;
}

struct SolveArgs {
    Common c;
    std::string profile = "{\"type\": \"flat\"}", source, grid = "";
    double R = 4.0, ppw = 10.0;
    int nodes = 512;
};

int cmd_solve(const SolveArgs& a) {
    if (a.c.out.empty()) throw Error(ErrorCode::invalid_input, "--out is required (writes <out>.json and <out>.csv)");
    ElasticMedium m = load_medium(a.c, 2);
    SurfaceProfile prof = profile_from_json(json_arg(a.profile));
    std::vector<double> s = parse_list(a.source);
    if (s.size() != 6) throw Error(ErrorCode::invalid_input, "--source needs [z1,z2,a1_re,a1_im,a2_re,a2_im]");
    IncidentSource src;
    src.z = Vec2(s[0], s[1]);
    src.a = CVec2(cplx(s[2], s[3]), cplx(s[4], s[5]));
    SolverOptions o;
    o.R = a.R;
    o.boundary_nodes = a.nodes;
    o.points_per_wavelength = a.ppw;
    if (!a.c.quad.empty()) o.quad = load_quad(a.c);
    ScatterSolution sol = solve_scattering(m, prof, src, o);
    TransmissionCheck tc = transmission_check(sol);

    std::string gspec = a.grid.empty() ? num(-a.R) + ":" + num(a.R) + ":41" : a.grid;
    std::vector<double> g = parse_range(gspec);
    const std::size_t n = g.size() * g.size();
    std::vector<std::string> rows(n);
    parallel_for(n, [&](std::size_t k) {
        Vec2 x(g[k / g.size()], g[k % g.size()]);
        CVec2 u;
        if ((x - src.z).norm() < 1e-12) {
            u.setConstant(cplx(std::nan(""), std::nan("")));
        } else if (x.norm() < a.R) {
            u = sol.field_inside(x);
        } else if (x.norm() > a.R) {
            u = reconstruct_exterior(sol, x);
        } else {
            u = sol.field_inside(x * (1.0 - 1e-12));
        }
        bool above = x(1) >= prof(x(0));
        rows[k] = num(x(0)) + "," + num(x(1)) + "," + (above ? "1" : "-1") + "," + num(u(0).real()) + "," +
                  num(u(0).imag()) + "," + num(u(1).real()) + "," + num(u(1).imag()) + "\n";
    });
    std::string csv = "x1,x2,side,u1_re,u1_im,u2_re,u2_im\n";
    for (const auto& r : rows) csv += r;

    nlohmann::ordered_json h;
    h["medium"] = nlohmann::json::parse(medium_to_json(m));
    h["profile"] = nlohmann::json::parse(json_arg(a.profile));
    h["source"] = {{"z", {s[0], s[1]}}, {"a", {s[2], s[3], s[4], s[5]}}};
    h["R"] = a.R;
    h["boundary_nodes"] = a.nodes;
    h["points_per_wavelength"] = a.ppw;
    h["mesh_nodes"] = sol.disc.mesh.nodes.size();
    h["mesh_triangles"] = sol.disc.mesh.tris.size();
    h["residual"] = sol.residual;
    h["transmission"] = {{"displacement_jump", tc.displacement_jump},
                         {"traction_jump_max", tc.traction_jump},
                         {"traction_jump_rms", tc.traction_jump_rms},
                         {"traction_scale", tc.traction_scale}};
    h["grid_csv"] = std::filesystem::path(a.c.out + ".csv").filename().string();
    write_atomic(a.c.out + ".csv", csv);
    write_atomic(a.c.out + ".json", h.dump(2) + "\n");
    return 0;
}

struct ProbeArgs {
    std::string fn = "H", z = "1,0";
    int order = 0;
};

int cmd_specfun_probe(const ProbeArgs& a) {
    std::vector<double> z = parse_list(a.z);
    if (z.size() != 2) throw Error(ErrorCode::invalid_input, "--z needs re,im");
    cplx arg(z[0], z[1]), v;
    if (a.fn == "J")
        v = bessel_j(a.order, arg);
    else if (a.fn == "Y")
        v = bessel_y(a.order, arg);
    else if (a.fn == "H")
        v = hankel1(a.order, arg);
    else
        throw Error(ErrorCode::invalid_input, "--fn must be J, Y or H");
    std::cout << num(v.real()) << "," << num(v.imag()) << "\n";
    return 0;
}

void add_common(CLI::App* s, Common& c, bool out = true) {
    s->add_option("--medium", c.medium, "medium JSON file or inline JSON object");
    s->add_option("--quad", c.quad, "quadrature JSON file or inline object {tol, rel_tol, node_budget, indent_scale}");
    if (out) s->add_option("--out", c.out, "output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Two-layered elastodynamic Green tensors and rough-interface scattering", "layered-elastica"};
    app.require_subcommand(1);

    EvalArgs ea;
    auto* se = app.add_subcommand("eval", "Green tensor on a grid of observation points (CSV)");
    add_common(se, ea.c);
    se->add_option("--dim", ea.dim, "2 or 3");
    se->add_option("--y", ea.y, "source point, e.g. 0.3,0.7")->required();
    se->add_option("--x1", ea.x1, "x1 grid a:b:n");
    se->add_option("--x2", ea.x2, "x2 grid a:b:n");
    se->add_option("--x3", ea.x3, "x3 of the grid plane (3D)");

    FarArgs fa;
    auto* sf = app.add_subcommand("farfield", "far-field patterns over angles (CSV)");
    add_common(sf, fa.c);
    sf->add_option("--dim", fa.dim, "2 or 3");
    sf->add_option("--y", fa.y, "source point")->required();
    sf->add_option("--wave", fa.wave, "p or s (2D)");
    sf->add_option("--column", fa.column, "column j (2D)");
    sf->add_option("--key", fa.key, "coefficient key (3D), e.g. A_{p,3}^+");
    sf->add_option("--phi", fa.phi, "azimuth (3D)");
    sf->add_option("--angles", fa.angles, "elevation angles a:b:n");

    VerifyArgs va;
    auto* sv = app.add_subcommand("verify", "run verification suites (JSON report)");
    sv->add_option("--suite", va.suite, "suite name");
    sv->add_flag("--all", va.all, "run every suite in order");
    sv->add_option("--seed", va.seed, "random seed");
    sv->add_option("--out", va.out, "report file (default stdout)");
    std::string list;
    for (const auto& n : suite_names()) list += "\n  " + n + ": " + suite_description(n);
    sv->footer("Suites:" + list);

    SolveArgs sa;
    auto* ss = app.add_subcommand("solve", "rough-interface scattering (writes <out>.json and <out>.csv)");
    add_common(ss, sa.c);
    ss->add_option("--profile", sa.profile, "profile JSON file or inline object");
    ss->add_option("--source", sa.source, "[z1,z2,a1_re,a1_im,a2_re,a2_im]")->required();
    ss->add_option("--R", sa.R, "radius of the coupling circle");
    ss->add_option("--nodes", sa.nodes, "boundary nodes N (multiple of 4)");
    ss->add_option("--ppw", sa.ppw, "P2 nodes per shortest wavelength");
    ss->add_option("--grid", sa.grid, "output grid a:b:n in both coordinates (default -R:R:41)");

    ProbeArgs pa;
    auto* sp = app.add_subcommand("specfun-probe", "");
    sp->group("");
    sp->add_option("--fn", pa.fn);
    sp->add_option("--order", pa.order);
    sp->add_option("--z", pa.z);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }
    try {
        if (se->parsed()) return cmd_eval(ea);
        if (sf->parsed()) return cmd_farfield(fa);
        if (sv->parsed()) return cmd_verify(va);
        if (ss->parsed()) return cmd_solve(sa);
        if (sp->parsed()) return cmd_specfun_probe(pa);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace le::cli
