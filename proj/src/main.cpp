// Command-line front end: homology tables, twist-family invariants and the
// verification suite, over tangle files in the JSON schema of kh/diagram.hpp.
//
// Exit codes: 0 success, 2 input error, 3 unstabilized at cap, 4 resource cap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kh/limit.hpp"

namespace {

using namespace kh;

// Half-integer quantum grading from the doubled internal one.
std::string q_str(int q2) {
    if (q2 % 2 == 0) return std::to_string(q2 / 2);
    return std::to_string(q2) + "/2";
}

// Rows q descending, columns u ascending.
std::string uq_table(const GradedVectorSpace& v) {
    std::set<int> us;
    std::set<int, std::greater<int>> q2s;
    for (const auto& [k, n] : v.dims) {
        if (!n) continue;
        us.insert(k.first);
        q2s.insert(k.second);
    }
    std::ostringstream out;
    out << "q\\u";
    for (int u : us) out << '\t' << u;
    out << '\n';
    for (int q2 : q2s) {
        out << q_str(q2);
        for (int u : us) {
            const auto it = v.dims.find({u, q2});
            out << '\t' << (it == v.dims.end() ? 0 : it->second);
        }
        out << '\n';
    }
    return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot open output file '" + out_path + "'");
    f << text;
}

int cmd_kh(const std::string& path, int level, std::size_t cap, const std::string& format,
           const std::string& out_path) {
    const SuturedTangle t = SuturedTangle::load(path);
    const GradedVectorSpace v = homology(t, level, cap);
    std::ostringstream out;
    if (format == "json") {
        out << "{\"tangle\":\"" << t.name << "\",\"level\":" << level
            << ",\"homology\":" << json_table(v) << ",\"jones\":\"" << jones_polynomial(v)
            << "\",\"determinant\":" << determinant(v)
            << ",\"thin\":" << (is_thin(v) ? "true" : "false") << "}\n";
    } else {
        out << "tangle\t" << t.name << "\nlevel\t" << level << "\n";
        out << uq_table(v);
        out << tsv_table(v);
        out << "jones\t" << jones_polynomial(v) << "\n";
        out << "determinant\t" << determinant(v) << "\n";
        out << "thin\t" << (is_thin(v) ? 1 : 0) << "\n";
    }
    emit(out.str(), out_path);
    return 0;
}

int cmd_closure(const std::string& path, int level, const std::string& format,
                const std::string& out_path) {
    const SuturedTangle t = SuturedTangle::load(path);
    const PlanarDiagram d = closure(t, level);
    std::ostringstream out;
    if (format == "json") {
        out << "{\"tangle\":\"" << t.name << "\",\"level\":" << level
            << ",\"crossings\":[";
        for (std::size_t i = 0; i < d.crossings.size(); ++i) {
            if (i) out << ",";
            out << "[" << d.crossings[i][0] << "," << d.crossings[i][1] << ","
                << d.crossings[i][2] << "," << d.crossings[i][3] << "]";
        }
        out << "],\"signs\":[";
        for (std::size_t i = 0; i < d.signs.size(); ++i) out << (i ? "," : "") << d.signs[i];
        out << "],\"n_plus\":" << d.n_plus << ",\"n_minus\":" << d.n_minus
            << ",\"free_circles\":" << d.free_circles.size() << "}\n";
    } else {
        out << "tangle\t" << t.name << "\nlevel\t" << level << "\n";
        out << "crossings\t" << d.crossings.size() << "\n";
        out << "n_plus\t" << d.n_plus << "\nn_minus\t" << d.n_minus << "\n";
        out << "writhe\t" << d.n_plus - d.n_minus << "\n";
        out << "free_circles\t" << d.free_circles.size() << "\n";
        for (std::size_t i = 0; i < d.crossings.size(); ++i)
            out << "crossing\t" << d.crossings[i][0] << '\t' << d.crossings[i][1] << '\t'
                << d.crossings[i][2] << '\t' << d.crossings[i][3] << '\t'
                << (d.signs[i] > 0 ? "+" : "-") << "\n";
    }
    emit(out.str(), out_path);
    return 0;
}

std::string window_report(const TwistSystem& sys, int lo, int hi, const std::string& format) {
    const InverseWindow w = compute_window(sys, lo, hi);
    const EventualImage ev = eventual_image(sys, w);
    const auto profile = limit_profile(sys, w);
    std::ostringstream out;
    if (format == "json") {
        out << "{\"window\":[" << lo << "," << hi << "],\"levels\":[";
        bool first = true;
        for (const auto& [i, byu] : profile) {
            if (!first) out << ",";
            first = false;
            std::size_t total = 0;
            for (const auto& [u, n] : byu) total += n;
            out << "{\"level\":" << i << ",\"image_dim\":" << total << "}";
        }
        out << "],\"eventual\":[";
        first = true;
        for (const auto& [u, n] : ev.by_u) {
            if (!first) out << ",";
            first = false;
            out << "{\"u\":" << u << ",\"dim\":" << n << "}";
        }
        out << "],\"stable\":" << (ev.stable ? "true" : "false") << "}\n";
    } else {
        out << "level\tdim\timage\n";
        for (const auto& [i, byu] : profile) {
            std::size_t total = 0;
            for (const auto& [u, n] : byu) total += n;
            std::size_t full = 0;
            for (const auto& [uq, n] : w.spaces.at(i).dims) full += n;
            out << i << '\t' << full << '\t' << total << '\n';
        }
        for (const auto& [u, n] : ev.by_u) out << "eventual\tu=" << u << '\t' << n << '\n';
        out << "stable\t" << (ev.stable ? 1 : 0) << "\n";
    }
    return out.str();
}

int cmd_kappa(const std::string& path, bool have_window, int lo, int hi, std::size_t cap,
              const std::string& format, const std::string& out_path) {
    const SuturedTangle t = SuturedTangle::load(path);
    TwistSystem sys(t, cap);
    if (have_window) {
        emit(window_report(sys, lo, hi, format), out_path);
        return 0;
    }
    try {
        const KappaInvariant k = compute_kappa(sys);
        std::ostringstream out;
        if (format == "json") {
            out << kappa_json(k) << "\n";
        } else {
            out << kappa_tsv(k);
            out << "total\t" << k.total << "\n";
            out << "window\t" << k.cert.lo << '\t' << k.cert.hi << "\n";
            out << "agreement\t" << k.cert.agreement << "\n";
            out << "top_surjective\t" << (k.cert.top_surjective ? 1 : 0) << "\n";
            out << "bottom_injective\t" << (k.cert.bottom_injective ? 1 : 0) << "\n";
        }
        emit(out.str(), out_path);
        return 0;
    } catch (const UnstabilizedError& e) {
        std::ostringstream out;
        out << "# PARTIAL: " << e.what() << "\n";
        out << "window\t" << e.lo << '\t' << e.hi << "\n";
        for (const auto& [u, n] : e.partial_by_u) out << "partial\tu=" << u << '\t' << n << "\n";
        emit(out.str(), out_path.empty() ? "" : out_path + ".partial");
        std::cerr << "unstabilized: " << e.what() << "\n";
        return 3;
    }
}

int cmd_mirror_check(const std::string& path, std::size_t cap, const std::string& format,
                     const std::string& out_path) {
    const SuturedTangle t = SuturedTangle::load(path);
    const AmphiResult res = amphicheirality_check(t, cap);
    const bool obstructed = res.verdict == AmphiVerdict::OBSTRUCTED;
    std::ostringstream out;
    if (format == "json") {
        out << "{\"tangle\":\"" << t.name << "\",\"verdict\":\""
            << (obstructed ? "OBSTRUCTED" : "SILENT") << "\",\"kappa\":" << kappa_json(res.kappa)
            << ",\"reflected\":" << kappa_json(res.reflected) << "}\n";
    } else {
        out << "tangle\t" << t.name << "\n";
        out << "verdict\t" << (obstructed ? "OBSTRUCTED" : "SILENT") << "\n";
        out << "kappa\n" << kappa_tsv(res.kappa);
        out << "reflected\n" << kappa_tsv(res.reflected);
    }
    emit(out.str(), out_path);
    return 0;
}

struct VerifyState {
    int hard_fail = 0;
    void hard(const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++hard_fail;
    }
    void soft(const std::string& name, const std::string& text) {
        std::cout << "SOFT  " << name << ": " << text << "\n";
    }
};

GradedVectorSpace trefoil_level1_table() {
    GradedVectorSpace v;
    // (u, q) pairs with doubled quantum grading.
    v.add(-7, -20);
    v.add(-6, -18);
    v.add(-5, -18);
    v.add(-4, -14);
    v.add(-3, -14);
    v.add(-2, -12);
    v.add(0, -8);
    return v;
}

int cmd_verify(const std::string& data_dir, std::size_t cap, std::uint64_t seed, bool soft_only) {
    VerifyState st;
    const SuturedTangle unknot = SuturedTangle::load(data_dir + "/unknot.tangle.json");
    const SuturedTangle trefoil = SuturedTangle::load(data_dir + "/trefoil.tangle.json");
    std::vector<SuturedTangle> dataset = {unknot, trefoil};
    for (const char* name : {"figure8-h1", "figure8-h2", "torus-5_1", "torus-8_19"}) {
        try {
            dataset.push_back(SuturedTangle::load(data_dir + "/" + name + ".tangle.json"));
        } catch (const InputError&) {}
    }

    if (!soft_only) {
        const GradedVectorSpace v1 = homology(trefoil, 1, cap);
        st.hard("trefoil level-1 homology table", v1 == trefoil_level1_table());
        st.hard("trefoil level-1 Jones polynomial",
                jones_polynomial(v1) == "t^-4 + t^-6 - t^-10");

        TwistSystem usys(unknot, cap);
        const InverseWindow uw = compute_window(usys, -1, 3);
        bool zero = true;
        for (const auto& [u, b] : uw.composite)
            if (rank(b)) zero = false;
        const KappaInvariant uk = compute_kappa(usys);
        st.hard("unknot composite vanishes and kappa = 0", zero && uk.total == 0);

        TwistSystem tsys(trefoil, cap);
        const KappaInvariant tk = compute_kappa(tsys);
        KappaInvariant expect;
        for (int u : {-5, -3, -2, 0}) expect.table[{u, 1}] = 1;
        expect.total = 4;
        st.hard("trefoil kappa table", tk == expect && tk.total == 4);
        st.hard("trefoil kappa certificate",
                tk.cert.agreement >= 3 && tk.cert.top_surjective && tk.cert.bottom_injective);

        const KappaInvariant mk = compute_kappa(TwistSystem(trefoil.mirrored(), cap));
        st.hard("mirror trefoil kappa reflects", mk == mirror_reflect(tk));
        st.hard("reflection is involutive", mirror_reflect(mirror_reflect(mk)) == mk);

        bool complexes_ok = true, triangles_ok = true;
        for (const auto& t : dataset) {
            TwistSystem sys(t, cap);
            for (int n = -2; n <= 2; ++n) {
                try {
                    sys.level_complex(n).check();
                } catch (const std::exception&) {
                    complexes_ok = false;
                }
                if (n < 2 && !triangle_check(sys, n).ok) triangles_ok = false;
            }
        }
        st.hard("level complexes: d\xc2\xb2 = 0 and q-homogeneity", complexes_ok);
        st.hard("skein exactness at every dataset level", triangles_ok);

        std::mt19937_64 rng(seed);
        bool la_ok = true;
        for (int it = 0; it < 40; ++it) {
            const std::size_t r = 1 + rng() % 24, c = 1 + rng() % 24;
            BitMatrix m(r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j)
                    if (rng() & 1) m.set(i, j, true);
            if (rank(m) + kernel_basis(m).size() != c) la_ok = false;
            if (rank(m) != rank(m.transpose())) la_ok = false;
        }
        st.hard("rank-nullity and transpose-rank on random matrices", la_ok);
    }

    for (const auto& t : dataset) {
        try {
            TwistSystem sys(t, cap);
            if (sys.infinity_total_dim() != 1) continue;
            const KappaInvariant k = compute_kappa(sys);
            st.soft(t.name, structure_report(k).text);
        } catch (const std::exception& e) {
            st.soft(t.name, std::string("skipped: ") + e.what());
        }
    }

    if (st.hard_fail) {
        std::cout << st.hard_fail << " hard check(s) failed\n";
        return 1;
    }
    std::cout << "all hard checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced Khovanov homology of tangle closures and twist-family invariants"};
    app.require_subcommand(1);

    std::string input, out_path, format = "tsv", window_arg, data_dir = "data";
    int level = 1;
    std::size_t cap = kh::kDefaultCrossingCap;
    std::uint64_t seed = 1;
    bool soft_only = false;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("input", input, "tangle JSON file")->required();
        sub->add_option("--cap", cap, "crossing cap");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"tsv", "json"}));
        sub->add_option("--out", out_path, "output path (default stdout)");
    };

    CLI::App* kh_cmd = app.add_subcommand("kh", "homology table of one closure level");
    add_common(kh_cmd, true);
    kh_cmd->add_option("--level", level, "closure level (default 1)");

    CLI::App* closure_cmd = app.add_subcommand("closure", "the closed diagram at one level");
    add_common(closure_cmd, true);
    closure_cmd->add_option("--level", level, "closure level (default 1)");

    CLI::App* kappa_cmd = app.add_subcommand("kappa", "twist-family invariant");
    add_common(kappa_cmd, true);
    kappa_cmd->add_option("--window", window_arg, "explicit window N:M instead of the policy");

    CLI::App* mirror_cmd = app.add_subcommand("mirror-check", "compare kappa with its reflection");
    add_common(mirror_cmd, true);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    verify_cmd->add_option("data", data_dir, "dataset directory (default data/)");
    verify_cmd->add_option("--cap", cap, "crossing cap");
    verify_cmd->add_option("--seed", seed, "seed for randomized property checks");
    verify_cmd->add_flag("--soft-only", soft_only, "only the conjecture diagnostics");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kh_cmd->parsed()) return cmd_kh(input, level, cap, format, out_path);
        if (closure_cmd->parsed()) return cmd_closure(input, level, format, out_path);
        if (kappa_cmd->parsed()) {
            bool have_window = !window_arg.empty();
            int lo = 0, hi = 0;
            if (have_window) {
                const auto colon = window_arg.find(':');
                if (colon == std::string::npos)
                    throw kh::InputError("--window expects N:M with N < M");
                try {
                    lo = std::stoi(window_arg.substr(0, colon));
                    hi = std::stoi(window_arg.substr(colon + 1));
                } catch (const std::exception&) {
                    throw kh::InputError("--window expects N:M with integer N < M");
                }
            }
            return cmd_kappa(input, have_window, lo, hi, cap, format, out_path);
        }
        if (mirror_cmd->parsed()) return cmd_mirror_check(input, cap, format, out_path);
        if (verify_cmd->parsed()) return cmd_verify(data_dir, cap, seed, soft_only);
    } catch (const kh::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const kh::UnstabilizedError& e) {
        std::cerr << "unstabilized: " << e.what() << "\n";
        return 3;
    } catch (const kh::ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
