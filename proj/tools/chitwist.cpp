// chitwist: batch verification suites and sweeps with reproducible CSV
// reports. Exit status: 0 all assertions passed, 1 suite failure,
// 2 configuration error. All randomness flows from --seed; rerunning a
// command with the same seed reproduces the output byte for byte.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chitwist/charsums.hpp"
#include "chitwist/forms.hpp"
#include "chitwist/lvalue.hpp"
#include "chitwist/transforms.hpp"

using namespace chitwist;
using nlohmann::json;

namespace {

std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    std::string digits;
    while (v != 0) {
        int d = static_cast<int>(neg ? -(v % 10) : (v % 10));
        digits.push_back(static_cast<char>('0' + d));
        v /= 10;
    }
    if (neg) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

struct SuiteResult {
    std::string header;
    std::vector<std::string> rows;
    i64 passed = 0;
    i64 total = 0;
};

struct Settings {
    std::string command;
    std::string out;
    u64 seed = kDefaultSeed;
    unsigned threads = 0;
    std::optional<double> tol;

    // per-command knobs (superset; each command reads what it needs)
    i64 nmax = 100;
    double Q = 7.0;
    i64 qmax = 12;
    std::vector<double> X{100.0, 400.0};
    int weight = 12;
    i64 max_modulus = 2000;
    std::vector<i64> p_list{3, 5, 7};
    std::vector<i64> r_list;
    i64 count = 100;
    std::vector<i64> P1_list{11, 31, 101};
    i64 pmax = 101;
    std::vector<double> N_list{30.0, 50.0, 80.0};
    i64 ell = 1;
    i64 p = 3;
    i64 r = 3;
    i64 index = 1;
    i64 P2 = 0;
    i64 index2 = 0;
    i64 rmax = 5;
    i64 samples = 10;
    i64 N = 1000;
};

json effective_config(const Settings& s) {
    json j;
    j["command"] = s.command;
    j["seed"] = s.seed;
    if (s.tol) j["tol"] = *s.tol;
    if (s.command == "verify-delta") {
        j["nmax"] = s.nmax;
        j["Q"] = s.Q;
    } else if (s.command == "verify-voronoi") {
        j["qmax"] = s.qmax;
        j["X"] = s.X;
        j["weight"] = s.weight;
    } else if (s.command == "verify-charsum-C") {
        j["max-modulus"] = s.max_modulus;
        j["p"] = s.p_list;
    } else if (s.command == "sweep-charsum-A") {
        j["p"] = s.p_list;
        j["r"] = s.r_list.empty() ? std::vector<i64>{3, 6} : s.r_list;
        j["count"] = s.count;
    } else if (s.command == "sweep-charsum-B") {
        j["P1"] = s.P1_list;
        j["count"] = s.count;
    } else if (s.command == "sweep-weil") {
        j["pmax"] = s.pmax;
        j["count"] = s.count;
    } else if (s.command == "verify-decomposition") {
        j["p"] = s.p_list;
        j["ell"] = s.ell;
        j["N"] = s.N_list;
    } else if (s.command == "lvalue") {
        j["p"] = s.p;
        j["r"] = s.r;
        j["index"] = s.index;
        if (s.P2 > 0) {
            j["P2"] = s.P2;
            j["index2"] = s.index2;
        }
    } else if (s.command == "exponent-sweep") {
        j["p"] = s.p;
        j["rmax"] = s.rmax;
        j["samples"] = s.samples;
    } else if (s.command == "dump-coeffs") {
        j["N"] = s.N;
        j["weight"] = s.weight;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

SuiteResult run_verify_delta(const Settings& s) {
    SuiteResult res;
    double tol = s.tol.value_or(1e-8);
    res.header = "n,Q,value,abs_err,pass";
    for (i64 n = -s.nmax; n <= s.nmax; ++n) {
        double v = delta_expand(n, s.Q);
        double err = std::abs(v - (n == 0 ? 1.0 : 0.0));
        bool ok = err < tol;
        res.rows.push_back(std::to_string(n) + "," + format_g17(s.Q) + "," + format_g17(v) + "," +
                           format_g17(err) + "," + (ok ? "1" : "0"));
        res.total++;
        if (ok) res.passed++;
    }
    return res;
}

SuiteResult run_verify_poisson(const Settings& s) {
    SuiteResult res;
    res.header = "case,shift,scale,lhs_re,rhs_re,rel_err,tol,pass";
    auto g = gaussian_test_function();
    SmoothWindow w(WindowKind::bump_on_1_2);
    struct Case {
        SchwartzFunction fn;
        double shift, scale, tol;
    };
    std::vector<Case> cases{
        {g, 0.0, 1.0, 1e-10},
        {g, 0.0, 2.0, 1e-10},
        {g, 0.5, 1.0, 1e-10},
        {g, 1.0 / 3.0, 1.7, 1e-10},
        {window_test_function(w), 0.3, 3.0, 1e-8},
    };
    for (const auto& c : cases) {
        auto rep = poisson_verify(c.fn, c.shift, c.scale);
        double tol = s.tol.value_or(c.tol);
        bool ok = rep.rel_err < tol;
        std::ostringstream row;
        row << c.fn.name << "," << format_g17(c.shift) << "," << format_g17(c.scale) << ","
            << format_g17(rep.lhs.real()) << "," << format_g17(rep.rhs.real()) << ","
            << format_g17(rep.rel_err) << "," << format_g17(tol) << "," << (ok ? 1 : 0);
        res.rows.push_back(row.str());
        res.total++;
        if (ok) res.passed++;
    }
    return res;
}

SuiteResult run_verify_voronoi(const Settings& s) {
    SuiteResult res;
    double tol = s.tol.value_or(1e-6);
    res.header = csv_header_for_reports() + ",tail_move,pass";

    struct Job {
        i64 q, a;
        double X;
    };
    std::vector<Job> jobs;
    for (double X : s.X)
        for (i64 q = 1; q <= s.qmax; ++q)
            for (i64 a = 1; a <= q; ++a)
                if (std::gcd(a, q) == 1) jobs.push_back({q, a, X});

    i64 need = 0;
    for (const auto& j : jobs)
        need = std::max(need, std::max<i64>(static_cast<i64>(2 * j.X) + 2,
                                            2 * default_voronoi_truncation(j.q, j.X)));
    CuspForm form(s.weight, need);
    SmoothWindow win(WindowKind::bump_on_1_2);

    // One Hankel table per (q, X); a values reuse it.
    std::map<std::pair<i64, double>, HankelTable> tables;
    for (const auto& j : jobs) {
        auto key = std::make_pair(j.q, j.X);
        if (!tables.count(key))
            tables[key] = make_hankel_table(s.weight, win, j.X, j.q,
                                            2 * default_voronoi_truncation(j.q, j.X));
    }

    std::vector<VerificationReport> reports(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(0, static_cast<i64>(jobs.size()), [&](i64 i) {
        const auto& j = jobs[static_cast<size_t>(i)];
        try {
            reports[static_cast<size_t>(i)] =
                voronoi_verify(form, j.a, j.q, win, j.X, 0, &tables[std::make_pair(j.q, j.X)]);
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(i)] = e.what();
        }
    }, s.threads);

    for (size_t i = 0; i < jobs.size(); ++i) {
        if (!errors[i].empty()) {
            res.rows.push_back("voronoi-hol,error:" + errors[i] + ",,,,,,,,,0");
            res.total++;
            continue;
        }
        const auto& rep = reports[i];
        bool ok = rep.rel_err < tol;
        std::string tail = rep.truncation.substr(rep.truncation.find("tail_move=") + 10);
        res.rows.push_back(to_csv_row(rep) + "," + tail + "," + (ok ? "1" : "0"));
        res.total++;
        if (ok) res.passed++;
    }
    return res;
}

SuiteResult run_verify_charsum_C(const Settings& s) {
    SuiteResult res;
    double tol = s.tol.value_or(1e-8);
    res.header = "p,r,ell,q,tuples,zero_cases,max_abs_err,pass";
    charsum_C_grid(s.max_modulus, s.p_list, [&](const CharsumCCell& cell) {
        bool ok = cell.max_abs_err < tol && cell.zero_cases > 0;
        std::ostringstream row;
        row << cell.p << "," << cell.r << "," << cell.ell << "," << cell.q << "," << cell.tuples
            << "," << cell.zero_cases << "," << format_g17(cell.max_abs_err) << "," << (ok ? 1 : 0);
        res.rows.push_back(row.str());
        res.total++;
        if (ok) res.passed++;
    });
    return res;
}

void append_sweep_rows(SuiteResult& res, const std::vector<SweepRow>& rows) {
    for (const auto& row : rows) {
        std::ostringstream line;
        line << row.params << "," << format_g17(row.magnitude) << "," << format_g17(row.bound)
             << "," << (row.skipped ? "skipped" : (row.satisfied ? "1" : "0")) << "," << row.note;
        res.rows.push_back(line.str());
        if (row.skipped) continue;
        res.total++;
        if (row.satisfied) res.passed++;
    }
}

SuiteResult run_sweep_charsum_A(const Settings& s) {
    SuiteResult res;
    res.header = "params,magnitude,bound,satisfied,note";
    std::vector<i64> rs = s.r_list.empty() ? std::vector<i64>{3, 6} : s.r_list;
    for (i64 p : s.p_list)
        for (i64 r : rs) append_sweep_rows(res, sweep_charsum_A(p, r, s.count, s.seed));
    return res;
}

SuiteResult run_sweep_charsum_B(const Settings& s) {
    SuiteResult res;
    res.header = "params,magnitude,bound,satisfied,note";
    for (i64 P1 : s.P1_list) append_sweep_rows(res, sweep_charsum_B(P1, s.count, s.seed));
    return res;
}

SuiteResult run_sweep_weil(const Settings& s) {
    SuiteResult res;
    res.header = "params,magnitude,bound,satisfied,note";

    // The two exact pinned values first.
    auto leg7 = make_character(7, 1, 3);
    auto s0 = weil_sum(leg7, {{0, 1}, {1}});
    bool ok0 = std::abs(s0.value) < 1e-9;
    res.rows.push_back("p=7;g=x;f=0," + format_g17(std::abs(s0.value)) + ",0," + (ok0 ? "1" : "0") +
                       ",exact zero");
    res.total++;
    if (ok0) res.passed++;
    auto s1 = weil_sum(leg7, {{0, 1, 1}, {1}});
    bool ok1 = std::abs(s1.value - cdouble(-1.0, 0.0)) < 1e-9;
    res.rows.push_back("p=7;g=x(x+1);f=0," + format_g17(std::abs(s1.value)) + "," +
                       format_g17(std::sqrt(7.0)) + "," + (ok1 ? "1" : "0") + ",classical -1");
    res.total++;
    if (ok1) res.passed++;

    for (i64 p = 3; p <= s.pmax; ++p) {
        if (!is_prime(p)) continue;
        append_sweep_rows(res, sweep_weil(p, s.count, s.seed));
    }
    return res;
}

SuiteResult run_verify_decomposition(const Settings& s) {
    SuiteResult res;
    double tol = s.tol.value_or(1e-6);
    res.header = csv_header_for_reports() + ",pass";
    i64 need = static_cast<i64>(3.0 * *std::max_element(s.N_list.begin(), s.N_list.end())) + 2;
    CuspForm form(s.weight, need);
    for (i64 p : s.p_list) {
        auto chi = make_character(p, 2, 1);
        for (double N : s.N_list) {
            auto rep = decomposition_verify(form, chi, N, s.ell);
            bool ok = rep.rel_err < tol;
            res.rows.push_back(to_csv_row(rep) + "," + (ok ? "1" : "0"));
            res.total++;
            if (ok) res.passed++;
        }
    }
    return res;
}

SuiteResult run_lvalue(const Settings& s) {
    SuiteResult res;
    double tol = s.tol.value_or(1e-6);
    res.header = "p,r,chi_index,P2,index2,re_L,im_L,abs_L,afe_residual,root_re,root_im,root_form,pass";
    DirichletCharacter chi = (s.P2 > 0)
                                 ? compose(make_character(s.p, 1, s.index), make_character(s.P2, 1, s.index2))
                                 : make_character(s.p, s.r, s.index);
    i64 need = afe_truncation_length(chi.modulus(), s.weight, 2.0) + 2;
    CuspForm form(s.weight, need);
    auto cv = central_value(form, chi);
    bool ok = cv.afe_residual < tol;
    std::ostringstream row;
    row << s.p << "," << (s.P2 > 0 ? 1 : s.r) << "," << s.index << "," << s.P2 << "," << s.index2
        << "," << format_g17(cv.value.real()) << "," << format_g17(cv.value.imag()) << ","
        << format_g17(std::abs(cv.value)) << "," << format_g17(cv.afe_residual) << ","
        << format_g17(cv.root_number.real()) << "," << format_g17(cv.root_number.imag()) << ","
        << cv.root_number_form << "," << (ok ? 1 : 0);
    res.rows.push_back(row.str());
    res.total++;
    if (ok) res.passed++;
    return res;
}

SuiteResult run_exponent_sweep(const Settings& s) {
    SuiteResult res;
    double tol = s.tol.value_or(1e-6);
    res.header = "p,r,chi_index,re_L,im_L,abs_L,exponent,afe_residual,pass";
    std::vector<i64> rs;
    for (i64 r = 1; r <= s.rmax; ++r) rs.push_back(r);
    i64 pmaxr = ipow(s.p, s.rmax);
    i64 need = afe_truncation_length(pmaxr, s.weight, 2.0) + 2;
    CuspForm form(s.weight, need);
    auto rows = exponent_sweep(form, s.p, rs, s.samples, s.seed);

    // Soft convexity reference: C calibrated at the smallest conductor
    // with a nonzero maximum (sign -1 twists vanish identically).
    double C = 0.0;
    for (i64 r = 1; r <= s.rmax && C == 0.0; ++r) {
        double m = 0.0;
        for (const auto& row : rows)
            if (row.r == r) m = std::max(m, std::abs(row.L));
        if (m > 1e-12) C = 2.0 * m / std::pow(std::pow(static_cast<double>(s.p), r), 0.51);
    }
    for (const auto& row : rows) {
        double P = std::pow(static_cast<double>(s.p), static_cast<double>(row.r));
        bool ok = row.afe_residual < tol && std::abs(row.L) <= C * std::pow(P, 0.51);
        std::ostringstream line;
        line << row.p << "," << row.r << "," << row.index << "," << format_g17(row.L.real()) << ","
             << format_g17(row.L.imag()) << "," << format_g17(std::abs(row.L)) << ","
             << format_g17(row.exponent) << "," << format_g17(row.afe_residual) << ","
             << (ok ? 1 : 0);
        res.rows.push_back(line.str());
        res.total++;
        if (ok) res.passed++;
    }
    return res;
}

SuiteResult run_dump_coeffs(const Settings& s) {
    SuiteResult res;
    res.header = "n,a_n,lambda_n";
    CuspForm form(s.weight, s.N);
    auto d = divisor_counts(s.N);
    for (i64 n = 1; n <= s.N; ++n) {
        bool ok = std::abs(form.lambda(n)) <= static_cast<double>(d[static_cast<size_t>(n)]) + 1e-9;
        res.rows.push_back(std::to_string(n) + "," + i128_to_string(form.raw(n)) + "," +
                           format_g17(form.lambda(n)));
        res.total++;
        if (ok) res.passed++;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Configuration plumbing
// ---------------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"", {"command", "seed", "out", "threads", "tol"}},
        {"verify-delta", {"nmax", "Q"}},
        {"verify-poisson", {}},
        {"verify-voronoi", {"qmax", "X", "weight"}},
        {"verify-charsum-C", {"max-modulus", "p"}},
        {"sweep-charsum-A", {"p", "r", "count"}},
        {"sweep-charsum-B", {"P1", "count"}},
        {"sweep-weil", {"pmax", "count"}},
        {"verify-decomposition", {"p", "ell", "N"}},
        {"lvalue", {"p", "r", "index", "P2", "index2"}},
        {"exponent-sweep", {"p", "rmax", "samples"}},
        {"dump-coeffs", {"N", "weight"}},
    };
    return keys;
}

template <typename T>
void maybe_set(const json& cfg, const std::string& key, T& target, bool flag_given) {
    if (flag_given || !cfg.contains(key)) return;
    target = cfg.at(key).get<T>();
}

} // namespace

int main(int argc, char** argv) {
    Settings s;
    std::string config_path;

    CLI::App app{"numerical verification suites for twisted modular L-functions"};
    app.require_subcommand(0, 1);
    app.add_option("--config", config_path, "JSON config; explicit flags win");
    auto* opt_out = app.add_option("--out", s.out, "output CSV path");
    auto* opt_seed = app.add_option("--seed", s.seed, "sweep seed (default 0x5EED)");
    auto* opt_threads = app.add_option("--threads", s.threads, "worker threads (0 = hardware)");
    double tol_value = 0.0;
    auto* opt_tol = app.add_option("--tol", tol_value, "override the pass tolerance");

    auto* c_delta = app.add_subcommand("verify-delta", "delta-symbol expansion identity");
    auto* f_nmax = c_delta->add_option("--nmax", s.nmax);
    auto* f_Q = c_delta->add_option("--Q", s.Q);

    app.add_subcommand("verify-poisson", "Poisson summation identities");

    auto* c_vor = app.add_subcommand("verify-voronoi", "Voronoi summation identity");
    auto* f_qmax = c_vor->add_option("--qmax", s.qmax);
    auto* f_X = c_vor->add_option("--X", s.X);
    auto* f_weight = c_vor->add_option("--weight", s.weight);

    auto* c_csC = app.add_subcommand("verify-charsum-C", "first-Poisson sum closed form");
    auto* f_maxmod = c_csC->add_option("--max-modulus", s.max_modulus);
    auto* f_cp = c_csC->add_option("--p", s.p_list);

    auto* c_csA = app.add_subcommand("sweep-charsum-A", "alpha-averaged sum bound sweep");
    auto* f_ap = c_csA->add_option("--p", s.p_list);
    auto* f_r_list = c_csA->add_option("--r", s.r_list);
    auto* f_acount = c_csA->add_option("--count", s.count);

    auto* c_csB = app.add_subcommand("sweep-charsum-B", "two-prime fraction sum bound sweep");
    auto* f_P1 = c_csB->add_option("--P1", s.P1_list);
    auto* f_bcount = c_csB->add_option("--count", s.count);

    auto* c_weil = app.add_subcommand("sweep-weil", "complete-sum bounds over primes");
    auto* f_pmax = c_weil->add_option("--pmax", s.pmax);
    auto* f_wcount = c_weil->add_option("--count", s.count);

    auto* c_dec = app.add_subcommand("verify-decomposition", "circle-method decomposition identity");
    auto* f_dp = c_dec->add_option("--p", s.p_list);
    auto* f_ell = c_dec->add_option("--ell", s.ell);
    auto* f_N_list = c_dec->add_option("--N", s.N_list);

    auto* c_lv = app.add_subcommand("lvalue", "one central value");
    auto* f_lp = c_lv->add_option("--p", s.p);
    auto* f_lr = c_lv->add_option("--r", s.r);
    auto* f_index = c_lv->add_option("--index", s.index);
    auto* f_P2 = c_lv->add_option("--P2", s.P2);
    auto* f_index2 = c_lv->add_option("--index2", s.index2);

    auto* c_sweep = app.add_subcommand("exponent-sweep", "conductor exponent table");
    auto* f_ep = c_sweep->add_option("--p", s.p);
    auto* f_rmax = c_sweep->add_option("--rmax", s.rmax);
    auto* f_samples = c_sweep->add_option("--samples", s.samples);

    auto* c_dump = app.add_subcommand("dump-coeffs", "coefficient table CSV");
    auto* f_dN = c_dump->add_option("--N", s.N);
    auto* f_dweight = c_dump->add_option("--weight", s.weight);

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        json cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file " + config_path);
            try {
                cfg = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("bad JSON: ") + e.what());
            }
        }

        // Which command? The command line wins; otherwise the config.
        std::string command;
        for (auto* sub : app.get_subcommands()) command = sub->get_name();
        if (command.empty() && cfg.contains("command")) command = cfg.at("command").get<std::string>();
        if (command.empty()) throw ConfigError("no command given (empty config)");
        if (!allowed_keys().count(command)) throw ConfigError("unknown command " + command);
        s.command = command;

        for (auto it = cfg.begin(); it != cfg.end(); ++it) {
            const auto& global = allowed_keys().at("");
            const auto& local = allowed_keys().at(command);
            bool known = std::find(global.begin(), global.end(), it.key()) != global.end() ||
                         std::find(local.begin(), local.end(), it.key()) != local.end();
            if (!known) throw ConfigError("unknown config key: " + it.key());
        }

        auto given = [](CLI::Option* o) { return o != nullptr && o->count() > 0; };
        maybe_set(cfg, "seed", s.seed, given(opt_seed));
        maybe_set(cfg, "out", s.out, given(opt_out));
        maybe_set(cfg, "threads", s.threads, given(opt_threads));
        if (given(opt_tol))
            s.tol = tol_value;
        else if (cfg.contains("tol"))
            s.tol = cfg.at("tol").get<double>();
        maybe_set(cfg, "nmax", s.nmax, given(f_nmax));
        maybe_set(cfg, "Q", s.Q, given(f_Q));
        maybe_set(cfg, "qmax", s.qmax, given(f_qmax));
        maybe_set(cfg, "X", s.X, given(f_X));
        maybe_set(cfg, "weight", s.weight, given(f_weight) || given(f_dweight));
        maybe_set(cfg, "max-modulus", s.max_modulus, given(f_maxmod));
        if (command == "lvalue")
            maybe_set(cfg, "p", s.p, given(f_lp));
        else if (command == "exponent-sweep")
            maybe_set(cfg, "p", s.p, given(f_ep));
        else
            maybe_set(cfg, "p", s.p_list, given(f_cp) || given(f_ap) || given(f_dp));
        if (command == "lvalue")
            maybe_set(cfg, "r", s.r, given(f_lr));
        else
            maybe_set(cfg, "r", s.r_list, given(f_r_list));
        maybe_set(cfg, "count", s.count, given(f_acount) || given(f_bcount) || given(f_wcount));
        maybe_set(cfg, "P1", s.P1_list, given(f_P1));
        maybe_set(cfg, "pmax", s.pmax, given(f_pmax));
        if (command == "dump-coeffs")
            maybe_set(cfg, "N", s.N, given(f_dN));
        else
            maybe_set(cfg, "N", s.N_list, given(f_N_list));
        maybe_set(cfg, "ell", s.ell, given(f_ell));
        maybe_set(cfg, "index", s.index, given(f_index));
        maybe_set(cfg, "P2", s.P2, given(f_P2));
        maybe_set(cfg, "index2", s.index2, given(f_index2));
        maybe_set(cfg, "rmax", s.rmax, given(f_rmax));
        maybe_set(cfg, "samples", s.samples, given(f_samples));

        if (s.out.empty()) s.out = s.command + ".csv";

        SuiteResult result;
        if (s.command == "verify-delta") result = run_verify_delta(s);
        else if (s.command == "verify-poisson") result = run_verify_poisson(s);
        else if (s.command == "verify-voronoi") result = run_verify_voronoi(s);
        else if (s.command == "verify-charsum-C") result = run_verify_charsum_C(s);
        else if (s.command == "sweep-charsum-A") result = run_sweep_charsum_A(s);
        else if (s.command == "sweep-charsum-B") result = run_sweep_charsum_B(s);
        else if (s.command == "sweep-weil") result = run_sweep_weil(s);
        else if (s.command == "verify-decomposition") result = run_verify_decomposition(s);
        else if (s.command == "lvalue") result = run_lvalue(s);
        else if (s.command == "exponent-sweep") result = run_exponent_sweep(s);
        else if (s.command == "dump-coeffs") result = run_dump_coeffs(s);

        std::ofstream out(s.out);
        if (!out) throw ConfigError("cannot write " + s.out);
        out << "# chitwist " << s.command << "\n";
        out << "# seed=" << s.seed << "\n";
        out << "# config=" << effective_config(s).dump() << "\n";
        out << result.header << "\n";
        for (const auto& row : result.rows) out << row << "\n";
        out.close();

        std::cout << "PASS " << result.passed << "/" << result.total << "\n";
        return result.passed == result.total ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
