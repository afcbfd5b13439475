#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmark/classifier.hpp"
#include "qmark/constants.hpp"
#include "qmark/extremal.hpp"
#include "qmark/question_mark.hpp"

namespace qmark::cli {

using json = nlohmann::ordered_json;

struct CommandResult {
    bool ok = true;
    int exit_code = 0;
    std::string command;
    json payload = json::object();
    double elapsed_ms = 0;
    bool as_json = false;
    std::string help;  ///< usage text for --help or usage errors
};

namespace detail {

inline json interval_json(const Interval& iv, unsigned digits = 12) {
    return {{"lo", iv.lo().str()},
            {"hi", iv.hi().str()},
            {"mid", iv.decimal(digits)},
            {"width", Interval::to_decimal(iv.width(), 20)}};
}

inline std::string word_text(const CFWord& w) { return "(" + w.str() + ")"; }

inline void write_csv(const std::string& path, const std::string& header, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::LimitError, "cannot open " + path + " for writing");
    out << header << '\n';
    for (const auto& l : lines) out << l << '\n';
}

/// Decimal digits justified by `bits` of precision, at most 30.
inline unsigned certified_digits(unsigned bits) { return std::min(30U, bits * 3 / 10 - 1); }

}  // namespace detail

/// Parses argv (without the program name) and runs the selected command.
inline CommandResult dispatch(const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();
    CommandResult res;
    bool as_json = false;

    CLI::App app{"Minkowski question mark function toolkit", "qm"};
    app.require_subcommand(1);
    app.add_flag("--json", as_json, "Emit a JSON document");

    std::function<json()> action;
    std::function<bool(const json&)> violated = [](const json&) { return false; };

    // eval
    std::string eval_x;
    auto* eval = app.add_subcommand("eval", "?(x) for a rational p/q in [0,1]");
    eval->add_option("x", eval_x, "p/q")->required();
    eval->callback([&] {
        action = [&] {
            const Dyadic v = qm_rational(Rational::parse(eval_x));
            return json{{"x", Rational::parse(eval_x).str()},
                        {"value", v.str()},
                        {"mantissa", v.mantissa().str()},
                        {"exponent", v.exponent()},
                        {"binary", v.binary()}};
        };
    });

    // eval-cf
    std::string cf_text, eps_text = "1/2^30";
    auto* eval_cf = app.add_subcommand("eval-cf", "enclosure of ?(x) for a periodic continued fraction");
    eval_cf->add_option("cf", cf_text, "[0; a, (p, q)]")->required();
    eval_cf->add_option("--eps", eps_text, "target width m/2^k");
    eval_cf->callback([&] {
        action = [&] {
            const CFSpec spec = CFSpec::parse(cf_text);
            const Rational eps = Dyadic::parse(eps_text).to_rational();
            return json{{"cf", spec.str()}, {"eps", eps.str()}, {"enclosure", detail::interval_json(qm_irrational(spec, eps))}};
        };
    });

    // sb-level
    unsigned level = 0;
    std::string csv_path;
    auto* sb = app.add_subcommand("sb-level", "Stern-Brocot level F_n with ? values");
    sb->add_option("n", level, "level")->required();
    sb->add_option("--csv", csv_path, "write index,p,q,question_mark_mantissa,question_mark_exponent");
    sb->callback([&] {
        action = [&] {
            const SternBrocotLevel lv = stern_brocot_level(level);
            json out{{"n", level}, {"count", lv.points.size()}};
            std::vector<std::string> lines;
            json pts = json::array();
            const bool inline_points = csv_path.empty() && lv.points.size() <= 4097;
            for (std::size_t j = 0; j < lv.points.size(); ++j) {
                const Dyadic v = qm_rational(lv.points[j]);
                if (!csv_path.empty())
                    lines.push_back(std::to_string(j) + "," + lv.points[j].num().str() + "," + lv.points[j].den().str() + "," +
                                    v.mantissa().str() + "," + std::to_string(v.exponent()));
                if (inline_points) pts.push_back(lv.points[j].str() + " -> " + v.str());
            }
            if (!csv_path.empty()) {
                detail::write_csv(csv_path, "index,p,q,question_mark_mantissa,question_mark_exponent", lines);
                out["csv"] = csv_path;
            }
            if (inline_points) out["points"] = pts;
            return out;
        };
    });

    // sandwich
    std::string sw_cf, sw_delta;
    std::size_t sw_depth = 40;
    auto* sw = app.add_subcommand("sandwich", "two-sided difference-quotient estimate at a convergent");
    sw->add_option("--cf", sw_cf, "periodic continued fraction")->required();
    sw->add_option("--depth", sw_depth, "order of the convergent");
    sw->add_option("--delta", sw_delta, "step +-m/2^k")->required();
    sw->callback([&] {
        action = [&] {
            const SandwichReport r = sandwich(CFSpec::parse(sw_cf), sw_depth, Dyadic::parse(sw_delta));
            return json{{"x", r.x.str()},          {"delta", r.delta.str()},     {"mirrored", r.mirrored},
                        {"n", r.n},                {"t", r.t},                   {"z", r.z},
                        {"t_upper", r.t_upper},    {"z_upper", r.z_upper},       {"branch", r.branch},
                        {"xi0", r.xi0.str()},      {"xi", r.xi.str()},           {"xi1", r.xi1.str()},
                        {"lower", r.lower.str()},  {"quotient", r.quotient.str()}, {"upper", r.upper.str()},
                        {"lower_approx", Interval::to_decimal(r.lower, 12)},
                        {"quotient_approx", Interval::to_decimal(r.quotient, 12)},
                        {"upper_approx", Interval::to_decimal(r.upper, 12)},
                        {"holds", r.holds()}};
        };
        violated = [](const json& p) { return !p.at("holds").get<bool>(); };
    });

    // constants
    auto* consts = app.add_subcommand("constants", "certified constants");
    consts->callback([&] {
        action = [&] {
            const unsigned bits = default_precision();
            const unsigned digits = detail::certified_digits(bits);
            json table = json::array();
            auto row = [&](const std::string& name, const Interval& iv) {
                table.push_back({{"name", name}, {"value", iv.decimal(digits)}, {"width", Interval::to_decimal(iv.width(), 40)}});
            };
            const Kappa& k = kappas(bits);
            row("kappa1", k.kappa1);
            row("kappa2", k.kappa2);
            row("kappa3", k.kappa3);
            for (Quotient j = 1; j <= 6; ++j) row("lambda" + std::to_string(j), spectral(j, bits).lambda);
            for (Quotient j = 1; j <= 12; ++j) row("L" + std::to_string(j), L(j, bits));
            const OrderingReport ord = check_orderings(bits);
            json orders = json::array();
            for (const auto& c : ord.comparisons) orders.push_back({{"claim", c.claim}, {"certified", c.certified}});
            return json{{"bits", bits}, {"constants", table}, {"orderings", orders}, {"orderings_certified", ord.all_certified()}};
        };
    });

    // extremal
    auto* ext = app.add_subcommand("extremal", "extremal continuant problems");
    ext->require_subcommand(1);
    std::string profile_text;
    auto* mu = ext->add_subcommand("mu", "max continuant for a profile");
    mu->add_option("--profile", profile_text, "r_1,...,r_n")->required();
    mu->callback([&] {
        action = [&] {
            const Profile p = Profile::parse(profile_text);
            const MuResult m = mu_brute(p);
            const PrtReport prt = prt_bound(p);
            return json{{"profile", p.str()},
                        {"mu", m.max.str()},
                        {"witness", detail::word_text(m.witness)},
                        {"arrangements", m.arrangements},
                        {"k_bracket", k_bracket(p).str()},
                        {"bound", detail::interval_json(prt.bound, 6)},
                        {"bound_holds", prt.holds}};
        };
        violated = [](const json& p) { return !p.at("bound_holds").get<bool>(); };
    });
    std::uint64_t tmax = 9;
    std::size_t nmax = 5;
    auto* kan = ext->add_subcommand("kan", "exhaustive max over arrangements starting with 1");
    kan->add_option("--tmax", tmax, "largest total length (<= 10)");
    kan->add_option("--nmax", nmax, "largest digit");
    kan->callback([&] {
        action = [&] {
            std::uint64_t profiles = 0;
            json counter = json::array();
            for_each_profile(nmax, tmax, [&](const Profile& p) {
                if (p.r(1) == 0) return;
                ++profiles;
                const KanReport r = kan_check(p);
                if (!r.holds)
                    counter.push_back({{"profile", p.str()}, {"max", r.max_v.str()}, {"k_bracket", r.bracket.str()},
                                       {"witness", detail::word_text(r.witness)}});
            });
            return json{{"tmax", tmax}, {"nmax", nmax}, {"profiles", profiles}, {"violations", counter}};
        };
        violated = [](const json& p) { return !p.at("violations").empty(); };
    });
    std::size_t omega_n = 8;
    std::string eta_text = "0";
    std::uint64_t grid = 0;
    auto* omega = ext->add_subcommand("omega", "maximum of sum r_j L_j over the kappa_2 + eta slice");
    omega->add_option("--n", omega_n, "largest digit (>= 5)");
    omega->add_option("--eta", eta_text, "p/q in [0, 1/2)");
    omega->add_option("--grid", grid, "also run the grid oracle with this denominator");
    omega->callback([&] {
        action = [&] {
            const Rational eta = Rational::parse(eta_text);
            const OmegaVertexResult v = omega_max_vertex(omega_n, eta);
            json out{{"n", omega_n},
                     {"eta", eta.str()},
                     {"max", detail::interval_json(v.max, 15)},
                     {"argvertex", v.argvertex.str()},
                     {"unique", v.unique},
                     {"expected", detail::interval_json(v.expected, 15)},
                     {"matches_expected", v.matches_expected()}};
            if (grid > 0) {
                const OmegaGridResult g = omega_max_grid(std::min(omega_n, kMaxGridN), 1, eta, grid);
                json gj{{"denominator", grid}, {"points", g.points}, {"feasible", g.feasible}};
                if (g.max) {
                    gj["max"] = detail::interval_json(*g.max, 15);
                    gj["below_vertex"] = g.max->hi() <= v.max.hi();
                }
                out["grid"] = gj;
            }
            return out;
        };
        violated = [](const json& p) {
            if (!p.at("matches_expected").get<bool>()) return true;
            return p.contains("grid") && p["grid"].contains("below_vertex") && !p["grid"]["below_vertex"].get<bool>();
        };
    });

    // verify
    auto* ver = app.add_subcommand("verify", "exhaustive base-case checks");
    ver->require_subcommand(1);
    unsigned threads = 0;
    unsigned maple_t = 23;
    auto* maple = ver->add_subcommand("maple", "k_t^2 >= 2^(a_1+..+a_t) over {1,4}^t");
    maple->add_option("--t", maple_t, "word length (<= 40)");
    maple->add_option("--threads", threads, "worker threads (default: available parallelism)");
    maple->callback([&] {
        action = [&] {
            const MapleResult r = verify_maple(maple_t, threads);
            json v = json::array();
            for (const auto& w : r.violations) v.push_back(detail::word_text(w));
            return json{{"t", maple_t}, {"count_checked", r.count_checked}, {"violations", v}};
        };
        violated = [](const json& p) { return !p.at("violations").empty(); };
    });
    unsigned sqrt_n = 23;
    auto* sq = ver->add_subcommand("sqrt", "min continuant over compositions of n into 1s and 4s");
    sq->add_option("--n", sqrt_n, "total (<= 40)");
    sq->add_option("--threads", threads, "ignored; the search is sequential");
    sq->callback([&] {
        action = [&] {
            const SqrtResult r = verify_sqrt(sqrt_n);
            return json{{"n", sqrt_n},
                        {"min_continuant", r.min_k.str()},
                        {"argmin", detail::word_text(r.argmin)},
                        {"compositions", r.compositions},
                        {"holds", r.holds}};
        };
        violated = [](const json& p) { return !p.at("holds").get<bool>(); };
    });
    std::uint64_t syl_from = 506, syl_to = 2000;
    auto* syl = ver->add_subcommand("sylvester", "t = 23 x + 24 y over a range");
    syl->add_option("--from", syl_from, "first t");
    syl->add_option("--to", syl_to, "last t");
    syl->add_option("--threads", threads, "ignored; the check is sequential");
    syl->callback([&] {
        action = [&] {
            if (syl_to < syl_from) fail(ErrorKind::DomainError, "--to must not be below --from");
            json failures = json::array();
            json sample = json::array();
            for (std::uint64_t t = syl_from; t <= syl_to; ++t) {
                try {
                    const auto [x, y] = sylvester_decompose(t);
                    if (sample.size() < 3) sample.push_back({{"t", t}, {"x", x}, {"y", y}});
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NoDecomposition) throw;
                    failures.push_back(std::to_string(t));
                }
            }
            return json{{"from", syl_from}, {"to", syl_to}, {"sample", sample}, {"violations", failures}};
        };
        violated = [](const json& p) { return !p.at("violations").empty(); };
    });

    // classify
    std::string cls_cf;
    auto* cls = app.add_subcommand("classify", "decide ?'(x) for a periodic continued fraction");
    cls->add_option("cf", cls_cf, "[0; a, (p, q)]")->required();
    cls->callback([&] {
        action = [&] {
            const CFSpec spec = CFSpec::parse(cls_cf);
            const Classification c = classify(spec);
            json out{{"cf", spec.str()},
                     {"verdict", verdict_name(c.verdict)},
                     {"rule", rule_name(c.rule)},
                     {"average", c.average.str()},
                     {"margin", detail::interval_json(c.margin)}};
            return out;
        };
    });

    // gen
    auto* gen = app.add_subcommand("gen", "generate the extremal examples");
    gen->require_subcommand(1);
    std::uint64_t gen_r = 30, gen_p = 3, gen_q = 2;
    std::string gen_eta = "1/2";
    auto gen_json = [](const GeneratedSpec& g) {
        const CFWord& p = g.spec.period();
        // run-length form keeps long periods readable
        json runs = json::array();
        for (std::size_t i = 0; i < p.size();) {
            std::size_t j = i;
            while (j < p.size() && p[j] == p[i]) ++j;
            runs.push_back({{"quotient", p[i]}, {"count", j - i}});
            i = j;
        }
        return json{{"period_length", p.size()},
                    {"runs", runs},
                    {"average", g.average.str()},
                    {"average_approx", Interval::to_decimal(g.average, 10)},
                    {"window", detail::interval_json(g.window)}};
    };
    auto* xr = gen->add_subcommand("xr", "[0; (1 x r^2, m x r)]");
    xr->add_option("--r", gen_r, "r >= 2");
    xr->add_option("--eta", gen_eta, "p/q in (0, 1)");
    xr->callback([&] {
        action = [&] {
            const GeneratedSpec g = gen_x_r(gen_r, Rational::parse(gen_eta));
            json out = gen_json(g);
            out["r"] = gen_r;
            out["q"] = gen_r * gen_r;
            out["m"] = g.spec.period().values().back();
            return out;
        };
    });
    auto* xpq = gen->add_subcommand("xpq", "[0; (4 x p, 5 x q)]");
    xpq->add_option("--p", gen_p, "p >= 1");
    xpq->add_option("--q", gen_q, "q >= 1");
    xpq->callback([&] {
        action = [&] {
            json out = gen_json(gen_x_pq(gen_p, gen_q));
            out["p"] = gen_p;
            out["q"] = gen_q;
            return out;
        };
    });

    // trend
    std::string trend_cf;
    std::size_t trend_depth = 200;
    std::string trend_csv;
    auto* trend = app.add_subcommand("trend", "certified logs of the envelope along the convergents");
    trend->add_option("cf", trend_cf, "[0; a, (p, q)]")->required();
    trend->add_option("--depth", trend_depth, "number of rows (<= 5000)");
    trend->add_option("--csv", trend_csv, "write t,lower_log,upper_log");
    trend->callback([&] {
        action = [&] {
            const CFSpec spec = CFSpec::parse(trend_cf);
            const auto rows = trend_statistic(spec, trend_depth);
            json out{{"cf", spec.str()}, {"depth", trend_depth}};
            json arr = json::array();
            std::vector<std::string> lines;
            for (const auto& r : rows) {
                const std::string lo = r.lower_log.decimal(9), hi = r.upper_log.decimal(9);
                if (trend_csv.empty())
                    arr.push_back({{"t", r.t}, {"lower_log", lo}, {"upper_log", hi}});
                else
                    lines.push_back(std::to_string(r.t) + "," + lo + "," + hi);
            }
            if (!spec.is_rational() && rows.size() > spec.period().size()) {
                out["period_slope_lower"] = trend_period_slope(rows, spec.period().size(), false).decimal(9);
                out["period_slope_upper"] = trend_period_slope(rows, spec.period().size(), true).decimal(9);
            }
            if (trend_csv.empty()) {
                out["rows"] = arr;
            } else {
                detail::write_csv(trend_csv, "t,lower_log,upper_log", lines);
                out["csv"] = trend_csv;
            }
            return out;
        };
    });

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        res.help = app.help();
        return res;
    } catch (const CLI::ParseError& e) {
        res.ok = false;
        res.exit_code = 2;
        res.payload = {{"error", "UsageError"}, {"message", e.what()}};
        res.help = app.help();
        return res;
    }
    for (const auto* sub : app.get_subcommands()) {
        res.command = sub->get_name();
        for (const auto* inner : sub->get_subcommands()) res.command += " " + inner->get_name();
    }
    res.as_json = as_json;
    try {
        res.payload = action();
        res.exit_code = violated(res.payload) ? 1 : 0;
    } catch (const Error& e) {
        res.ok = false;
        res.exit_code = 1;
        res.payload = {{"error", std::string(e.name())}, {"message", e.what()}};
    }
    res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
}

namespace detail {

inline void render_text(std::ostream& out, const json& v, const std::string& indent) {
    for (auto it = v.begin(); it != v.end(); ++it) {
        const json& val = it.value();
        if (val.is_array()) {
            out << indent << it.key() << ": " << val.size() << (val.size() == 1 ? " entry" : " entries") << '\n';
            for (const auto& e : val) {
                if (e.is_object()) {
                    out << indent << "  ";
                    bool first = true;
                    for (auto f = e.begin(); f != e.end(); ++f) {
                        out << (first ? "" : "  ") << f.key() << "=" << (f->is_string() ? f->get<std::string>() : f->dump());
                        first = false;
                    }
                    out << '\n';
                } else {
                    out << indent << "  " << (e.is_string() ? e.get<std::string>() : e.dump()) << '\n';
                }
            }
        } else if (val.is_object()) {
            out << indent << it.key() << ":\n";
            render_text(out, val, indent + "  ");
        } else {
            out << indent << it.key() << ": " << (val.is_string() ? val.get<std::string>() : val.dump()) << '\n';
        }
    }
}

}  // namespace detail

/// Human text by default, a JSON document with --json.
inline std::string render(const CommandResult& r) {
    if (!r.help.empty() && r.ok) return r.help;
    const json& payload = r.payload;
    std::ostringstream out;
    if (r.as_json) {
        json doc{{"status", r.ok ? "ok" : "error"}, {"command", r.command}, {"payload", payload}};
        out << doc.dump(2) << '\n';
    } else if (!r.ok) {
        out << payload.value("message", "error") << '\n';
        if (r.exit_code == 2 && !r.help.empty()) out << r.help;
    } else {
        detail::render_text(out, payload, "");
    }
    return out.str();
}

}  // namespace qmark::cli
