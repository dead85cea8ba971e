#include "ccsym/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <optional>

#include "ccsym/parse.hpp"
#include "ccsym/reciprocity.hpp"
#include "ccsym/suites.hpp"
#include "ccsym/symbol1d.hpp"
#include "ccsym/symbol2d.hpp"
#include "ccsym/witt.hpp"

namespace ccs {

namespace {

using Json = nlohmann::ordered_json;

// an Error together with the flag and text it came from
struct Located {
    std::string flag;
    std::string text;
    Error error;
};

template <class F>
auto from(const std::string& flag, const std::string& text, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.offset() == Error::npos) throw;
        throw Located{flag, text, e};
    }
}

int exit_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::MalformedDescriptor:
    case ErrorCode::Usage: return kExitUsage;
    default: return kExitComputation;
    }
}

Json cap(int c) { return c >= kInf || c <= -kInf ? Json(nullptr) : Json(c); }

Json window_json(const Window& w) {
    Json caps = Json::array();
    for (int c : w.explicit_caps()) caps.push_back(cap(c));
    return {{"t_max", cap(w.t_max())}, {"first_row", w.first_explicit_row()}, {"u_caps", caps}};
}

Json exp_json(Exp e) { return {{"t", e.i}, {"u", e.j}}; }

struct Options {
    std::string ring;
    std::string f, g, h;
    std::vector<std::string> y;
    std::string format = "json";
    std::string path = "auto";
    std::string suite;
    int tmax = 8;
    int trials = 20;
    std::uint64_t seed = 1;
    std::int64_t p = 0;
    int m = 0;
};

class Session {
public:
    Session(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    RingPtr ring() {
        if (!ring_) ring_ = from("--ring", o_.ring, [&] { return parse_ring(o_.ring); });
        return ring_;
    }
    Expr expr(const std::string& flag, const std::string& text) {
        if (text.empty()) fail(ErrorCode::Usage, flag + " is required");
        return from(flag, text, [&] { return parse_expression(text); });
    }
    UnitExpr unit(const std::string& flag, const std::string& text, const VarSet& vars) {
        Expr e = expr(flag, text);
        return from(flag, text, [&] { return to_unit(eval_fraction(e, ring(), vars)); });
    }
    Fraction fraction(const std::string& flag, const std::string& text, const VarSet& vars) {
        Expr e = expr(flag, text);
        return from(flag, text, [&] { return eval_fraction(e, ring(), vars); });
    }
    RationalFunctionElement curve(const std::string& flag, const std::string& text) {
        expr(flag, text);
        return from(flag, text, [&] { return parse_curve_element(text, ring()); });
    }
    Json inputs(std::initializer_list<std::pair<const char*, const std::string*>> xs) {
        Json j = Json::object();
        for (auto& [k, v] : xs)
            if (!v->empty()) j[k] = to_string(expr(std::string("--") + k, *v));
        return j;
    }
    bool plain() const { return o_.format == "plain"; }
    void emit(const Json& j, const std::string& text) {
        if (plain())
            out_ << text;
        else
            out_ << j.dump(2) << "\n";
    }

private:
    const Options& o_;
    std::ostream& out_;
    RingPtr ring_ = nullptr;
};

std::string plain_window(const Window& w) {
    std::string s = "t_max=" + (w.t_max() >= kInf ? std::string("inf") : std::to_string(w.t_max())) + " u_caps=[";
    for (std::size_t k = 0; k < w.explicit_caps().size(); ++k) {
        int c = w.explicit_caps()[k];
        s += (k ? "," : "") + (c >= kInf ? std::string("inf") : std::to_string(c));
    }
    return s + "] first_row=" + std::to_string(w.first_explicit_row());
}

int emit_symbol(Session& s, const std::string& command, const Json& inputs, const SymbolResult& r, bool has_window) {
    Json j{{"command", command}, {"ring", s.ring()->text()}, {"inputs", inputs}, {"value", r.value.to_string()}, {"path", path_name(r.path)}};
    j["window"] = has_window ? window_json(r.window) : Json(nullptr);
    j["stabilized"] = r.stabilized;
    Json fs = Json::array();
    std::string text = "value: " + r.value.to_string() + "\npath: " + path_name(r.path) + "\nwindow: " + (has_window ? plain_window(r.window) : "none") +
                       "\nstabilized: " + (r.stabilized ? "true" : "false") + "\nfactors: " + std::to_string(r.factors.size()) + "\n";
    for (const SymbolFactor& f : r.factors) {
        Json ex = Json::array();
        std::string es;
        for (Exp e : f.exps) {
            ex.push_back(exp_json(e));
            es += " (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
        }
        fs.push_back({{"kind", f.kind}, {"exponents", ex}, {"value", f.value.to_string()}, {"power", f.power}});
        text += "  " + f.kind + es + " -> " + f.value.to_string() + (f.power != 1 ? " ^" + std::to_string(f.power) : "") + "\n";
    }
    j["factors"] = fs;
    s.emit(j, text);
    return kExitPass;
}

int cmd_symbol1(Session& s, const Options& o) {
    UnitExpr f = s.unit("--f", o.f, VarSet::one_dim()), g = s.unit("--g", o.g, VarSet::one_dim());
    SymbolResult r;
    bool residue = s.ring()->is_rational() && o.path != "product";
    if (o.path == "residue" && !s.ring()->is_rational()) fail(ErrorCode::CharacteristicObstruction, "the residue formula needs a Q-algebra");
    if (o.path == "tame") {
        if (!s.ring()->is_field()) fail(ErrorCode::DomainViolation, "the tame symbol needs a field");
        PreparedUnit a = prepare_unit(f), b = prepare_unit(g);
        std::int64_t nf = a.nu.i, ng = b.nu.i;
        r.value = a.c.pow(ng) * b.c.pow(-nf) * ((nf * ng) % 2 ? -s.ring()->one() : s.ring()->one());
        r.path = SymbolPath::Tame;
    } else {
        r.value = residue ? cc1_residue(f, g) : cc1_product(f, g);
        r.path = residue ? SymbolPath::Residue : SymbolPath::Product;
    }
    r.stabilized = true;
    return emit_symbol(s, "symbol1", s.inputs({{"f", &o.f}, {"g", &o.g}}), r, false);
}

int cmd_symbol2(Session& s, const Options& o) {
    UnitExpr f = s.unit("--f", o.f, VarSet::two_dim()), g = s.unit("--g", o.g, VarSet::two_dim()), h = s.unit("--h", o.h, VarSet::two_dim());
    SymbolResult r;
    bool window = true;
    if (o.path == "auto")
        r = cc2(f, g, h);
    else if (o.path == "product")
        r = cc2_product(f, g, h);
    else if (o.path == "residue")
        r = cc2_residue(f, g, h);
    else {
        r.value = tame2(f, g, h);
        r.path = SymbolPath::Tame;
        r.stabilized = true;
        window = false;
    }
    return emit_symbol(s, "symbol2", s.inputs({{"f", &o.f}, {"g", &o.g}, {"h", &o.h}}), r, window);
}

BiSeries exact_of(const BiSeries& s) {
    std::vector<std::pair<Exp, RingValue>> terms;
    for (std::size_t k = 0; k < s.size(); ++k) terms.emplace_back(s.exp(k), s.coeff_at(k));
    return BiSeries::from_terms(s.ring(), std::move(terms));
}

int cmd_witt(Session& s, const Options& o) {
    UnitExpr g1 = s.unit("--f", o.f, VarSet::two_dim()), g2 = s.unit("--g", o.g, VarSet::two_dim());
    RingPtr r = s.ring();
    std::vector<Fraction> ys;
    for (std::size_t k = 0; k < o.y.size(); ++k) ys.push_back(s.fraction("--y", o.y[k], VarSet::two_dim()));
    bool typical = o.p != 0;
    int m = o.m ? o.m : static_cast<int>(ys.size());
    if (typical && m < 1) fail(ErrorCode::Usage, "--m must be positive");
    if (!typical && ys.empty()) fail(ErrorCode::Usage, "--y is required");
    if (typical && static_cast<int>(ys.size()) > m) fail(ErrorCode::Usage, "more --y values than --m components");
    if (o.m && !typical) fail(ErrorCode::Usage, "--m needs --p");
    while (typical && static_cast<int>(ys.size()) < m) ys.push_back({r, {{BiSeries::from_terms(r, {}), 1}}});

    bool exact = std::all_of(ys.begin(), ys.end(), [](const Fraction& f) { return to_laurent(f).has_value(); });
    // y with non-monomial denominators is expanded in growing windows until the result settles
    auto evaluate = [&](const std::optional<Window>& w) {
        std::vector<BiSeries> y;
        for (const Fraction& f : ys) y.push_back(w ? exact_of(materialize(f, *w)) : *to_laurent(f));
        Json j;
        std::string text;
        if (!typical) {
            WittVector v = witt_symbol(g1, g2, y);
            Json c = Json::array();
            for (const RingValue& x : v.comps) c.push_back(x.to_string());
            j = {{"components", c}};
            text = "components: " + v.to_string() + "\n";
            return std::pair{j, text};
        }
        std::int64_t n = 1;
        for (int a = 1; a < m; ++a) n *= o.p;
        std::vector<BiSeries> big(static_cast<std::size_t>(n), BiSeries::from_terms(r, {}));
        std::int64_t idx = 1;
        for (int a = 0; a < m; ++a, idx *= o.p) big[static_cast<std::size_t>(idx - 1)] = y[static_cast<std::size_t>(a)];
        WittVector ghost_path = witt_symbol_ghost(g1, g2, y);
        WittVector proj = p_typical_projection(witt_symbol(g1, g2, big), o.p, m);
        Json a = Json::array(), b = Json::array();
        for (const RingValue& x : ghost_path.comps) a.push_back(x.to_string());
        for (const RingValue& x : proj.comps) b.push_back(x.to_string());
        j = {{"components", a}, {"projection", b}, {"agree", ghost_path == proj}};
        text = "ghost formula: " + ghost_path.to_string() + "\nprojection: " + proj.to_string() + "\nagree: " + (ghost_path == proj ? "true" : "false") + "\n";
        return std::pair{j, text};
    };

    std::pair<Json, std::string> res;
    std::optional<int> used;
    if (exact)
        res = evaluate(std::nullopt);
    else {
        std::optional<std::pair<Json, std::string>> prev;
        for (int round = 0, t = o.tmax; round <= 4; ++round, t *= 2) {
            auto cur = evaluate(Window::rows(t, t));
            if (prev && prev->first == cur.first) {
                res = *prev;
                used = t / 2;
                break;
            }
            prev = cur;
        }
        if (!used) fail(ErrorCode::StabilizationFailure, "the Witt symbol did not settle as the window of y grew");
    }
    Json j{{"command", "witt"}, {"ring", r->text()}};
    j["inputs"] = s.inputs({{"f", &o.f}, {"g", &o.g}});
    Json yj = Json::array();
    for (const std::string& y : o.y) yj.push_back(to_string(s.expr("--y", y)));
    j["inputs"]["y"] = yj;
    if (typical) {
        j["p"] = o.p;
        j["m"] = m;
    }
    j["y_window"] = used ? Json({{"t_max", *used}, {"u_cap", *used}}) : Json(nullptr);
    for (auto& [k, v] : res.first.items()) j[k] = v;
    s.emit(j, res.second);
    bool pass = !typical || res.first["agree"].get<bool>();
    return pass ? kExitPass : kExitCheckFailed;
}

int emit_report(Session& s, const Json& inputs, const ReciprocityReport& rep) {
    Json sites = Json::array();
    std::string text = "law: " + rep.law + "\n";
    for (const SiteValue& v : rep.sites) {
        sites.push_back({{"site", v.site}, {"degree", v.degree}, {"local_value", v.local_value.to_string()}, {"norm_value", v.norm_value.to_string()}});
        text += "  " + v.site + " (degree " + std::to_string(v.degree) + "): " + v.local_value.to_string() + " -> " + v.norm_value.to_string() + "\n";
    }
    Json j{{"law", rep.law}, {"ring", s.ring()->text()}, {"inputs", inputs}, {"sites", sites}, {"product", rep.product.to_string()}, {"pass", rep.pass}};
    text += "product: " + rep.product.to_string() + "\npass: " + (rep.pass ? "true" : "false") + "\n";
    s.emit(j, text);
    return rep.pass ? kExitPass : kExitCheckFailed;
}

int cmd_curve1d(Session& s, const Options& o) {
    auto f = s.curve("--f", o.f), g = s.curve("--g", o.g);
    return emit_report(s, s.inputs({{"f", &o.f}, {"g", &o.g}}), check_curve_1d(f, g));
}

int cmd_curve2d(Session& s, const Options& o) {
    auto f = s.curve("--f", o.f), g = s.curve("--g", o.g), h = s.curve("--h", o.h);
    return emit_report(s, s.inputs({{"f", &o.f}, {"g", &o.g}, {"h", &o.h}}), check_curve_2d(f, g, h));
}

int cmd_point(Session& s, const Options& o) {
    UnitExpr f = s.unit("--f", o.f, VarSet::two_dim()), g = s.unit("--g", o.g, VarSet::two_dim()), h = s.unit("--h", o.h, VarSet::two_dim());
    return emit_report(s, s.inputs({{"f", &o.f}, {"g", &o.g}, {"h", &o.h}}), check_point_2d(f, g, h));
}

int cmd_properties(Session& s, const Options& o) {
    SuiteReport rep = run_suite(o.suite, s.ring(), o.trials, o.seed);
    Json fails = Json::array();
    for (const std::string& f : rep.failures) fails.push_back(f);
    Json j{{"suite", rep.suite}, {"ring", rep.ring},       {"seed", rep.seed},          {"instances", rep.instances},
           {"failed", rep.failed}, {"nontrivial", rep.nontrivial}, {"pass", rep.pass()}, {"failures", fails}};
    std::string text = "suite: " + rep.suite + "\nring: " + rep.ring + "\nseed: " + std::to_string(rep.seed) + "\ninstances: " + std::to_string(rep.instances) +
                       "\nfailed: " + std::to_string(rep.failed) + "\nnontrivial: " + std::to_string(rep.nontrivial) + "\npass: " + (rep.pass() ? "true" : "false") + "\n";
    for (const std::string& f : rep.failures) text += "  " + f + "\n";
    s.emit(j, text);
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

void report_error(std::ostream& err, const Error& e, const std::string& flag, const std::string& text) {
    err << "error: " << error_name(e.code()) << ": " << e.what();
    if (!flag.empty()) {
        err << " (" << flag << ", byte " << e.offset() << ")\n";
        err << "  " << text << "\n  " << std::string(std::min(e.offset(), text.size()), ' ') << "^\n";
    } else
        err << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Contou-Carrere symbols over Artinian rings", "ccsym"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.footer("Property suites (check properties --suite):\n" + suite_help() + "\nExit codes: 0 pass, 1 check failed, 2 usage or parse error, 3 computation error.");

    auto ring_opt = [&](CLI::App* c) { c->add_option("--ring", o.ring, "ring descriptor, e.g. \"GF(5)[e]/(e^3)\"")->required(); };
    auto format_opt = [&](CLI::App* c) { c->add_option("--format", o.format, "json or plain")->check(CLI::IsMember({"json", "plain"})); };

    CLI::App* s1 = app.add_subcommand("symbol1", "one-dimensional symbol (f, g) of units of R((t))");
    ring_opt(s1);
    s1->add_option("--f", o.f)->required();
    s1->add_option("--g", o.g)->required();
    s1->add_option("--path", o.path, "auto, product, residue or tame")->check(CLI::IsMember({"auto", "product", "residue", "tame"}));
    format_opt(s1);

    CLI::App* s2 = app.add_subcommand("symbol2", "two-dimensional symbol (f, g, h) of units of R((u))((t))");
    ring_opt(s2);
    s2->add_option("--f", o.f)->required();
    s2->add_option("--g", o.g)->required();
    s2->add_option("--h", o.h)->required();
    s2->add_option("--path", o.path, "auto, product, residue or tame")->check(CLI::IsMember({"auto", "product", "residue", "tame"}));
    format_opt(s2);

    CLI::App* w = app.add_subcommand("witt", "Witt symbol (f, g | y_1, ..., y_n]");
    ring_opt(w);
    w->add_option("--f", o.f, "g1")->required();
    w->add_option("--g", o.g, "g2")->required();
    w->add_option("--y", o.y, "components y_1, y_2, ... (repeat the flag)");
    w->add_option("--p", o.p, "compare the ghost formula with the p-typical projection");
    w->add_option("--m", o.m, "number of p-typical components");
    w->add_option("--tmax", o.tmax, "first window for y with non-monomial denominators")->check(CLI::Range(1, 1 << 12));
    format_opt(w);

    CLI::App* chk = app.add_subcommand("check", "reciprocity laws and property suites");
    chk->require_subcommand(1);
    CLI::App* c1 = chk->add_subcommand("reciprocity-curve1d", "product of one-dimensional symbols over the points of P^1");
    CLI::App* c2 = chk->add_subcommand("reciprocity-curve2d", "product of symbols along P^1 with the t_C direction");
    CLI::App* cp = chk->add_subcommand("reciprocity-point", "product of symbols over the branches through the origin");
    for (CLI::App* c : {c1, c2, cp}) {
        ring_opt(c);
        c->add_option("--f", o.f)->required();
        c->add_option("--g", o.g)->required();
        format_opt(c);
    }
    c2->add_option("--h", o.h)->required();
    cp->add_option("--h", o.h)->required();
    CLI::App* props = chk->add_subcommand("properties", "randomized property suite");
    ring_opt(props);
    props->add_option("--suite", o.suite)->required()->check(CLI::IsMember(suite_names()));
    props->add_option("--trials", o.trials)->check(CLI::Range(1, 1000000));
    props->add_option("--seed", o.seed);
    format_opt(props);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    Session s(o, out);
    try {
        if (s1->parsed()) return cmd_symbol1(s, o);
        if (s2->parsed()) return cmd_symbol2(s, o);
        if (w->parsed()) return cmd_witt(s, o);
        if (c1->parsed()) return cmd_curve1d(s, o);
        if (c2->parsed()) return cmd_curve2d(s, o);
        if (cp->parsed()) return cmd_point(s, o);
        if (props->parsed()) return cmd_properties(s, o);
    } catch (const Located& l) {
        report_error(err, l.error, l.flag, l.text);
        return exit_for(l.error.code());
    } catch (const Error& e) {
        report_error(err, e, "", "");
        return exit_for(e.code());
    }
    err << "error: no command\n";
    return kExitUsage;
}

}  // namespace ccs
