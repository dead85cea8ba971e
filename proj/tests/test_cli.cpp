#include <json.hpp>

#include <sstream>

#include "ccsym/cli.hpp"
#include "ccsym/parse.hpp"
#include "ccsym/random.hpp"
#include "ccsym/symbol2d.hpp"
#include "support.hpp"

using namespace testing;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json cli_json(std::vector<std::string> args) {
    Run r = cli(std::move(args));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return json::parse(r.out);
}

template <class F>
std::size_t error_offset(ErrorCode code, F&& f) {
    try {
        f();
        FAIL("expected " << error_name(code));
    } catch (const Error& e) {
        CHECK_MESSAGE(e.code() == code, e.what());
        return e.offset();
    }
    return Error::npos;
}

BiSeries expr(const std::string& s, RingPtr r) {
    std::optional<BiSeries> f = to_laurent(eval_fraction(parse_expression(s), r, VarSet::two_dim()));
    REQUIRE(f);
    return *f;
}

// random expression trees over a few leaves
Expr random_expr(gen::Rng& rng, int depth) {
    Expr e;
    if (depth == 0 || gen::coin(rng, 0.3)) {
        static const char* leaves[] = {"u", "t", "e", "1", "2", "17"};
        std::string s = leaves[gen::uniform_int(rng, 0, 5)];
        e.kind = std::isdigit(static_cast<unsigned char>(s[0])) ? Expr::Kind::Number : Expr::Kind::Var;
        e.text = s;
        return e;
    }
    switch (gen::uniform_int(rng, 0, 5)) {
        case 0: e.kind = Expr::Kind::Add; break;
        case 1: e.kind = Expr::Kind::Sub; break;
        case 2: e.kind = Expr::Kind::Mul; break;
        case 3: e.kind = Expr::Kind::Div; break;
        case 4:
            e.kind = Expr::Kind::Neg;
            e.kids.push_back(random_expr(rng, depth - 1));
            return e;
        default:
            e.kind = Expr::Kind::Pow;
            e.power = gen::uniform_int(rng, -3, 3);
            e.kids.push_back(random_expr(rng, depth - 1));
            return e;
    }
    e.kids.push_back(random_expr(rng, depth - 1));
    e.kids.push_back(random_expr(rng, depth - 1));
    return e;
}

}  // namespace

TEST_CASE("ring descriptors") {
    CHECK(parse_ring("Q")->is_rational());
    CHECK(parse_ring(" GF( 5 ) ")->characteristic() == 5);
    CHECK(parse_ring("Z/(9)")->characteristic() == 9);
    CHECK(parse_ring("GF(4; mod=x^2+x+1)")->characteristic() == 2);
    CHECK(parse_ring("GF(4; mod=x^2+x+1)")->is_field());
    CHECK(parse_ring("GF(9; mod=x^2+1)")->characteristic() == 3);
    CHECK_FALSE(parse_ring("GF(5)[e]/(e^3)")->is_field());
    CHECK(parse_ring("GF(5)[e]/(e^3)")->characteristic() == 5);
    CHECK(parse_ring("Q[a,b]/(a^2,b^3)")->characteristic() == 0);
    // the same text gives the same ring
    CHECK(parse_ring("GF(5)[e]/(e^3)") == parse_ring("GF(5)[e]/(e^3)"));

    CHECK(error_offset(ErrorCode::MalformedDescriptor, [] { parse_ring("GF(6)"); }) == 3);
    CHECK(error_offset(ErrorCode::ParseError, [] { parse_ring("GF(5"); }) == 4);
    CHECK(error_offset(ErrorCode::MalformedDescriptor, [] { parse_ring("R"); }) == 0);
    CHECK(error_offset(ErrorCode::MalformedDescriptor, [] { parse_ring("GF(9)"); }) == 3);
    CHECK(error_offset(ErrorCode::MalformedDescriptor, [] { parse_ring("GF(4; mod=x^2+1)"); }) == 10);
    CHECK(error_offset(ErrorCode::ParseError, [] { parse_ring("Q[e]/(e^2"); }) == 9);
}

TEST_CASE("expression examples") {
    RingPtr q = Q();
    CHECK(expr("u + t", q) == poly(q, {{1, 0, num(q, 1)}, {0, 1, num(q, 1)}}));
    CHECK(expr("u^-1", q) == expr("u^(-1)", q));
    CHECK(expr("-u^2", q) == poly(q, {{2, 0, num(q, -1)}}));
    CHECK(expr("2*u/4", q) == poly(q, {{1, 0, num(q, 1, 2)}}));

    // 1/(1 - ut) expanded through t^3
    Fraction geo = eval_fraction(parse_expression("1/(1-u*t)"), q, VarSet::two_dim());
    CHECK_FALSE(to_laurent(geo));
    BiSeries g = materialize(geo, Window::rows(3));
    BiSeries want = poly(q, {{0, 0, num(q, 1)}, {1, 1, num(q, 1)}, {2, 2, num(q, 1)}, {3, 3, num(q, 1)}});
    CHECK(g.agrees_within(want, Window::rows(3)));

    RingPtr r = parse_ring("Q[e]/(e^2)");
    RingValue e = r->generator("e");
    CHECK(expr("(1+e*u^-1)*5*u^2*t", r) == poly(r, {{2, 1, num(r, 5)}, {1, 1, num(r, 5) * e}}));

    UnitExpr inv = parse_unit("1/(1-u*t)", q, VarSet::two_dim());
    REQUIRE(inv.factors().size() == 1);
    CHECK(inv.factors()[0].second == -1);
}

TEST_CASE("expression errors") {
    RingPtr q = Q();
    CHECK(error_offset(ErrorCode::ParseError, [] { parse_expression("2u"); }) == 1);
    CHECK(error_offset(ErrorCode::ParseError, [] { parse_expression("u^2^3"); }) == 3);
    CHECK(error_offset(ErrorCode::ParseError, [] { parse_expression("(u+t"); }) == 4);
    CHECK(error_offset(ErrorCode::ParseError, [] { parse_expression("u+"); }) == 2);
    CHECK(error_offset(ErrorCode::ParseError, [&] { parse_unit("u*w", q, VarSet::two_dim()); }) == 2);
    CHECK(error_offset(ErrorCode::ParseError, [&] { parse_unit("z", q, VarSet::two_dim()); }) == 0);
    expect_error(ErrorCode::NotAUnit, [&] { parse_unit("u - u", q, VarSet::two_dim()); });
    // 1 + u is already a unit of R((u))
    CHECK(parse_unit("1 + u", q, VarSet::two_dim()).factors().size() == 1);
    RingPtr r = parse_ring("GF(5)[e]/(e^2)");
    expect_error(ErrorCode::NotAUnit, [&] { parse_unit("e*u", r, VarSet::two_dim()); });
}

TEST_CASE("property: printing round trips") {
    gen::Rng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        Expr a = random_expr(rng, 4);
        std::string s = to_string(a);
        Expr b = parse_expression(s);
        CHECK_MESSAGE(b.same_shape(a), s);
        CHECK(to_string(b) == s);
        // spacing does not matter
        std::string spaced;
        for (char c : s) spaced += std::isdigit(static_cast<unsigned char>(c)) ? std::string(1, c) : std::string(" ") + c + " ";
        CHECK(parse_expression(spaced).same_shape(a));
    }
}

TEST_CASE("cli symbol examples") {
    json j = cli_json({"symbol2", "--ring", "Q[e1,e2,e3]/(e1^2,e2^2,e3^2)", "--f", "1+e1*u", "--g", "1+e2*t", "--h", "1+e3*u^-1*t^-1"});
    CHECK(j["command"] == "symbol2");
    CHECK(j["value"] == "1+e1*e2*e3");
    CHECK(j["path"] == "residue-formula");
    CHECK(j["stabilized"] == true);
    CHECK(j["inputs"]["h"] == "1+e3*u^-1*t^-1");

    json p = cli_json({"symbol2", "--ring", "Q[e1,e2,e3]/(e1^2,e2^2,e3^2)", "--f", "1+e1*u", "--g", "1+e2*t", "--h", "1+e3*u^-1*t^-1", "--path", "product"});
    CHECK(p["value"] == j["value"]);
    CHECK(p["path"] == "product-formula");

    // the tame symbol over a field
    json t = cli_json({"symbol2", "--ring", "GF(7)", "--f", "3*u", "--g", "t", "--h", "2", "--path", "tame"});
    RingPtr f7 = GF(7);
    CHECK(t["value"] == tame2(UnitExpr(poly(f7, {{1, 0, num(f7, 3)}})), UnitExpr(BiSeries::variable_t(f7)), UnitExpr(BiSeries::constant(num(f7, 2)))).to_string());

    Run plain = cli({"symbol1", "--ring", "GF(5)", "--f", "t", "--g", "2", "--format", "plain"});
    CHECK(plain.code == 0);
    CHECK(plain.out.find("value: ") == 0);
}

TEST_CASE("property: cli agrees with the library") {
    gen::Rng rng(43);
    for (const char* text : {"Q[e]/(e^3)", "GF(5)[e]/(e^2)", "GF(3)"}) {
        RingPtr r = parse_ring(text);
        for (int trial = 0; trial < 10; ++trial) {
            std::array<BiSeries, 3> a;
            for (BiSeries& x : a) x = gen::unit_polynomial(r, rng, {-2, 2, 2});
            std::array<std::string, 3> s;
            for (std::size_t k = 0; k < 3; ++k) s[k] = a[k].to_string("t", "u");
            json j = cli_json({"symbol2", "--ring", text, "--f", s[0], "--g", s[1], "--h", s[2]});
            RingValue want = cc2(UnitExpr(a[0]), UnitExpr(a[1]), UnitExpr(a[2])).value;
            CHECK_MESSAGE(j["value"] == want.to_string(), s[0] << " " << s[1] << " " << s[2]);
        }
    }
}

TEST_CASE("cli exit codes and diagnostics") {
    Run a = cli({"symbol1", "--ring", "GF(5", "--f", "t", "--g", "2"});
    CHECK(a.code == kExitUsage);
    CHECK(a.err.find("ParseError") != std::string::npos);
    CHECK(a.err.find("byte 4") != std::string::npos);
    CHECK(a.err.find("\n      ^") != std::string::npos);

    CHECK(cli({"symbol1", "--ring", "GF(6)", "--f", "t", "--g", "2"}).code == kExitUsage);
    CHECK(cli({"symbol1", "--ring", "GF(5)", "--f", "t+", "--g", "2"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"symbol2", "--ring", "Q", "--f", "u"}).code == kExitUsage);
    CHECK(cli({"check", "properties", "--suite", "nope", "--ring", "Q"}).code == kExitUsage);

    Run zero = cli({"symbol1", "--ring", "GF(5)", "--f", "t-t", "--g", "2"});
    CHECK(zero.code == kExitComputation);
    CHECK(zero.err.find("NotAUnit") != std::string::npos);
    CHECK(cli({"symbol2", "--ring", "GF(5)", "--f", "u", "--g", "t", "--h", "2", "--path", "residue"}).code == kExitComputation);
    CHECK(cli({"check", "properties", "--suite", "path-agreement", "--ring", "GF(5)"}).code == kExitComputation);

    Run help = cli({"--help"});
    CHECK(help.code == kExitPass);
    CHECK(help.out.find("symbol2") != std::string::npos);
}

TEST_CASE("cli witt and checks") {
    json w = cli_json({"witt", "--ring", "GF(2)", "--f", "u", "--g", "t", "--y", "u*t", "--p", "2", "--m", "2"});
    CHECK(w["agree"] == true);
    CHECK(cli({"witt", "--ring", "GF(3)", "--f", "1+u", "--g", "t", "--y", "u^-1*t^-1", "--y", "2*t^-2", "--p", "3", "--m", "2"}).code == kExitPass);

    json c = cli_json({"check", "reciprocity-curve1d", "--ring", "GF(5)", "--f", "z", "--g", "z+1"});
    CHECK(c["pass"] == true);
    CHECK(c["product"] == "1");
    CHECK(c["sites"].size() == 3);

    json s = cli_json({"check", "properties", "--suite", "steinberg", "--ring", "GF(7)[e]/(e^3)", "--trials", "20", "--seed", "1"});
    CHECK(s["pass"] == true);
    CHECK(s["instances"] == 20);
}

TEST_CASE("cli output is deterministic") {
    std::vector<std::vector<std::string>> cmds = {
        {"symbol2", "--ring", "Q[e]/(e^3)", "--f", "1+e*u^-1+u*t", "--g", "2-t", "--h", "u+e*u^-2"},
        {"check", "properties", "--suite", "algebraic", "--ring", "GF(5)", "--trials", "5", "--seed", "9"},
        {"check", "reciprocity-point", "--ring", "GF(5)", "--f", "u+t", "--g", "t", "--h", "1+u"},
    };
    for (const auto& c : cmds) {
        Run a = cli(c), b = cli(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}
