#include "polybloch/error.hpp"
#include "polybloch/sampling.hpp"
#include "polybloch/symbols.hpp"

#include "support/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace polybloch;
using polybloch::testkit::ExpressionGenerator;

namespace {

Complex at(const std::string& src, std::vector<Complex> z) {
    return eval_scalar(parse_expression(src, z.size()), z);
}

void expect_close(Complex a, Complex b, double tol = 1e-15) { EXPECT_LE(std::abs(a - b), tol) << a << " vs " << b; }

std::size_t parse_error_position(const std::string& src, std::size_t dim) {
    try {
        parse_map(src, dim);
    } catch (const ParseError& e) {
        return e.position();
    }
    ADD_FAILURE() << "no parse error for " << src;
    return 0;
}

} // namespace

TEST(Parse, IdentityMap) {
    const SymbolMap m = parse_map("z1; z2", 2);
    ASSERT_EQ(m.components().size(), 2U);
    EXPECT_EQ(m.component(0), Expr::variable(0));
    EXPECT_EQ(m.component(1), Expr::variable(1));
    EXPECT_FALSE(m.validated());
}

TEST(Parse, PowerAndBuiltins) {
    const SymbolMap m = parse_map("pow(z1,2); z2", 2);
    EXPECT_EQ(m.component(0), Expr::power(Expr::variable(0), 2));
    const SymbolMap b = parse_map("mob(0.5, z1); scale(0.5, z2)", 2);
    EXPECT_EQ(b.component(0), Expr::mobius(0.5, Expr::variable(0)));
    EXPECT_EQ(b.component(1), Expr::scale(0.5, Expr::variable(1)));
    const std::vector<Complex> z{Complex(0.2, 0.1), -0.7};
    expect_close(eval_scalar(b.component(0), z), (z[0] - 0.5) / (1.0 - 0.5 * z[0]));
    expect_close(eval_scalar(b.component(1), z), 0.5 * z[1]);
}

TEST(Parse, PrecedenceAndAssociativity) {
    const std::vector<Complex> z{Complex(0.3, -0.2), Complex(-0.5, 0.1)};
    expect_close(at("z1 - z2 - 0.5", z), (z[0] - z[1]) - 0.5);
    expect_close(at("z1 / z2 / 2", z), (z[0] / z[1]) / 2.0);
    expect_close(at("z1 + z2 * 3", z), z[0] + z[1] * 3.0);
    expect_close(at("-pow(z1, 2)", z), -(z[0] * z[0]));
    expect_close(at("-z1 * z2", z), (-z[0]) * z[1]);
    expect_close(at("2i*z1 + 1e-1", z), Complex(0, 2) * z[0] + 0.1);
    expect_close(at("exp(z1) * log(2 + z2)", z), std::exp(z[0]) * std::log(2.0 + z[1]));
}

TEST(Parse, ConstantSubexpressionsFoldIntoBuiltinParameters) {
    const Expr e = parse_expression("mob(0.3 + 0.4*i, z1)", 1);
    ASSERT_EQ(e.kind(), NodeKind::mobius);
    expect_close(e.constant(), Complex(0.3, 0.4));
    const Expr s = parse_expression("scale(1/3, z1)", 1);
    ASSERT_EQ(s.kind(), NodeKind::scale);
    expect_close(s.constant(), 1.0 / 3.0);
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_map("z1", 2), ParseError);                  // too few components
    EXPECT_THROW(parse_map("z1; z2; z1", 2), ParseError);          // too many
    EXPECT_THROW(parse_map("z3; z1", 2), ParseError);              // variable out of range
    EXPECT_THROW(parse_map("mob(1.0, z1); z2", 2), ParseError);    // |a| >= 1
    EXPECT_THROW(parse_map("mob(z2, z1); z2", 2), ParseError);     // parameter not constant
    EXPECT_THROW(parse_map("pow(z1, 2.5); z2", 2), ParseError);    // non-integer exponent
    EXPECT_THROW(parse_map("pow(z1, -1); z2", 2), ParseError);
    EXPECT_THROW(parse_map("sin(z1); z2", 2), ParseError);         // unknown function
    EXPECT_THROW(parse_map("z1 +; z2", 2), ParseError);
    EXPECT_THROW(parse_map("(z1; z2", 2), ParseError);
    EXPECT_THROW(parse_map("z0; z1", 2), ParseError);
    EXPECT_EQ(parse_error_position("z1 + $; z2", 2), 5U);
    EXPECT_EQ(parse_error_position("z1; z2 * * z1", 2), 9U);
}

TEST(Eval, Examples) {
    expect_close(at("z1", {0.3, 0.7}), 0.3);
    expect_close(at("pow(z1,2)", {Complex(0, 0.5), 0.0}), -0.25);
    expect_close(at("mob(0.5, z1)", {0.5, 0.0}), 0.0);
}

TEST(Eval, PoleAndBranchGuards) {
    EXPECT_THROW(at("1/z1", {0.0}), PoleError);
    EXPECT_THROW(at("log(z1)", {0.0}), BranchError);
    EXPECT_THROW(at("1/(z1 - 0.5)", {0.5}), PoleError);
    EXPECT_NO_THROW(at("1/(z1 - 0.5)", {0.4}));
}

TEST(Jet, Examples) {
    const Jet j = eval_jet(parse_expression("z1", 3), std::vector<Complex>{0.2, 0.3, 0.4});
    expect_close(j.value, 0.2);
    ASSERT_EQ(j.partials.size(), 3U);
    expect_close(j.partials[0], 1.0);
    expect_close(j.partials[1], 0.0);
    expect_close(j.partials[2], 0.0);
    const Jet p = eval_jet(parse_expression("pow(z1,2)", 2), std::vector<Complex>{0.5, 0.0});
    expect_close(p.value, 0.25);
    expect_close(p.partials[0], 1.0);
    expect_close(p.partials[1], 0.0);
}

TEST(Jet, MobiusDerivative) {
    const Complex a(0.3, -0.6);
    const Complex w(-0.2, 0.45);
    const Jet j = eval_jet(Expr::mobius(a, Expr::variable(0)), std::vector<Complex>{w});
    const Complex d = (1.0 - std::norm(a)) / ((1.0 - std::conj(a) * w) * (1.0 - std::conj(a) * w));
    expect_close(j.partials[0], d, 1e-14);
}

TEST(Jet, MatchesFiniteDifferencesOnGeneratedExpressions) {
    for (std::size_t n = 1; n <= 3; ++n) {
        ExpressionGenerator gen(n, 100 + n);
        for (int t = 0; t < 300; ++t) {
            const Expr e = gen.next(3);
            const auto z = gen.point(0.95);
            const Jet jet = eval_jet(e, z);
            expect_close(jet.value, testkit::reference_eval(e, z), 1e-12 * (1.0 + std::abs(jet.value)));
            expect_close(jet.value, eval_scalar(e, z), 1e-14 * (1.0 + std::abs(jet.value)));
            const auto fd = testkit::central_differences(e, z);
            double scale = 0.0;
            for (const Complex& d : jet.partials) scale = std::max(scale, std::abs(d));
            scale = std::max(scale, 1.0);
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_LE(std::abs(fd.along_real[j] - jet.partials[j]), 1e-6 * scale) << to_string(e);
                // Cauchy-Riemann: both directions see the same derivative
                EXPECT_LE(std::abs(fd.along_imag[j] - jet.partials[j]), 1e-6 * scale) << to_string(e);
            }
        }
    }
}

TEST(Printer, RoundTripsGeneratedExpressions) {
    for (std::size_t n = 1; n <= 3; ++n) {
        ExpressionGenerator gen(n, 200 + n);
        for (int t = 0; t < 500; ++t) {
            const std::string s = to_string(gen.next(4));
            const Expr once = parse_expression(s, n);
            const std::string printed = to_string(once);
            const Expr twice = parse_expression(printed, n);
            EXPECT_EQ(once, twice) << s << "\n" << printed;
            EXPECT_EQ(printed, to_string(twice));
        }
    }
}

TEST(Printer, RoundTripsAwkwardLiterals) {
    for (const std::string s : {"-0.1*z1", "z1 - -3", "(1e-300 + 2.5e300i)*z1", "scale(-0.5-0.25i, z1)",
                                "mob(-0.9999999999999999, z1)", "0.1 + 0.2", "z1 * (0 - 1i)"}) {
        const Expr once = parse_expression(s, 1);
        EXPECT_EQ(once, parse_expression(to_string(once), 1)) << s << " -> " << to_string(once);
    }
}

TEST(Composition, TextualSubstitutionMatchesMapEvaluation) {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
        {"z1 * mob(0.3, z2) + exp(z1)", {"0.5*z1*z2", "pow(z2, 2)"}},
        {"log(2 + z1) - z2 / (3 - z1)", {"mob(0.2i, z1)", "scale(0.7, z2)"}},
        {"pow(z1 + z2, 3) * z3", {"z2", "0.5*z3", "mob(-0.4+0.1i, z1)"}},
    };
    auto rng = trial_engine(9, 0, 0);
    for (const auto& [outer, inner] : cases) {
        const std::size_t n = inner.size();
        std::string map_src;
        auto replace_all = [](std::string text, const std::string& from, const std::string& to) {
            for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
                text.replace(pos, from.size(), to);
            }
            return text;
        };
        std::string substituted = outer;
        for (std::size_t j = 0; j < n; ++j) {
            substituted = replace_all(substituted, "z" + std::to_string(j + 1), "@" + std::to_string(j + 1));
        }
        for (std::size_t j = 0; j < n; ++j) {
            substituted = replace_all(substituted, "@" + std::to_string(j + 1), "(" + inner[j] + ")");
        }
        for (std::size_t j = 0; j < n; ++j) map_src += (j ? ";" : "") + inner[j];
        const SymbolMap m = parse_map(map_src, n);
        const Expr f = parse_expression(outer, n);
        const Expr composed = parse_expression(substituted, n);
        for (int t = 0; t < 500; ++t) {
            const auto z = random_polydisc_point(rng, n, 0.99);
            const Complex direct = eval_scalar(composed, z);
            const Complex via = eval_scalar(f, eval_map_raw(m, z));
            EXPECT_LE(std::abs(direct - via), 1e-12 * std::max(1.0, std::abs(via))) << substituted;
        }
    }
}

TEST(EvalMap, Examples) {
    const SymbolMap id = parse_map("z1; z2", 2);
    const PolydiscPoint z({Complex(0.3, 0.1), -0.6});
    EXPECT_EQ(eval_map(id, z), z);
    const PolydiscPoint sq = eval_map(parse_map("pow(z1,2); z2", 2), PolydiscPoint({0.6, 0.2}));
    expect_close(sq[0], 0.36, 1e-15);
    expect_close(sq[1], 0.2);
    const PolydiscPoint half = eval_map(parse_map("0.5*z1; 0.5*z2", 2), PolydiscPoint({0.9, -0.9}));
    expect_close(half[0], 0.45);
    expect_close(half[1], -0.45);
    EXPECT_THROW(eval_map(parse_map("z1 + 0.5; z2", 2), PolydiscPoint({0.6, 0.0})), EscapeError);
}

TEST(Validate, Examples) {
    const ValidationReport half = validate_self_map(parse_map("0.5*z1; 0.5*z2", 2), 20000, 0);
    EXPECT_TRUE(half.passed);
    EXPECT_NEAR(half.max_sup_norm, 0.5, 1e-6);
    EXPECT_LT(half.max_sup_norm, 0.5);
    EXPECT_EQ(half.samples, 20001U);

    const ValidationReport shifted = validate_self_map(parse_map("z1 + 0.5; z2", 2), 20000, 0);
    EXPECT_FALSE(shifted.passed);
    ASSERT_TRUE(shifted.witness.has_value());
    EXPECT_GE(std::abs((*shifted.witness)[0] + 0.5), kSelfMapThreshold);
    EXPECT_FALSE(shifted.failure.empty());

    const ValidationReport id = validate_self_map(parse_map("z1; z2", 2), 20000, 0);
    EXPECT_TRUE(id.passed);
    EXPECT_LT(id.max_sup_norm, 1.0);

    const ValidationReport pole = validate_self_map(parse_map("1/z1; z2", 2), 1000, 0);
    EXPECT_FALSE(pole.passed);
    EXPECT_TRUE(pole.witness.has_value());
}

TEST(Validate, MarkingIsExplicit) {
    const SymbolMap m = parse_map("0.5*z1", 1);
    const ValidationReport report = validate_self_map(m, 1000, 3);
    EXPECT_TRUE(m.with_validation(report).validated());
    ValidationReport failed = report;
    failed.passed = false;
    EXPECT_FALSE(m.with_validation(failed).validated());
}
