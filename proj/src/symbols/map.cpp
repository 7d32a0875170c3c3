#include "polybloch/error.hpp"
#include "polybloch/sampling.hpp"
#include "polybloch/symbols.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace polybloch {

namespace {

std::string describe_point(std::span<const Complex> z) {
    std::string out = "(";
    char buf[96];
    for (std::size_t j = 0; j < z.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%s%.6g%+.6gi", j ? ", " : "", z[j].real(), z[j].imag());
        out += buf;
    }
    return out + ")";
}

} // namespace

SymbolMap::SymbolMap(std::vector<Expr> components, std::size_t dim, std::string source)
    : dim_(dim), components_(std::move(components)), source_(std::move(source)) {
    if (dim_ == 0) throw DomainError("SymbolMap: dimension must be at least 1");
    if (components_.size() != dim_) throw DomainError("SymbolMap: need exactly one component per coordinate");
    for (const Expr& e : components_) {
        if (e.variable_bound() > dim_) throw DomainError("SymbolMap: component uses a variable beyond the dimension");
    }
}

SymbolMap SymbolMap::with_validation(const ValidationReport& report) const {
    SymbolMap copy = *this;
    copy.validated_ = report.passed;
    return copy;
}

void eval_map_into(const SymbolMap& m, std::span<const Complex> z, std::span<Complex> out) {
    if (z.size() != m.dim() || out.size() != m.dim()) throw DomainError("eval_map: dimension mismatch");
    for (std::size_t j = 0; j < m.dim(); ++j) out[j] = eval_scalar(m.component(j), z);
}

std::vector<Complex> eval_map_raw(const SymbolMap& m, std::span<const Complex> z) {
    std::vector<Complex> out(m.dim());
    eval_map_into(m, z, out);
    return out;
}

PolydiscPoint eval_map(const SymbolMap& m, const PolydiscPoint& z) {
    std::vector<Complex> image = eval_map_raw(m, z.coords());
    for (std::size_t j = 0; j < image.size(); ++j) {
        if (std::abs(image[j]) >= 1.0 - kInteriorMargin) {
            throw EscapeError("map component " + std::to_string(j + 1) + " leaves the polydisc at z = " +
                              describe_point(z.coords()));
        }
    }
    return PolydiscPoint(std::move(image));
}

ValidationReport validate_self_map(const SymbolMap& m, std::size_t budget, std::uint64_t seed) {
    const BoundaryWeightedSampler sampler(m.dim(), seed);
    ValidationReport report;
    std::vector<Complex> z(m.dim());
    std::vector<Complex> image(m.dim());
    for (std::size_t k = 0; k <= budget; ++k) {
        sampler.fill(k, z);
        ++report.samples;
        try {
            eval_map_into(m, z, image);
        } catch (const EvalError& err) {
            if (!report.witness) {
                report.witness = z;
                report.failure = std::string("evaluation failed at ") + describe_point(z) + ": " + err.what();
            }
            continue;
        }
        const double s = sup_norm(image);
        report.max_sup_norm = std::max(report.max_sup_norm, s);
        if (s >= kSelfMapThreshold && !report.witness) {
            report.witness = z;
            report.failure = "image sup norm " + std::to_string(s) + " >= 1 - 1e-12 at " + describe_point(z);
        }
    }
    report.passed = !report.witness.has_value();
    return report;
}

} // namespace polybloch
