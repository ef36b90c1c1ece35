#include "sltx/targets.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace sltx {

namespace {

std::vector<double>
parse_number_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw BadInput("cannot parse number \"" + item + "\" in " + what);
        }
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) {
            throw BadInput("trailing characters after number in " + what);
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw BadInput("empty number list in " + what);
    }
    return out;
}

std::vector<std::string>
split_bracket_groups(const std::string& text)
{
    std::vector<std::string> groups;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ',') {
            ++i;
            continue;
        }
        if (text[i] != '[') {
            throw BadInput("expected '[' in polynomial target spec");
        }
        const std::size_t close = text.find(']', i);
        if (close == std::string::npos) {
            throw BadInput("unbalanced '[' in polynomial target spec");
        }
        groups.push_back(text.substr(i + 1, close - i - 1));
        i = close + 1;
    }
    return groups;
}

} // namespace

double
TargetSpec::value(int segment, double x) const
{
    if (kind == Kind::Gaussian) {
        const double t = x - gauss_b;
        return std::exp(-gauss_a * t * t);
    }
    const auto& c = coeff[static_cast<std::size_t>(segment)];
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        v = v * x + c[k];
    }
    return v;
}

double
TargetSpec::derivative(int segment, double x) const
{
    if (kind == Kind::Gaussian) {
        const double t = x - gauss_b;
        return -2.0 * gauss_a * t * std::exp(-gauss_a * t * t);
    }
    const auto& c = coeff[static_cast<std::size_t>(segment)];
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        v = v * x + static_cast<double>(k) * c[k];
    }
    return v;
}

TargetSpec
parse_target(const std::string& text)
{
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw BadInput("target spec must look like poly:[...]x4 or gauss:a,b");
    }
    const std::string head = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);

    TargetSpec spec;
    if (head == "gauss") {
        spec.kind = TargetSpec::Kind::Gaussian;
        const std::vector<double> ab = parse_number_list(body, "gauss target");
        if (ab.size() != 2) {
            throw BadInput("gauss target needs exactly two parameters: gauss:a,b");
        }
        spec.gauss_a = ab[0];
        spec.gauss_b = ab[1];
        return spec;
    }
    if (head != "poly") {
        throw BadInput("unknown target kind \"" + head + "\"");
    }
    spec.kind = TargetSpec::Kind::Polynomial;
    if (body.size() > 2 && body.substr(body.size() - 2) == "x4") {
        const std::string inner = body.substr(0, body.size() - 2);
        const std::vector<std::string> groups = split_bracket_groups(inner);
        if (groups.size() != 1) {
            throw BadInput("poly:[...]x4 takes a single coefficient list");
        }
        const std::vector<double> c = parse_number_list(groups[0], "poly target");
        for (auto& seg : spec.coeff) seg = c;
        return spec;
    }
    const std::vector<std::string> groups = split_bracket_groups(body);
    if (groups.size() != 4) {
        throw BadInput("per-segment poly target needs four [...] lists");
    }
    for (std::size_t s = 0; s < 4; ++s) {
        spec.coeff[s] = parse_number_list(groups[s], "poly target");
    }
    return spec;
}

HElement
sample_target(const Problem& problem, std::shared_ptr<const Grid> grid, const TargetSpec& target,
              std::optional<double> scalar_override)
{
    HElement e;
    e.grid = grid;
    for (int s = 0; s < 4; ++s) {
        const auto si = static_cast<std::size_t>(s);
        e.f[si].resize(grid->x[si].size());
        for (std::size_t k = 0; k < e.f[si].size(); ++k) {
            e.f[si][k] = target.value(s, grid->x[si][k]);
        }
    }
    if (scalar_override) {
        e.h = *scalar_override;
    } else {
        e.h = boundary_functionals(problem, target.value(3, 1.0), target.derivative(3, 1.0)).Np;
    }
    return e;
}

} // namespace sltx
