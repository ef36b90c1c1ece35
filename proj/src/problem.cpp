#include "sltx/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sltx {

namespace {

bool
all_finite(const ProblemSpec& s)
{
    for (double v : s.p) {
        if (!std::isfinite(v)) return false;
    }
    for (double v : s.h) {
        if (!std::isfinite(v)) return false;
    }
    for (const auto& c : s.q.coeff) {
        for (double v : c) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (const auto& t : s.trans) {
        if (!std::isfinite(t.a) || !std::isfinite(t.b) || !std::isfinite(t.c) || !std::isfinite(t.d)) return false;
    }
    return std::isfinite(s.left_bc.alpha1) && std::isfinite(s.left_bc.alpha2) && std::isfinite(s.right_bc.beta1) &&
           std::isfinite(s.right_bc.beta2) && std::isfinite(s.right_bc.beta1p) && std::isfinite(s.right_bc.beta2p);
}

} // namespace

Problem
Problem::validate(const ProblemSpec& raw)
{
    if (!all_finite(raw)) {
        throw BadInput("problem data contains NaN or Inf");
    }
    for (int i = 0; i < 4; ++i) {
        if (raw.p[static_cast<std::size_t>(i)] == 0.0) {
            throw ZeroLeadingCoefficient(i);
        }
        if (raw.q.coeff[static_cast<std::size_t>(i)].empty()) {
            throw BadInput("potential coefficient list for segment " + std::to_string(i + 1) + " is empty");
        }
    }
    if (!(-1.0 < raw.h[0] && raw.h[0] < raw.h[1] && raw.h[1] < raw.h[2] && raw.h[2] < 1.0)) {
        throw BadInterfaces("interfaces must satisfy -1 < h1 < h2 < h3 < 1");
    }
    if (raw.left_bc.alpha1 == 0.0 && raw.left_bc.alpha2 == 0.0) {
        throw DegenerateLeftBc();
    }

    DerivedConstants c;
    c.theta = raw.trans[0].det();
    c.gamma = raw.trans[1].det();
    c.xi = raw.trans[2].det();
    c.rho = raw.right_bc.beta1p * raw.right_bc.beta2 - raw.right_bc.beta1 * raw.right_bc.beta2p;
    if (!(c.theta > 0.0)) throw NonPositiveDeterminant("theta", c.theta);
    if (!(c.gamma > 0.0)) throw NonPositiveDeterminant("gamma", c.gamma);
    if (!(c.xi > 0.0)) throw NonPositiveDeterminant("xi", c.xi);
    if (!(c.rho > 0.0)) throw NonPositiveDeterminant("rho", c.rho);

    Problem p;
    p.spec_ = raw;
    p.consts_ = c;
    p.edges_ = {-1.0, raw.h[0], raw.h[1], raw.h[2], 1.0};
    p.weights_[0] = 1.0 / p.p_squared(0);
    p.weights_[1] = 1.0 / (p.p_squared(1) * c.theta);
    p.weights_[2] = 1.0 / (p.p_squared(2) * c.theta * c.gamma);
    p.weights_[3] = 1.0 / (p.p_squared(3) * c.theta * c.gamma * c.xi);
    p.scalar_weight_ = 1.0 / (c.rho * c.theta * c.gamma * c.xi);
    return p;
}

PointState
apply_transmission(const TransmissionBlock& block, const PointState& s)
{
    return {block.a * s.u + block.b * s.du, block.c * s.u + block.d * s.du};
}

PointState
invert_transmission(const TransmissionBlock& block, const PointState& s)
{
    const double det = block.det();
    return {(block.d * s.u - block.b * s.du) / det, (-block.c * s.u + block.a * s.du) / det};
}

namespace {

using nlohmann::json;

double
require_number(const json& j, const std::string& where)
{
    if (!j.is_number()) {
        throw BadInput("expected a number at " + where);
    }
    return j.get<double>();
}

const json&
require_key(const json& j, const std::string& key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end()) {
        throw BadInput("missing key \"" + key + "\" in " + where);
    }
    return *it;
}

} // namespace

ProblemSpec
parse_problem_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw BadInput(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw BadInput("problem file must contain a JSON object");
    }

    ProblemSpec s;
    const json& jp = require_key(j, "p", "problem");
    if (!jp.is_array() || jp.size() != 4) throw BadInput("\"p\" must be an array of 4 numbers");
    for (std::size_t i = 0; i < 4; ++i) s.p[i] = require_number(jp[i], "p");

    const json& jh = require_key(j, "h", "problem");
    if (!jh.is_array() || jh.size() != 3) throw BadInput("\"h\" must be an array of 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) s.h[i] = require_number(jh[i], "h");

    const json& jq = require_key(j, "q", "problem");
    if (!jq.is_array() || jq.size() != 4) throw BadInput("\"q\" must be an array of 4 coefficient lists");
    for (std::size_t i = 0; i < 4; ++i) {
        if (!jq[i].is_array() || jq[i].empty()) throw BadInput("\"q\" entries must be nonempty arrays");
        s.q.coeff[i].clear();
        for (const auto& v : jq[i]) s.q.coeff[i].push_back(require_number(v, "q"));
    }

    const json& jl = require_key(j, "left_bc", "problem");
    s.left_bc.alpha1 = require_number(require_key(jl, "alpha1", "left_bc"), "left_bc.alpha1");
    s.left_bc.alpha2 = require_number(require_key(jl, "alpha2", "left_bc"), "left_bc.alpha2");

    const json& jr = require_key(j, "right_bc", "problem");
    s.right_bc.beta1 = require_number(require_key(jr, "beta1", "right_bc"), "right_bc.beta1");
    s.right_bc.beta2 = require_number(require_key(jr, "beta2", "right_bc"), "right_bc.beta2");
    s.right_bc.beta1p = require_number(require_key(jr, "beta1p", "right_bc"), "right_bc.beta1p");
    s.right_bc.beta2p = require_number(require_key(jr, "beta2p", "right_bc"), "right_bc.beta2p");

    const json& jt = require_key(j, "transmission", "problem");
    if (!jt.is_array() || jt.size() != 3) throw BadInput("\"transmission\" must be an array of 3 blocks");
    for (std::size_t i = 0; i < 3; ++i) {
        const json& b = jt[i];
        s.trans[i].a = require_number(require_key(b, "a", "transmission"), "transmission.a");
        s.trans[i].b = require_number(require_key(b, "b", "transmission"), "transmission.b");
        s.trans[i].c = require_number(require_key(b, "c", "transmission"), "transmission.c");
        s.trans[i].d = require_number(require_key(b, "d", "transmission"), "transmission.d");
    }
    return s;
}

ProblemSpec
load_problem_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw BadInput("cannot open problem file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem_json(ss.str());
}

std::string
problem_to_json(const ProblemSpec& s)
{
    json j;
    j["p"] = s.p;
    j["h"] = s.h;
    j["q"] = s.q.coeff;
    j["left_bc"] = {{"alpha1", s.left_bc.alpha1}, {"alpha2", s.left_bc.alpha2}};
    j["right_bc"] = {{"beta1", s.right_bc.beta1},
                     {"beta2", s.right_bc.beta2},
                     {"beta1p", s.right_bc.beta1p},
                     {"beta2p", s.right_bc.beta2p}};
    j["transmission"] = json::array();
    for (const auto& t : s.trans) {
        j["transmission"].push_back({{"a", t.a}, {"b", t.b}, {"c", t.c}, {"d", t.d}});
    }
    return j.dump(2);
}

} // namespace sltx
