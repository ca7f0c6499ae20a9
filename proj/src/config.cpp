#include "zerocert/config.hpp"

#include <cstdlib>

#include "config_detail.hpp"
#include "text_tree.hpp"
#include "zerocert/certificate_io.hpp"

namespace zerocert {

using text::TextNode;

namespace {

double to_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ConfigError("bad number '" + tok + "'");
    return v;
}

long long to_int(const std::string& tok) {
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') throw ConfigError("bad integer '" + tok + "'");
    return v;
}

Vec to_vec(const std::vector<std::string>& toks, size_t from = 0) {
    Vec v;
    for (size_t i = from; i < toks.size(); ++i) v.push_back(to_double(toks[i]));
    return v;
}

std::vector<std::string> vec_tokens(const Vec& v) {
    std::vector<std::string> out;
    for (double x : v) out.push_back(fmt_double(x));
    return out;
}

}  // namespace

namespace config_detail {

ConvexBody body_from_node(const TextNode& n) {
    const auto* kind = n.find("kind");
    if (!kind || kind->size() != 1) throw ConfigError("body section needs 'kind'");
    const std::string& k = (*kind)[0];
    if (k == "segment") {
        const auto* a = n.find("a");
        const auto* b = n.find("b");
        if (!a || !b) throw ConfigError("segment needs 'a' and 'b'");
        return Segment{to_vec(*a), to_vec(*b)};
    }
    if (k == "polytope") {
        Polytope p;
        for (const auto* v : n.find_all("vertex")) p.vertices.push_back(to_vec(*v));
        if (p.vertices.empty()) throw ConfigError("polytope needs at least one 'vertex'");
        return p;
    }
    if (k == "ball") {
        const auto* c = n.find("center");
        const auto* r = n.find("radius");
        if (!c || !r || r->size() != 1) throw ConfigError("ball needs 'center' and 'radius'");
        return BallBody{to_vec(*c), to_double((*r)[0])};
    }
    throw ConfigError("unknown body kind '" + k + "'");
}

TextNode body_to_node(const std::string& name, const ConvexBody& body) {
    TextNode n;
    n.name = name;
    if (const auto* s = std::get_if<Segment>(&body)) {
        n.add("kind", "segment");
        n.add("a", vec_tokens(s->a));
        n.add("b", vec_tokens(s->b));
    } else if (const auto* p = std::get_if<Polytope>(&body)) {
        n.add("kind", "polytope");
        for (const Vec& v : p->vertices) n.add("vertex", vec_tokens(v));
    } else {
        const auto& b = std::get<BallBody>(body);
        n.add("kind", "ball");
        n.add("center", vec_tokens(b.center));
        n.add("radius", fmt_double(b.radius));
    }
    return n;
}

ProblemConfig config_from_node(const TextNode& root) {
    ProblemConfig cfg;
    const TextNode* opn = root.child("operator");
    if (!opn) throw ConfigError("config needs an 'operator' section");
    const auto* nm = opn->find("name");
    if (!nm || nm->size() != 1) throw ConfigError("operator section needs 'name'");
    cfg.operator_name = (*nm)[0];
    for (const auto* p : opn->find_all("param")) {
        const auto& toks = *p;
        if (toks.size() < 3) throw ConfigError("param needs: key type values...");
        const std::string& key = toks[0];
        const std::string& type = toks[1];
        if (type == "double") {
            cfg.operator_params[key] = to_double(toks[2]);
        } else if (type == "vec") {
            cfg.operator_params[key] = to_vec(toks, 2);
        } else if (type == "mat") {
            if (toks.size() < 4) throw ConfigError("mat param needs rows cols entries...");
            const int r = static_cast<int>(to_int(toks[2]));
            const int c = static_cast<int>(to_int(toks[3]));
            if (r <= 0 || c <= 0 || toks.size() != 4 + static_cast<size_t>(r) * c)
                throw ConfigError("mat param '" + key + "': wrong entry count");
            Matrix m(r, c);
            for (int i = 0; i < r * c; ++i) m.a[i] = to_double(toks[4 + i]);
            cfg.operator_params[key] = m;
        } else {
            throw ConfigError("unknown param type '" + type + "'");
        }
    }
    if (const TextNode* rn = root.child("region")) cfg.region = body_from_node(*rn);
    if (const TextNode* bn = root.child("body")) cfg.body = body_from_node(*bn);
    if (const auto* e = root.find("resolution")) cfg.resolution = static_cast<int>(to_int((*e)[0]));
    if (const auto* e = root.find("seed")) cfg.seed = static_cast<std::uint64_t>(to_int((*e)[0]));
    if (const auto* e = root.find("n_max")) cfg.n_max = static_cast<int>(to_int((*e)[0]));
    if (const auto* e = root.find("budget")) cfg.budget = static_cast<int>(to_int((*e)[0]));
    if (const auto* e = root.find("L_override")) cfg.l_override = to_double((*e)[0]);
    for (const auto* t : root.find_all("tol")) {
        if (t->size() != 2) throw ConfigError("tol entries need: tol NAME VALUE");
        cfg.tol_overrides[(*t)[0]] = to_double((*t)[1]);
    }
    if (cfg.resolution < 1) throw ConfigError("resolution must be >= 1");
    return cfg;
}

TextNode config_to_node(const ProblemConfig& cfg) {
    TextNode root;
    TextNode opn;
    opn.name = "operator";
    opn.add("name", cfg.operator_name);
    for (const auto& [key, val] : cfg.operator_params) {
        std::vector<std::string> toks = {key};
        if (const double* d = std::get_if<double>(&val)) {
            toks.push_back("double");
            toks.push_back(fmt_double(*d));
        } else if (const Vec* v = std::get_if<Vec>(&val)) {
            toks.push_back("vec");
            for (double x : *v) toks.push_back(fmt_double(x));
        } else {
            const Matrix& m = std::get<Matrix>(val);
            toks.push_back("mat");
            toks.push_back(std::to_string(m.rows));
            toks.push_back(std::to_string(m.cols));
            for (double x : m.a) toks.push_back(fmt_double(x));
        }
        opn.add("param", toks);
    }
    root.children.push_back(std::move(opn));
    if (cfg.region) root.children.push_back(body_to_node("region", *cfg.region));
    if (cfg.body) root.children.push_back(body_to_node("body", *cfg.body));
    root.add("resolution", std::to_string(cfg.resolution));
    root.add("seed", std::to_string(cfg.seed));
    root.add("n_max", std::to_string(cfg.n_max));
    root.add("budget", std::to_string(cfg.budget));
    if (cfg.l_override) root.add("L_override", fmt_double(*cfg.l_override));
    for (const auto& [name, value] : cfg.tol_overrides)
        root.add("tol", std::vector<std::string>{name, fmt_double(value)});
    return root;
}

}  // namespace config_detail

Tolerances ProblemConfig::tolerances() const {
    Tolerances t;
    for (const auto& [name, value] : tol_overrides) t.set(name, value);
    return t;
}

const ConvexBody& ProblemConfig::body_or_region() const {
    if (body) return *body;
    if (region) return *region;
    throw ConfigError("config needs a 'body' or 'region' section for this command");
}

ProblemConfig parse_config(const std::string& text) {
    return config_detail::config_from_node(text::parse_tree(text));
}

std::string serialize_config(const ProblemConfig& cfg) {
    return text::serialize_tree(config_detail::config_to_node(cfg));
}

OperatorHandle build_operator(const ProblemConfig& cfg) {
    OperatorHandle op = make_catalog_operator(cfg.operator_name, cfg.operator_params);
    if (cfg.l_override) {
        if (!(*cfg.l_override >= 0.0)) throw ConfigError("L_override must be nonnegative");
        op.known_grad_lipschitz = *cfg.l_override;
        op.l_provenance = LProvenance::user_asserted;
    }
    const Tolerances tol = cfg.tolerances();
    op.fd_step = tol.fd_step;
    return op;
}

}  // namespace zerocert
