#include "zerocert/certificate_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "config_detail.hpp"
#include "text_tree.hpp"

namespace zerocert {

using text::TextNode;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

double to_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw std::runtime_error("certificate: bad number '" + tok + "'");
    return v;
}

long long to_int(const std::string& tok) {
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        throw std::runtime_error("certificate: bad integer '" + tok + "'");
    return v;
}

Vec to_vec(const std::vector<std::string>& toks) {
    Vec v;
    for (const std::string& t : toks) v.push_back(to_double(t));
    return v;
}

std::vector<std::string> vec_tokens(const Vec& v) {
    std::vector<std::string> out;
    for (double x : v) out.push_back(fmt_double(x));
    return out;
}

const std::vector<std::string>& need(const TextNode& n, const std::string& key) {
    const auto* e = n.find(key);
    if (!e) throw std::runtime_error("certificate: missing '" + key + "' in " + n.name);
    return *e;
}

double need_double(const TextNode& n, const std::string& key) { return to_double(need(n, key)[0]); }
long long need_int(const TextNode& n, const std::string& key) { return to_int(need(n, key)[0]); }

std::string join_tokens(const std::vector<std::string>& toks) {
    std::string out;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (i) out += ' ';
        out += toks[i];
    }
    return out;
}

std::vector<std::string> split_string(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// ---- PsiData ----

TextNode psi_to_node(const std::string& name, const PsiData& w) {
    TextNode n;
    n.name = name;
    for (const Vec& p : w.points) n.add("point", vec_tokens(p));
    for (double v : w.values) n.add("value", fmt_double(v));
    for (const Vec& g : w.subgradients) n.add("subgradient", vec_tokens(g));
    return n;
}

PsiData psi_from_node(const TextNode& n) {
    PsiData w;
    for (const auto* p : n.find_all("point")) w.points.push_back(to_vec(*p));
    for (const auto* v : n.find_all("value")) w.values.push_back(to_double((*v)[0]));
    for (const auto* g : n.find_all("subgradient")) w.subgradients.push_back(to_vec(*g));
    return w;
}

// ---- enums ----

std::string upper_kind_token(UpperWitnessKind k) {
    switch (k) {
        case UpperWitnessKind::recenter: return "recenter";
        case UpperWitnessKind::extension: return "extension";
        case UpperWitnessKind::exact_segment: return "exact_segment";
        case UpperWitnessKind::trivial: return "trivial";
    }
    return "trivial";
}

UpperWitnessKind upper_kind_from(const std::string& s) {
    if (s == "recenter") return UpperWitnessKind::recenter;
    if (s == "extension") return UpperWitnessKind::extension;
    if (s == "exact_segment") return UpperWitnessKind::exact_segment;
    if (s == "trivial") return UpperWitnessKind::trivial;
    throw std::runtime_error("certificate: bad upper witness kind '" + s + "'");
}

// ---- DeltaBounds ----

TextNode delta_to_node(const DeltaBounds& d) {
    TextNode n;
    n.name = "delta_bounds";
    n.add("lower", fmt_double(d.lower));
    n.add("upper", fmt_double(d.upper));
    n.add("upper_kind", upper_kind_token(d.upper_kind));
    n.add("recenter_center", vec_tokens(d.recenter_center));
    n.add("resolution", std::to_string(d.resolution));
    TextNode s;
    s.name = "slack";
    s.add("lp_lower", fmt_double(d.slack.lp_lower));
    s.add("analytic_floor", fmt_double(d.slack.analytic_floor));
    s.add("recenter_upper", fmt_double(d.slack.recenter_upper));
    s.add("extension_upper", fmt_double(d.slack.extension_upper));
    s.add("extension_slack", fmt_double(d.slack.extension_slack));
    s.add("g_box_active", d.slack.g_box_active ? "1" : "0");
    n.children.push_back(std::move(s));
    n.children.push_back(psi_to_node("lower_witness", d.lower_witness));
    if (d.upper_kind == UpperWitnessKind::extension)
        n.children.push_back(psi_to_node("extension_witness", d.extension_witness));
    return n;
}

DeltaBounds delta_from_node(const TextNode& n) {
    DeltaBounds d;
    d.lower = need_double(n, "lower");
    d.upper = need_double(n, "upper");
    d.upper_kind = upper_kind_from(need(n, "upper_kind")[0]);
    d.recenter_center = to_vec(need(n, "recenter_center"));
    d.resolution = static_cast<int>(need_int(n, "resolution"));
    if (const TextNode* s = n.child("slack")) {
        d.slack.lp_lower = need_double(*s, "lp_lower");
        d.slack.analytic_floor = need_double(*s, "analytic_floor");
        d.slack.recenter_upper = need_double(*s, "recenter_upper");
        d.slack.extension_upper = need_double(*s, "extension_upper");
        d.slack.extension_slack = need_double(*s, "extension_slack");
        d.slack.g_box_active = need_int(*s, "g_box_active") != 0;
    }
    if (const TextNode* w = n.child("lower_witness")) d.lower_witness = psi_from_node(*w);
    if (const TextNode* w = n.child("extension_witness")) d.extension_witness = psi_from_node(*w);
    return d;
}

// ---- HullCertificate ----

TextNode hull_to_node(const std::string& name, const HullCertificate& h) {
    TextNode n;
    n.name = name;
    n.add("kind", h.kind == HullCertificate::Kind::membership ? "membership" : "sample_separation");
    n.add("tol", fmt_double(h.tol));
    n.add("scope", split_string(h.scope));
    if (h.kind == HullCertificate::Kind::membership) {
        n.add("residual", fmt_double(h.residual));
        n.add("weights", vec_tokens(h.weights));
    } else {
        n.add("margin", fmt_double(h.margin));
        n.add("direction", vec_tokens(h.direction));
    }
    for (const Vec& p : h.sample_points) n.add("sample_point", vec_tokens(p));
    for (const Vec& p : h.images) n.add("image", vec_tokens(p));
    return n;
}

HullCertificate hull_from_node(const TextNode& n) {
    HullCertificate h;
    const std::string kind = need(n, "kind")[0];
    if (kind == "membership")
        h.kind = HullCertificate::Kind::membership;
    else if (kind == "sample_separation")
        h.kind = HullCertificate::Kind::sample_separation;
    else
        throw std::runtime_error("certificate: bad hull kind '" + kind + "'");
    h.tol = need_double(n, "tol");
    h.scope = join_tokens(need(n, "scope"));
    if (h.kind == HullCertificate::Kind::membership) {
        h.residual = need_double(n, "residual");
        h.weights = to_vec(need(n, "weights"));
    } else {
        h.margin = need_double(n, "margin");
        h.direction = to_vec(need(n, "direction"));
    }
    for (const auto* p : n.find_all("sample_point")) h.sample_points.push_back(to_vec(*p));
    for (const auto* p : n.find_all("image")) h.images.push_back(to_vec(*p));
    return h;
}

// ---- CertifyResult ----

TextNode certify_to_node(const CertifyResult& c) {
    TextNode n;
    n.name = "certify_result";
    n.add("status", c.status == CertifyStatus::certificate ? "certificate" : "no_certificate");
    if (c.certificate) {
        const NearZeroCertificate& z = *c.certificate;
        TextNode cn;
        cn.name = "near_zero_certificate";
        cn.children.push_back(config_detail::body_to_node("body", z.body));
        cn.add("delta_upper", fmt_double(z.delta_upper));
        cn.add("delta_upper_kind", upper_kind_token(z.delta_upper_kind));
        cn.add("lipschitz", fmt_double(z.lipschitz));
        cn.add("l_provenance", z.l_provenance == LProvenance::known ? "known" : "user_asserted");
        cn.add("claimed_bound", fmt_double(z.claimed_bound));
        cn.add("validation_grid_min", fmt_double(z.validation_grid_min));
        cn.add("sharpness_anomaly", z.sharpness_anomaly ? "1" : "0");
        cn.add("resolution", std::to_string(z.resolution));
        cn.children.push_back(hull_to_node("membership", z.membership));
        n.children.push_back(std::move(cn));
    }
    if (c.separation) n.children.push_back(hull_to_node("separation", *c.separation));
    return n;
}

CertifyResult certify_from_node(const TextNode& n) {
    CertifyResult c;
    const std::string st = need(n, "status")[0];
    c.status = st == "certificate" ? CertifyStatus::certificate : CertifyStatus::no_certificate;
    if (const TextNode* cn = n.child("near_zero_certificate")) {
        NearZeroCertificate z;
        const TextNode* bn = cn->child("body");
        if (!bn) throw std::runtime_error("certificate: near_zero_certificate missing body");
        z.body = config_detail::body_from_node(*bn);
        z.delta_upper = need_double(*cn, "delta_upper");
        z.delta_upper_kind = upper_kind_from(need(*cn, "delta_upper_kind")[0]);
        z.lipschitz = need_double(*cn, "lipschitz");
        z.l_provenance = need(*cn, "l_provenance")[0] == "known" ? LProvenance::known
                                                                 : LProvenance::user_asserted;
        z.claimed_bound = need_double(*cn, "claimed_bound");
        z.validation_grid_min = need_double(*cn, "validation_grid_min");
        z.sharpness_anomaly = need_int(*cn, "sharpness_anomaly") != 0;
        z.resolution = static_cast<int>(need_int(*cn, "resolution"));
        if (const TextNode* h = cn->child("membership")) z.membership = hull_from_node(*h);
        c.certificate = std::move(z);
    }
    if (const TextNode* h = n.child("separation")) c.separation = hull_from_node(*h);
    return c;
}

// ---- SearchResult ----

TextNode search_to_node(const SearchResult& s) {
    TextNode n;
    n.name = "search_result";
    n.add("found", s.found ? "1" : "0");
    n.add("delta_upper", fmt_double(s.delta_upper));
    n.add("membership_residual", fmt_double(s.membership_residual));
    n.add("assumption", split_string(s.assumption));
    if (s.found) n.children.push_back(config_detail::body_to_node("best_body", s.best_body));
    for (const SearchCandidate& c : s.trace) {
        TextNode cn;
        cn.name = "candidate";
        cn.add("delta_upper", fmt_double(c.delta_upper));
        cn.add("residual", fmt_double(c.residual));
        cn.children.push_back(config_detail::body_to_node("body", c.body));
        n.children.push_back(std::move(cn));
    }
    return n;
}

SearchResult search_from_node(const TextNode& n) {
    SearchResult s;
    s.found = need_int(n, "found") != 0;
    s.delta_upper = need_double(n, "delta_upper");
    s.membership_residual = need_double(n, "membership_residual");
    s.assumption = join_tokens(need(n, "assumption"));
    if (const TextNode* b = n.child("best_body")) s.best_body = config_detail::body_from_node(*b);
    for (const TextNode* cn : n.children_named("candidate")) {
        SearchCandidate c;
        c.delta_upper = need_double(*cn, "delta_upper");
        c.residual = need_double(*cn, "residual");
        const TextNode* b = cn->child("body");
        if (!b) throw std::runtime_error("certificate: search candidate missing body");
        c.body = config_detail::body_from_node(*b);
        s.trace.push_back(std::move(c));
    }
    return s;
}

// ---- Example11Table ----

TextNode example11_to_node(const Example11Table& t) {
    TextNode n;
    n.name = "example11_table";
    n.add("min_image_norm", fmt_double(t.min_image_norm));
    n.add("zero_in_image", t.zero_in_image ? "1" : "0");
    for (const Example11Row& r : t.rows) {
        TextNode rn;
        rn.name = "row";
        rn.add("n", std::to_string(r.n));
        rn.add("alpha", fmt_double(r.alpha));
        rn.add("beta", fmt_double(r.beta));
        rn.add("phi_alpha", vec_tokens(r.phi_alpha));
        rn.add("phi_beta", vec_tokens(r.phi_beta));
        rn.add("norm_osc_bound", fmt_double(r.norm_osc_bound));
        rn.add("delta_exact", fmt_double(r.delta_exact));
        rn.add("membership_residual", fmt_double(r.membership_residual));
        n.children.push_back(std::move(rn));
    }
    return n;
}

Example11Table example11_from_node(const TextNode& n) {
    Example11Table t;
    t.min_image_norm = need_double(n, "min_image_norm");
    t.zero_in_image = need_int(n, "zero_in_image") != 0;
    for (const TextNode* rn : n.children_named("row")) {
        Example11Row r;
        r.n = static_cast<int>(need_int(*rn, "n"));
        r.alpha = need_double(*rn, "alpha");
        r.beta = need_double(*rn, "beta");
        r.phi_alpha = to_vec(need(*rn, "phi_alpha"));
        r.phi_beta = to_vec(need(*rn, "phi_beta"));
        r.norm_osc_bound = need_double(*rn, "norm_osc_bound");
        r.delta_exact = need_double(*rn, "delta_exact");
        r.membership_residual = need_double(*rn, "membership_residual");
        t.rows.push_back(std::move(r));
    }
    return t;
}

// ---- gap / convexity ----

TextNode gap_to_node(const GapCheckResult& g) {
    TextNode n;
    n.name = "gap_check";
    n.add("holds", g.holds ? "1" : "0");
    n.add("lhs", fmt_double(g.lhs));
    n.add("rhs", fmt_double(g.rhs));
    n.add("slack", fmt_double(g.slack));
    TextNode r;
    r.name = "report";
    r.add("inf_sup", fmt_double(g.report.inf_sup));
    r.add("sup_inf", fmt_double(g.report.sup_inf));
    r.add("gap", fmt_double(g.report.gap));
    r.add("rhs_bound", fmt_double(g.report.rhs_bound));
    r.add("discretization_slack", fmt_double(g.report.discretization_slack));
    r.add("covering_radius", fmt_double(g.report.covering_radius));
    r.add("slack_certified", g.report.slack_certified ? "1" : "0");
    n.children.push_back(std::move(r));
    return n;
}

GapCheckResult gap_from_node(const TextNode& n) {
    GapCheckResult g;
    g.holds = need_int(n, "holds") != 0;
    g.lhs = need_double(n, "lhs");
    g.rhs = need_double(n, "rhs");
    g.slack = need_double(n, "slack");
    if (const TextNode* r = n.child("report")) {
        g.report.inf_sup = need_double(*r, "inf_sup");
        g.report.sup_inf = need_double(*r, "sup_inf");
        g.report.gap = need_double(*r, "gap");
        g.report.rhs_bound = need_double(*r, "rhs_bound");
        g.report.discretization_slack = need_double(*r, "discretization_slack");
        g.report.covering_radius = need_double(*r, "covering_radius");
        g.report.slack_certified = need_int(*r, "slack_certified") != 0;
    }
    return g;
}

TextNode convexity_to_node(const ConvexityCheckResult& c) {
    TextNode n;
    n.name = "convexity_check";
    n.add("violations", std::to_string(c.violations));
    n.add("worst", fmt_double(c.worst));
    n.add("trials", std::to_string(c.trials));
    return n;
}

ConvexityCheckResult convexity_from_node(const TextNode& n) {
    ConvexityCheckResult c;
    c.violations = static_cast<int>(need_int(n, "violations"));
    c.worst = need_double(n, "worst");
    c.trials = static_cast<int>(need_int(n, "trials"));
    return c;
}

}  // namespace

std::string serialize_certificate(const CertificateFile& cert) {
    TextNode root;
    TextNode n;
    n.name = "zerocert_certificate";
    n.add("schema_version", std::to_string(cert.schema_version));
    n.add("library_version", cert.library_version);
    n.add("command", cert.command);
    if (!cert.timestamp.empty()) n.add("timestamp", cert.timestamp);
    {
        TextNode cfg = config_detail::config_to_node(cert.config);
        cfg.name = "config";
        n.children.push_back(std::move(cfg));
    }
    if (cert.delta) n.children.push_back(delta_to_node(*cert.delta));
    if (cert.certify) n.children.push_back(certify_to_node(*cert.certify));
    if (cert.search) n.children.push_back(search_to_node(*cert.search));
    if (cert.example11) n.children.push_back(example11_to_node(*cert.example11));
    if (cert.gap_check) n.children.push_back(gap_to_node(*cert.gap_check));
    if (cert.convexity_check) n.children.push_back(convexity_to_node(*cert.convexity_check));
    root.children.push_back(std::move(n));
    return text::serialize_tree(root);
}

CertificateFile parse_certificate(const std::string& textdoc) {
    const TextNode root = text::parse_tree(textdoc);
    const TextNode* n = root.child("zerocert_certificate");
    if (!n) throw std::runtime_error("not a zerocert certificate file");
    CertificateFile cert;
    cert.schema_version = static_cast<int>(need_int(*n, "schema_version"));
    cert.library_version = need(*n, "library_version")[0];
    cert.command = need(*n, "command")[0];
    if (const auto* ts = n->find("timestamp")) cert.timestamp = join_tokens(*ts);
    if (const TextNode* cfg = n->child("config"))
        cert.config = config_detail::config_from_node(*cfg);
    if (const TextNode* p = n->child("delta_bounds")) cert.delta = delta_from_node(*p);
    if (const TextNode* p = n->child("certify_result")) cert.certify = certify_from_node(*p);
    if (const TextNode* p = n->child("search_result")) cert.search = search_from_node(*p);
    if (const TextNode* p = n->child("example11_table")) cert.example11 = example11_from_node(*p);
    if (const TextNode* p = n->child("gap_check")) cert.gap_check = gap_from_node(*p);
    if (const TextNode* p = n->child("convexity_check"))
        cert.convexity_check = convexity_from_node(*p);
    return cert;
}

std::string example11_csv(const Example11Table& table) {
    std::string out =
        "n,alpha,beta,phi_alpha_1,phi_alpha_2,phi_beta_1,phi_beta_2,norm_osc_bound,delta_exact,"
        "membership_residual\n";
    for (const Example11Row& r : table.rows) {
        out += std::to_string(r.n);
        out += ',' + fmt_double(r.alpha) + ',' + fmt_double(r.beta);
        out += ',' + fmt_double(r.phi_alpha[0]) + ',' + fmt_double(r.phi_alpha[1]);
        out += ',' + fmt_double(r.phi_beta[0]) + ',' + fmt_double(r.phi_beta[1]);
        out += ',' + fmt_double(r.norm_osc_bound) + ',' + fmt_double(r.delta_exact);
        out += ',' + fmt_double(r.membership_residual);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        f << content;
        if (!f.good()) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename to '" + path + "' failed");
}

}  // namespace zerocert
