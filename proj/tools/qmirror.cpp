#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmirror/correspond.hpp"
#include "qmirror/svg.hpp"

using namespace qmirror;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kVerifyFailed = 1, kConfigError = 2, kPerturb = 3 };

constexpr int kSchemaVersion = 1;
constexpr int kGuardrail = 8;

struct Config {
    std::vector<Vec2> m;
    std::vector<Vec2> theta;
    int N = 1;
    int K = 4;
    std::uint64_t seed = 1;
    bool factored = false;
    std::optional<Json> tropical;
};

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> order_t;
    std::optional<int> order_u;
    std::string out;
    std::string format = "json";
    bool override_guardrail = false;
};

[[noreturn]] void bad(const std::string& field, const std::string& what)
{
    throw ConfigError("field '" + field + "': " + what);
}

Vec2 parse_vec(const Json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        bad(field, "expected [int, int]");
    return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

Rational parse_rational(const Json& j, const std::string& field)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) bad(field, "expected an integer or a string \"p/q\"");
    try {
        Rational r(j.get<std::string>());
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        bad(field, "not a rational number: " + j.get<std::string>());
    }
}

RatVec2 parse_point(const Json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 2) bad(field, "expected a pair of rationals");
    return {parse_rational(j[0], field + "[0]"), parse_rational(j[1], field + "[1]")};
}

std::vector<Vec2> parse_vecs(const Json& root, const std::string& key, bool required)
{
    std::vector<Vec2> out;
    if (!root.contains(key)) {
        if (required) bad(key, "missing");
        return out;
    }
    const Json& a = root[key];
    if (!a.is_array()) bad(key, "expected a list of vectors");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string f = key + "[" + std::to_string(i) + "]";
        const Vec2 v = parse_vec(a[i], f);
        if (v.is_zero()) bad(f, "vector must be nonzero");
        out.push_back(v);
    }
    return out;
}

int parse_cap(const Json& root, const std::string& key, int fallback)
{
    if (!root.contains(key)) return fallback;
    if (!root[key].is_number_integer() || root[key].get<int>() < 0) bad(key, "expected an integer >= 0");
    return root[key].get<int>();
}

TropicalDegree parse_tropical(const Json& t, std::uint64_t seed)
{
    TropicalDegree deg;
    if (!t.is_object()) bad("tropical", "expected an object");
    if (!t.contains("ends") || !t["ends"].is_array()) bad("tropical.ends", "missing list");
    for (std::size_t i = 0; i < t["ends"].size(); ++i) {
        const Json& e = t["ends"][i];
        const std::string f = "tropical.ends[" + std::to_string(i) + "]";
        TropicalEnd end;
        end.dir = parse_vec(e.value("dir", Json()), f + ".dir");
        if (end.dir.is_zero()) bad(f + ".dir", "vector must be nonzero");
        end.fixed = e.value("fixed", false);
        if (end.fixed) end.offset = parse_point(e.value("offset", Json()), f + ".offset");
        end.cls = e.value("cls", -1);
        deg.ends.push_back(end);
    }
    RationalSampler rs(seed);
    if (t.contains("points")) {
        for (std::size_t i = 0; i < t["points"].size(); ++i) {
            const Json& p = t["points"][i];
            const std::string f = "tropical.points[" + std::to_string(i) + "]";
            const int k = p.value("k", 0);
            if (k < 0) bad(f + ".k", "expected k >= 0");
            deg.points.push_back({p.contains("pos") ? parse_point(p["pos"], f + ".pos") : rs.next_point(), k});
        }
    }
    if (t.contains("random_points")) {
        const int n = t["random_points"].get<int>();
        for (int i = 0; i < n; ++i) deg.points.push_back({rs.next_point(), 0});
    }
    return deg;
}

Config load_config(const Options& opt)
{
    if (opt.config.empty()) throw ConfigError("no --config given");
    std::ifstream in(opt.config);
    if (!in) throw ConfigError("cannot open " + opt.config);
    Json root;
    try {
        root = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(opt.config + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(opt.config + ": top level must be an object");
    if (root.value("version", 0) != kSchemaVersion) bad("version", "expected " + std::to_string(kSchemaVersion));

    Config c;
    c.m = parse_vecs(root, "m", true);
    c.theta = parse_vecs(root, "theta", false);
    c.N = parse_cap(root, "N", 1);
    c.K = parse_cap(root, "K", 4);
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) bad("seed", "expected an integer >= 0");
        c.seed = root["seed"].get<std::uint64_t>();
    }
    c.factored = root.value("factored", false);
    if (opt.seed) c.seed = *opt.seed;
    if (opt.order_t) c.N = *opt.order_t;
    if (opt.order_u) c.K = *opt.order_u;
    if (c.N < 0 || c.K < 0) throw ConfigError("orders must be >= 0");
    if (root.contains("tropical")) {
        c.tropical = root["tropical"];
        parse_tropical(*c.tropical, c.seed);
    }
    return c;
}

void guardrail(const Config& c, const Options& opt)
{
    const int nN = static_cast<int>(c.m.size()) * c.N;
    if (nN > kGuardrail && !opt.override_guardrail)
        throw ConfigError("square-zero ring with n*N = " + std::to_string(nN) + " > " + std::to_string(kGuardrail) +
                          " is out of desk scale; pass --override-guardrail to run anyway");
}

ScatteringDiagram diagram(const Config& c, const Options& opt, bool factored)
{
    if (factored) {
        guardrail(c, opt);
        return complete_to_consistency(build_factored_diagram(c.m, c.N, sample_offsets(static_cast<int>(c.m.size()), c.N, c.seed)));
    }
    return complete_to_consistency(build_initial_diagram(c.m, c.N));
}

void need_theta(const Config& c)
{
    if (c.theta.size() < 2) bad("theta", "need at least two vectors");
}

Json window(int N, std::optional<int> K = std::nullopt)
{
    Json w;
    w["N"] = N;
    if (K) w["K"] = *K;
    return w;
}

std::string window_str(int N, std::optional<int> K = std::nullopt)
{
    return "(N=" + std::to_string(N) + (K ? ",K=" + std::to_string(*K) : std::string()) + ")";
}

std::string profile_str(const std::vector<int>& p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

std::string gauss_str(const Gauss& g)
{
    if (g.im == 0) return g.re.get_str();
    return "(" + g.re.get_str() + (g.im < 0 ? " - " : " + ") + mpq_class(abs(g.im)).get_str() + "*i)";
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const
    {
        std::vector<std::size_t> w(header.size());
        for (std::size_t i = 0; i < header.size(); ++i) w[i] = header[i].size();
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << r[i];
                if (i + 1 < r.size()) os << std::string(w[i] - r[i].size() + 2, ' ');
            }
            os << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return os.str();
    }
};

struct Result {
    Json json;
    std::vector<std::pair<std::string, Table>> tables;
    std::vector<std::pair<std::string, std::string>> files;
    int status = kPass;
};

Json wall_json(const Wall& w, std::size_t i, int N)
{
    Json j;
    j["index"] = i;
    j["base"] = to_string(w.base);
    j["direction"] = to_string(w.direction);
    j["kind"] = w.kind == WallKind::Line ? "line" : "ray";
    j["provenance"] = w.provenance.str();
    j["hamiltonian"] = w.hamiltonian.element().str();
    j["window"] = window(N);
    return j;
}

Result cmd_scatter(const Config& c, const Options& opt)
{
    const auto d = diagram(c, opt, c.factored);
    Result r;
    r.json["command"] = "scatter";
    r.json["factored"] = c.factored;
    r.json["window"] = window(c.N);
    r.json["consistent"] = d.consistent;
    r.json["certified_order"] = d.certified_order;
    Table t{{"index", "base", "direction", "kind", "provenance", "window", "hamiltonian"}, {}};
    Json walls = Json::array();
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        const Json w = wall_json(d.walls[i], i, c.N);
        walls.push_back(w);
        t.rows.push_back({std::to_string(i), w["base"], w["direction"], w["kind"], w["provenance"], window_str(c.N), w["hamiltonian"]});
    }
    r.json["walls"] = walls;
    r.tables.emplace_back("walls", t);
    return r;
}

Json broken_line_json(const BrokenLine& bl, const BaseRing& ring)
{
    Json j;
    j["r"] = to_string(bl.r);
    Json pts = Json::array();
    for (const auto& s : bl.segments)
        if (s.start) pts.push_back(to_string(*s.start));
    pts.push_back(to_string(bl.Q));
    j["vertices"] = pts;
    j["final_monomial"] = QTElement::monomial(ring, bl.v(), bl.coeff(), bl.mono()).str();
    return j;
}

Result cmd_theta(const Config& c, const Options& opt)
{
    need_theta(c);
    const auto d = diagram(c, opt, false);
    const RatVec2 Q = sample_endpoint(d, c.seed);
    Result r;
    r.json["command"] = "theta";
    r.json["Q"] = to_string(Q);
    Table t{{"r", "window", "theta"}, {}};
    Json thetas = Json::array();
    for (Vec2 v : c.theta) {
        Json j;
        j["r"] = to_string(v);
        j["window"] = window(c.N);
        j["theta"] = theta_function(d, v, Q).str();
        Json lines = Json::array();
        for (const auto& bl : enumerate_broken_lines(d, v, Q)) {
            lines.push_back(broken_line_json(bl, d.ring));
        }
        j["broken_lines"] = lines;
        t.rows.push_back({j["r"], window_str(c.N), j["theta"]});
        thetas.push_back(j);
    }
    r.json["thetas"] = thetas;
    r.tables.emplace_back("theta functions at Q = " + to_string(Q), t);
    return r;
}

Result cmd_bracket(const Config& c, const Options& opt)
{
    need_theta(c);
    const auto d = diagram(c, opt, false);
    const RatVec2 Q = sample_endpoint(d, c.seed);
    const BaseSeries direct = bracket_direct(d, c.theta, Q);
    const BaseSeries product = bracket_via_product(d, c.theta, Q);
    const BaseSeries sym = sym_bracket(d, c.theta, Q);
    Result r;
    r.json["command"] = "bracket";
    r.json["Q"] = to_string(Q);
    r.json["window"] = window(c.N);
    r.json["direct"] = direct.str();
    r.json["via_product"] = product.str();
    r.json["symmetrized"] = sym.str();
    r.json["methods_agree"] = direct == product;
    Table t{{"p", "window", "direct", "via_product", "symmetrized"}, {}};
    for (const auto& p : profiles(static_cast<int>(c.m.size()), c.N)) {
        const Mono mono = t_monomial(p);
        t.rows.push_back({profile_str(p), window_str(c.N), direct.coeff(mono).str(), product.coeff(mono).str(), sym.coeff(mono).str()});
    }
    r.tables.emplace_back("bracket coefficients per t-monomial", t);
    if (!(direct == product)) r.status = kVerifyFailed;
    return r;
}

Json curve_json(const TropicalCurve& cv)
{
    Json j;
    Json vs = Json::array();
    for (const auto& v : cv.vertices) {
        Json x;
        x["pos"] = to_string(v.pos);
        x["marked"] = v.marked;
        x["multiplicity"] = v.mult.str();
        vs.push_back(x);
    }
    Json es = Json::array();
    for (const auto& e : cv.edges) {
        Json x;
        x["from"] = e.a;
        x["to"] = e.b;
        x["weight"] = to_string(e.weight);
        if (e.b >= 0) x["length"] = e.length.get_str();
        else x["end"] = e.end;
        es.push_back(x);
    }
    j["vertices"] = vs;
    j["edges"] = es;
    j["multiplicity"] = cv.multiplicity.str();
    return j;
}

TropicalDegree tropical_degree(const Config& c, std::uint64_t seed)
{
    if (!c.tropical) bad("tropical", "missing section");
    return parse_tropical(*c.tropical, seed);
}

Result cmd_tropical(const Config& c, const Options&)
{
    const TropicalDegree deg = tropical_degree(c, c.seed);
    const QCoeff refined = certified_count([&](std::uint64_t sd) { return tropical_degree(c, sd); }, c.seed);
    const auto curves = enumerate_rigid_curves(deg);
    Result r;
    r.json["command"] = "tropical";
    r.json["window"] = "exact";
    r.json["curves"] = curves.size();
    r.json["refined"] = refined.str();
    r.json["classical"] = classical_count(deg).get_str();
    Json list = Json::array();
    Table t{{"curve", "vertices", "multiplicity"}, {}};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        list.push_back(curve_json(curves[i]));
        t.rows.push_back({std::to_string(i), std::to_string(curves[i].vertices.size()), curves[i].multiplicity.str()});
    }
    t.rows.push_back({"total", "", refined.str()});
    r.json["curve_list"] = list;
    r.tables.emplace_back("rigid tropical curves (exact)", t);
    return r;
}

Result cmd_verify(const Config& c, const Options& opt)
{
    need_theta(c);
    Result r;
    r.json["command"] = "verify";
    r.json["seed"] = c.seed;
    Json checks = Json::array();
    Table t{{"check", "window", "result", "detail"}, {}};
    auto record = [&](const std::string& name, Json window_j, const std::string& wstr, bool pass, Json detail, const std::string& dstr) {
        Json j;
        j["check"] = name;
        j["window"] = std::move(window_j);
        j["pass"] = pass;
        j["detail"] = std::move(detail);
        checks.push_back(j);
        t.rows.push_back({name, wstr, pass ? "PASS" : "FAIL", dstr});
        if (!pass) r.status = kVerifyFailed;
    };

    {
        const auto d = diagram(c, opt, true);
        const auto rep = ray_curve_check(d);
        Json entries = Json::array();
        for (const auto& e : rep.entries) {
            Json x;
            x["wall"] = e.wall == static_cast<std::size_t>(-1) ? Json(nullptr) : Json(e.wall);
            x["exponent"] = to_string(e.exponent);
            x["actual"] = e.actual.str();
            x["expected"] = e.expected.str();
            x["curves"] = e.curves;
            x["pass"] = e.pass();
            entries.push_back(x);
        }
        record("ray_curve_bijection", window(c.N), window_str(c.N), rep.pass(), entries,
               std::to_string(rep.term_count) + " ray terms, " + std::to_string(rep.curve_count) + " curves");
    }
    {
        const auto rep = scatter_to_tropical_check(c.m, c.theta, c.N, c.seed);
        Json terms = Json::array();
        std::size_t nonzero = 0;
        for (const auto& tc : rep.terms) {
            Json x;
            x["p"] = profile_str(tc.p);
            x["bracket"] = tc.lhs.str();
            x["tropical"] = tc.rhs.str();
            x["pass"] = tc.pass();
            terms.push_back(x);
            if (!tc.lhs.is_zero() || !tc.rhs.is_zero()) ++nonzero;
        }
        record("scatter_to_tropical", window(c.N), window_str(c.N), rep.pass(), terms,
               std::to_string(rep.terms.size()) + " profiles, " + std::to_string(nonzero) + " nonzero, Q = " + to_string(rep.Q));
    }
    {
        const auto a = theorem_a_rhs(c.m, c.theta, c.N, c.K, c.seed);
        const auto b = gw_to_toric_assembly(c.m, c.theta, c.N, c.K, c.seed);
        bool all = true;
        Json cells = Json::array();
        for (const auto& sc : compare_predictions(a, b)) {
            Json x;
            x["p"] = profile_str(sc.p);
            x["broken_lines"] = sc.a.str();
            x["assembly"] = sc.b.str();
            x["pass"] = sc.pass();
            all = all && sc.pass();
            cells.push_back(x);
        }
        record("pipeline_agreement", window(c.N, c.K), window_str(c.N, c.K), all, cells, std::to_string(a.series.size()) + " profiles");
        record("parity_reality", window(c.N, c.K), window_str(c.N, c.K), a.shape_ok() && b.shape_ok(), Json::object(),
               "even powers, real coefficients");
    }
    r.json["checks"] = checks;
    r.json["pass"] = r.status == kPass;
    r.tables.emplace_back("verification", t);
    return r;
}

Result cmd_predict(const Config& c, const Options&)
{
    need_theta(c);
    const auto g = theorem_a_rhs(c.m, c.theta, c.N, c.K, c.seed);
    Result r;
    r.json["command"] = "predict";
    r.json["window"] = window(c.N, c.K);
    Json cells = Json::array();
    Table t{{"p", "g", "window", "N_g"}, {}};
    for (const auto& [p, s] : g.series) {
        for (int k = 0; k <= c.K; k += 2) {
            const Gauss& v = s.at(k);
            if (v.is_zero()) continue;
            Json x;
            x["p"] = profile_str(p);
            x["g"] = k / 2;
            x["value"] = gauss_str(v);
            x["window"] = window(c.N, c.K);
            cells.push_back(x);
            t.rows.push_back({profile_str(p), std::to_string(k / 2), window_str(c.N, c.K), gauss_str(v)});
        }
    }
    r.json["cells"] = cells;
    r.tables.emplace_back("predicted invariants (coefficient of u^{2g})", t);
    return r;
}

Result cmd_plot(const Config& c, const Options& opt)
{
    Result r;
    r.json["command"] = "plot";
    Json figures = Json::array();
    const auto d = diagram(c, opt, c.factored);
    {
        svg::Canvas canvas;
        svg::draw_diagram(canvas, d);
        r.files.emplace_back("diagram.svg", canvas.str());
        Json f;
        f["file"] = "diagram.svg";
        f["walls"] = d.walls.size();
        f["added_rays"] = d.added_count();
        f["window"] = window(c.N);
        figures.push_back(f);
    }
    if (!c.factored && c.theta.size() >= 1) {
        const RatVec2 Q = sample_endpoint(d, c.seed);
        std::vector<BrokenLine> tuple;
        for (Vec2 v : c.theta) {
            const auto lines = enumerate_broken_lines(d, v, Q);
            if (!lines.empty()) tuple.push_back(lines.back());
        }
        svg::Canvas canvas;
        svg::draw_diagram(canvas, d);
        svg::draw_broken_lines(canvas, tuple);
        r.files.emplace_back("broken_lines.svg", canvas.str());
        Json f;
        f["file"] = "broken_lines.svg";
        f["Q"] = to_string(Q);
        f["broken_lines"] = tuple.size();
        figures.push_back(f);
    }
    if (c.tropical) {
        const TropicalDegree deg = tropical_degree(c, c.seed);
        const auto curves = enumerate_rigid_curves(deg);
        for (std::size_t i = 0; i < curves.size(); ++i) {
            svg::Canvas canvas;
            svg::draw_curve(canvas, curves[i], deg);
            const std::string name = "curve_" + std::to_string(i) + ".svg";
            r.files.emplace_back(name, canvas.str());
            Json f;
            f["file"] = name;
            f["multiplicity"] = curves[i].multiplicity.str();
            figures.push_back(f);
        }
    }
    r.json["figures"] = figures;
    Table t{{"file"}, {}};
    for (const auto& [name, body] : r.files) t.rows.push_back({name});
    r.tables.emplace_back("figures", t);
    return r;
}

std::string render(const Result& r, const std::string& format)
{
    if (format == "json") return r.json.dump(2) + "\n";
    std::string out;
    for (const auto& [title, t] : r.tables) out += "# " + title + "\n" + t.str();
    return out;
}

int run(const std::string& command, const Options& opt)
{
    const Config c = load_config(opt);
    Result r;
    if (command == "scatter") r = cmd_scatter(c, opt);
    else if (command == "theta") r = cmd_theta(c, opt);
    else if (command == "bracket") r = cmd_bracket(c, opt);
    else if (command == "tropical") r = cmd_tropical(c, opt);
    else if (command == "verify") r = cmd_verify(c, opt);
    else if (command == "predict") r = cmd_predict(c, opt);
    else r = cmd_plot(c, opt);

    const std::string text = render(r, opt.format);
    if (opt.out.empty()) {
        if (!r.files.empty()) throw ConfigError("plot needs --out DIR");
        std::cout << text;
        return r.status;
    }
    std::filesystem::create_directories(opt.out);
    const std::filesystem::path dir(opt.out);
    std::ofstream(dir / (command + (opt.format == "json" ? ".json" : ".txt"))) << text;
    for (const auto& [name, body] : r.files) std::ofstream(dir / name) << body;
    std::cout << text;
    return r.status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"quantum scattering, broken lines and refined tropical counts"};
    app.require_subcommand(1);
    Options opt;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"scatter", "build and complete a scattering diagram"},
        {"theta", "theta functions at a sampled point Q"},
        {"bracket", "bracket by broken-line tuples, by product, and symmetrized"},
        {"tropical", "refined count of rigid tropical curves"},
        {"verify", "ray/curve bijection, scatter-to-tropical identity, pipeline agreement"},
        {"predict", "predicted invariants per multiplicity profile"},
        {"plot", "SVG figures of the diagram, broken lines and curves"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "instance config (JSON)")->required();
        sub->add_option("--seed", opt.seed, "seed for offsets and sample points");
        sub->add_option("--order-t", opt.order_t, "t-order cap N");
        sub->add_option("--order-u", opt.order_u, "u-order cap K");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--format", opt.format, "json or table")->check(CLI::IsMember({"json", "table"}));
        sub->add_flag("--override-guardrail", opt.override_guardrail, "allow n*N above the desk-scale limit");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PerturbRequired& e) {
        std::cerr << "genericity failure: " << e.what() << "\nperturb the configuration or re-run with a different --seed\n";
        return kPerturb;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerifyFailed;
    }
}
