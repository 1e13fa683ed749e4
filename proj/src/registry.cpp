#include "padicfrob/connections.hpp"
#include "padicfrob/satake.hpp"

#include <json.hpp>

#include <map>
#include <regex>

namespace padicfrob {

namespace {

using json = nlohmann::json;

RationalMatrix mat(std::size_t n, std::initializer_list<long> e) { return rational_matrix(n, n, e); }

std::vector<std::pair<int, int>> betti_of(const std::vector<int>& degrees) {
    std::map<int, int> counts;
    for (int d : degrees) ++counts[d];
    return {counts.begin(), counts.end()};
}

Connection assemble(std::string name, std::vector<RationalMatrix> A, std::vector<int> degrees, int dim_c,
                    const CohomologyRing* ring, const ChernCharacterData* chern) {
    Connection c;
    c.name = std::move(name);
    c.rank = A.front().rows();
    c.A = std::move(A);
    c.degrees = std::move(degrees);
    c.dim_c = dim_c;
    c.betti = betti_of(c.degrees);
    if (ring) c.gamma_decomposition = gamma_basis_terms(*ring, *chern);
    return c;
}

RingElement element(std::initializer_list<long> coords, long den = 1) {
    RingElement e;
    for (long x : coords) e.emplace_back(x, den);
    for (auto& x : e) x.canonicalize();
    return e;
}

// Product table from a rule on basis pairs.
template <typename F>
std::vector<std::vector<RingElement>> table(std::size_t n, F rule) {
    std::vector<std::vector<RingElement>> s(n, std::vector<RingElement>(n, RingElement(n, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i][j] = rule(i, j);
    return s;
}

std::pair<CohomologyRing, ChernCharacterData> cubic_ring() {
    // {1, c1, pt}, c1^2 = 3 pt
    auto s = table(3, [](std::size_t i, std::size_t j) {
        RingElement e(3, 0);
        if (i == 0) e[j] = 1;
        else if (j == 0) e[i] = 1;
        else if (i == 1 && j == 1) e[2] = 3;
        return e;
    });
    auto r = make_ring({"1", "c1", "pt"}, {0, 2, 4}, 2, 0, s);
    ChernCharacterData ch;
    ch.odd[1] = element({0, 1, 0});
    return {r, ch};
}

std::pair<CohomologyRing, ChernCharacterData> f1_ring() {
    // {1, E, F, pt}: E^2 = -pt, EF = pt, F^2 = 0
    auto s = table(4, [](std::size_t i, std::size_t j) {
        RingElement e(4, 0);
        if (i == 0) e[j] = 1;
        else if (j == 0) e[i] = 1;
        else if (i == 1 && j == 1) e[3] = -1;
        else if ((i == 1 && j == 2) || (i == 2 && j == 1)) e[3] = 1;
        return e;
    });
    auto r = make_ring({"1", "E", "F", "pt"}, {0, 2, 2, 4}, 2, 0, s);
    ChernCharacterData ch;
    ch.odd[1] = element({0, 2, 3, 0});
    return {r, ch};
}

std::pair<CohomologyRing, ChernCharacterData> quadrics_ring() {
    // {1, x, x^2/4, x^3/4}: x*x = 4 e2, x*e2 = e3
    auto s = table(4, [](std::size_t i, std::size_t j) {
        RingElement e(4, 0);
        if (i == 0) e[j] = 1;
        else if (j == 0) e[i] = 1;
        else if (i == 1 && j == 1) e[2] = 4;
        else if ((i == 1 && j == 2) || (i == 2 && j == 1)) e[3] = 1;
        return e;
    });
    auto r = make_ring({"1", "x", "x^2/4", "x^3/4"}, {0, 2, 4, 6}, 3, 0, s);
    // c1 = 2x, c2 = 3x^2 = 12 e2
    return {r, odd_chern_character(r, {element({0, 2, 0, 0}), element({0, 0, 12, 0})})};
}

std::pair<CohomologyRing, ChernCharacterData> twistor_simple_ring() {
    auto r = truncated_polynomial_ring(3);
    r.labels = {"y", "y c", "y c^2", "y c^3"};
    ChernCharacterData ch;
    ch.odd[1] = element({0, 1, 0, 0});
    ch.odd[3] = element({0, 0, 0, 1}, 6);
    return {r, ch};
}

std::pair<CohomologyRing, ChernCharacterData> twistor_big_ring() {
    // basis c^a (a < 4) then E c^a; c^4 = 8 E c, E^2 = 0, where E = -e(TB)
    auto s = table(8, [](std::size_t i, std::size_t j) {
        RingElement e(8, 0);
        const std::size_t ei = i / 4, ej = j / 4;
        if (ei + ej >= 2) return e;
        std::size_t a = i % 4 + j % 4;
        std::size_t E = ei + ej;
        mpq_class coeff = 1;
        if (a >= 4) {
            if (E == 1) return e;  // E c^4 = 8 E^2 c = 0
            a -= 3;
            E = 1;
            coeff = 8;
        }
        e[4 * E + a] = coeff;
        return e;
    });
    auto r = make_ring({"1", "c", "c^2", "c^3", "E", "E c", "E c^2", "E c^3"}, {0, 2, 4, 6, 6, 8, 10, 12}, 6, 0, s);
    ChernCharacterData ch;
    ch.odd[1] = element({0, 1, 0, 0, 0, 0, 0, 0});
    RingElement ch3 = element({0, 0, 0, 1, 0, 0, 0, 0}, 6);
    ch3[4] = -1;
    ch.odd[3] = ch3;
    RingElement ch5(8, 0);
    ch5[6] = mpq_class(-7, 120);
    ch.odd[5] = ch5;
    return {r, ch};
}

struct ParsedName {
    std::string base;
    std::vector<long> args;
};

ParsedName parse_name(const std::string& name) {
    static const std::regex with_args(R"(^([a-z0-9-]+?)\((-?\d+)(?:,\s*(-?\d+))?\)$)");
    static const std::regex cp_short(R"(^cp(\d+)$)");
    std::smatch m;
    if (std::regex_match(name, m, with_args)) {
        ParsedName p{m[1], {std::stol(m[2])}};
        if (m[3].matched) p.args.push_back(std::stol(m[3]));
        return p;
    }
    if (name != "cp1" && std::regex_match(name, m, cp_short)) return {"cp", {std::stol(m[1])}};
    return {name, {}};
}

std::optional<std::pair<CohomologyRing, ChernCharacterData>> ring_for(const ParsedName& n) {
    if (n.base == "cubic-surface") return cubic_ring();
    if (n.base == "f1") return f1_ring();
    if (n.base == "two-quadrics") return quadrics_ring();
    if (n.base == "twistor-simple") return twistor_simple_ring();
    if (n.base == "twistor-big") return twistor_big_ring();
    if (n.base == "cp1" || (n.base == "cp" && n.args.size() == 1)) {
        const int N = n.base == "cp1" ? 2 : static_cast<int>(n.args[0]);
        auto r = truncated_polynomial_ring(N - 1);
        ChernCharacterData ch;
        mpz_class fact = 1;
        for (int m = 1; m < N; ++m) {
            fact *= m;
            if (m % 2 == 0) continue;
            RingElement e = r.zero();
            e[static_cast<std::size_t>(m)] = mpq_class(N) / mpq_class(fact);
            ch.odd[m] = e;
        }
        return std::make_pair(r, ch);
    }
    if ((n.base == "grassmannian" || n.base == "gr") && n.args.size() == 2) {
        return grassmannian_ring(static_cast<int>(n.args[0]), static_cast<int>(n.args[1]));
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"cp1",           "cp(N)",      "cubic-surface",    "f1",       "two-quadrics", "twistor-simple(d)",
            "twistor-big",   "grassmannian(k,N)", "dwork(c)"};
}

std::optional<std::pair<CohomologyRing, ChernCharacterData>> builtin_ring(const std::string& name) {
    return ring_for(parse_name(name));
}

Connection builtin(const std::string& name) {
    const ParsedName n = parse_name(name);
    if (n.base == "cp1") {
        Connection c = twisted_cp_connection(2, 1);
        c.name = "cp1";
        return c;
    }
    if (n.base == "cp" && n.args.size() == 1) {
        if (n.args[0] < 2) throw std::invalid_argument("cp(N) needs N >= 2");
        return twisted_cp_connection(static_cast<int>(n.args[0]), 1);
    }
    if (n.base == "cubic-surface") {
        auto [r, ch] = cubic_ring();
        std::vector<RationalMatrix> A{mat(3, {0, 0, 0, 1, 0, 0, 0, 3, 0}), mat(3, {0, 0, 0, 0, 9, 0, 0, 0, 0}),
                                      mat(3, {0, 108, 0, 0, 0, 36, 0, 0, 0}), mat(3, {0, 0, 252, 0, 0, 0, 0, 0, 0})};
        return assemble("cubic-surface", A, r.degrees, 2, &r, &ch);
    }
    if (n.base == "f1") {
        auto [r, ch] = f1_ring();
        std::vector<RationalMatrix> A{
            mat(4, {0, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 0, 1, 2, 0}),
            mat(4, {0, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
            mat(4, {0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0}),
            mat(4, {0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
        };
        return assemble("f1", A, r.degrees, 2, &r, &ch);
    }
    if (n.base == "two-quadrics") {
        auto [r, ch] = quadrics_ring();
        std::vector<RationalMatrix> A{
            mat(4, {0, 0, 0, 0, 2, 0, 0, 0, 0, 8, 0, 0, 0, 0, 2, 0}),
            RationalMatrix(4, 4),
            mat(4, {0, 8, 0, 0, 0, 0, 4, 0, 0, 0, 0, 8, 0, 0, 0, 0}),
            RationalMatrix(4, 4),
            mat(4, {0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
        };
        return assemble("two-quadrics", A, r.degrees, 3, &r, &ch);
    }
    if (n.base == "twistor-simple") {
        const long d = n.args.empty() ? 0 : n.args[0];
        if (n.args.size() > 1 || d < 0 || d % 2 != 0) throw std::invalid_argument("twistor-simple(d) needs even d >= 0");
        auto [r, ch] = twistor_simple_ring();
        std::vector<RationalMatrix> A{
            mat(4, {0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0}),
            RationalMatrix(4, 4),
            mat(4, {0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0}),
        };
        std::vector<int> degrees;
        for (int i = 0; i < 4; ++i) degrees.push_back(static_cast<int>(d) + 2 * i);
        return assemble("twistor-simple(" + std::to_string(d) + ")", A, degrees, 6, &r, &ch);
    }
    if (n.base == "twistor-big") {
        auto [r, ch] = twistor_big_ring();
        RationalMatrix A0(8, 8), A2(8, 8);
        for (std::size_t b : {0u, 4u}) {
            A0(b + 1, b + 0) = 1;
            A0(b + 2, b + 1) = 1;
            A0(b + 3, b + 2) = 1;
            A2(b + 0, b + 1) = 4;
            A2(b + 2, b + 3) = 4;
        }
        A0(5, 3) = 8;
        return assemble("twistor-big", {A0, RationalMatrix(8, 8), A2}, r.degrees, 6, &r, &ch);
    }
    if ((n.base == "grassmannian" || n.base == "gr") && n.args.size() == 2) {
        return grassmannian_connection(static_cast<int>(n.args[0]), static_cast<int>(n.args[1]));
    }
    if (n.base == "dwork" && n.args.size() == 1) {
        Connection c;
        c.name = "dwork(" + std::to_string(n.args[0]) + ")";
        c.rank = 1;
        c.A = {RationalMatrix(1, 1), rational_matrix(1, 1, {-n.args[0]})};
        c.degrees = {0};
        c.dim_c = 0;
        c.betti = {{0, 1}};
        c.gamma_decomposition = {GammaBasisTerm{GammaPoly(mpq_class(1)), rational_identity(1)}};
        return c;
    }
    throw std::invalid_argument("unknown connection '" + name + "'");
}

// ---------------------------------------------------------------------------------------------
// Connection files

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& doc, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < doc.size(); ++i) {
        if (doc[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    return j.at(key);
}

mpq_class rational_field(const json& v, const std::string& where) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (!v.is_string()) throw ValidationError(where + ": expected a rational string");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

RationalMatrix matrix_field(const json& v, std::size_t r, const std::string& where) {
    if (!v.is_array()) throw ValidationError(where + ": expected an array of entries");
    if (v.size() != r * r) {
        throw ValidationError("dimension mismatch: " + where + " has " + std::to_string(v.size()) +
                              " entries, expected " + std::to_string(r * r));
    }
    RationalMatrix m(r, r);
    for (std::size_t k = 0; k < v.size(); ++k) m.entries()[k] = rational_field(v[k], where + "[" + std::to_string(k) + "]");
    return m;
}

json matrix_json(const RationalMatrix& m) {
    json a = json::array();
    for (const auto& x : m.entries()) a.push_back(rational_to_string(x));
    return a;
}

}  // namespace

Connection parse_connection(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(document, e.byte == 0 ? 0 : e.byte - 1);
        throw ValidationError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                              e.what());
    }
    if (!j.is_object()) throw ValidationError("document must be an object");
    Connection c;
    try {
        c.name = field(j, "name").get<std::string>();
        const long rank = field(j, "rank").get<long>();
        if (rank <= 0) throw ValidationError("rank must be positive");
        c.rank = static_cast<std::size_t>(rank);
        const std::string convention = field(j, "convention").get<std::string>();
        if (convention != "q-ddq" && convention != "ddq") {
            throw ValidationError("convention must be \"q-ddq\" or \"ddq\", got \"" + convention + "\"");
        }
        const int shift = convention == "ddq" ? 1 : 0;
        std::map<long, RationalMatrix> coeffs;
        const json& ms = field(j, "matrices");
        if (!ms.is_array() || ms.empty()) throw ValidationError("matrices must be a nonempty array");
        for (std::size_t k = 0; k < ms.size(); ++k) {
            const std::string where = "matrices[" + std::to_string(k) + "]";
            const long power = field(ms[k], "power").get<long>();
            if (power < -shift) {
                throw ValidationError(where + ": power " + std::to_string(power) + " not allowed under convention " +
                                      convention);
            }
            RationalMatrix m = matrix_field(field(ms[k], "entries"), c.rank, where + ".entries");
            auto [it, fresh] = coeffs.emplace(power + shift, m);
            if (!fresh) it->second += m;
        }
        const long top = coeffs.rbegin()->first;
        c.A.assign(static_cast<std::size_t>(top) + 1, RationalMatrix(c.rank, c.rank));
        for (auto& [e, m] : coeffs) c.A[static_cast<std::size_t>(e)] = m;
        c.degrees = field(j, "degrees").get<std::vector<int>>();
        c.dim_c = field(j, "dim_c").get<int>();
        for (const auto& b : field(j, "betti")) {
            if (!b.is_array() || b.size() != 2) throw ValidationError("betti entries must be [degree, rank] pairs");
            c.betti.emplace_back(b[0].get<int>(), b[1].get<int>());
        }
        if (j.contains("gamma_decomposition")) {
            const json& gd = j.at("gamma_decomposition");
            for (std::size_t k = 0; k < gd.size(); ++k) {
                const std::string where = "gamma_decomposition[" + std::to_string(k) + "]";
                GammaBasisTerm t;
                for (const auto& term : field(gd[k], "poly")) {
                    GammaMonomial mono;
                    for (const auto& [order, e] : field(term, "exponents").items()) {
                        const int o = std::stoi(order);
                        if (o <= 0 || o % 2 == 0) throw ValidationError(where + ": exponent keys must be odd orders");
                        mono[o] = e.get<int>();
                    }
                    t.poly.add_term(mono, rational_field(field(term, "coeff"), where + ".coeff"));
                }
                t.cup = matrix_field(field(gd[k], "matrix"), c.rank, where + ".matrix");
                c.gamma_decomposition.push_back(std::move(t));
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed field: ") + e.what());
    }
    validate_connection(c);
    return c;
}

std::string serialize_connection(const Connection& c) {
    json j;
    j["name"] = c.name;
    j["rank"] = c.rank;
    j["convention"] = "q-ddq";
    json ms = json::array();
    for (std::size_t e = 0; e < c.A.size(); ++e) {
        if (e > 0 && c.A[e].is_zero_matrix()) continue;
        ms.push_back({{"power", e}, {"entries", matrix_json(c.A[e])}});
    }
    j["matrices"] = ms;
    j["degrees"] = c.degrees;
    j["dim_c"] = c.dim_c;
    json betti = json::array();
    for (auto [d, r] : c.betti) betti.push_back({d, r});
    j["betti"] = betti;
    if (!c.gamma_decomposition.empty()) {
        json gd = json::array();
        for (const auto& t : c.gamma_decomposition) {
            json poly = json::array();
            for (const auto& [mono, coeff] : t.poly.terms()) {
                json ex = json::object();
                for (const auto& [order, e] : mono) ex[std::to_string(order)] = e;
                poly.push_back({{"coeff", rational_to_string(coeff)}, {"exponents", ex}});
            }
            gd.push_back({{"poly", poly}, {"matrix", matrix_json(t.cup)}});
        }
        j["gamma_decomposition"] = gd;
    }
    return j.dump(2) + "\n";
}

}  // namespace padicfrob
