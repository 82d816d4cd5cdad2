#include "degwave/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace degwave {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_quotes(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

double to_number(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ModelError("model file: key '" + key + "' has a non-numeric value '" + v + "'");
    }
}

void parse_table(const std::string& key, const std::string& v,
                 std::vector<double>& us, std::vector<double>& vs) {
    std::stringstream ss(strip_quotes(v));
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        pair = trim(pair);
        if (pair.empty()) continue;
        std::size_t colon = pair.find(':');
        if (colon == std::string::npos)
            throw ModelError("model file: table entry '" + pair + "' in '" + key +
                             "' is not u:v");
        us.push_back(to_number(key, trim(pair.substr(0, colon))));
        vs.push_back(to_number(key, trim(pair.substr(colon + 1))));
    }
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

KineticsSpec parse_model_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelError("model file: line " + std::to_string(lineno) +
                             " is not 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (kv.count(key))
            throw ModelError("model file: duplicate key '" + key + "'");
        kv[key] = val;
    }

    static const char* known[] = {"m", "D", "r",
                                  "birth.kind", "birth.p", "birth.a", "birth.q",
                                  "birth.gamma", "birth.r", "birth.table",
                                  "death.kind", "death.delta", "death.k", "death.table"};
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* name : known)
            if (k == name) { ok = true; break; }
        if (!ok) throw ModelError("model file: unknown key '" + k + "'");
    }

    auto require = [&](const char* k) -> std::string {
        auto it = kv.find(k);
        if (it == kv.end())
            throw ModelError(std::string("model file: missing key '") + k + "'");
        return it->second;
    };
    auto num_or = [&](const char* k, double dflt) {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : to_number(k, it->second);
    };

    double m = to_number("m", require("m"));
    double D = to_number("D", require("D"));
    double r = to_number("r", require("r"));

    BirthLaw birth;
    std::string bkind = lower(strip_quotes(require("birth.kind")));
    if (bkind == "nicholson") {
        birth = BirthLaw::nicholson(to_number("birth.p", require("birth.p")),
                                    to_number("birth.a", require("birth.a")),
                                    num_or("birth.q", 1.0));
    } else if (bkind == "mackeyglass") {
        birth = BirthLaw::mackey_glass(to_number("birth.p", require("birth.p")),
                                       to_number("birth.a", require("birth.a")),
                                       num_or("birth.q", 1.0));
    } else if (bkind == "agestructured") {
        birth = BirthLaw::age_structured(to_number("birth.p", require("birth.p")),
                                         to_number("birth.gamma", require("birth.gamma")),
                                         num_or("birth.r", r));
    } else if (bkind == "linear") {
        birth = BirthLaw::linear(to_number("birth.p", require("birth.p")));
    } else if (bkind == "tabulated") {
        std::vector<double> us, vs;
        parse_table("birth.table", require("birth.table"), us, vs);
        birth = BirthLaw::tabulated(std::move(us), std::move(vs));
    } else {
        throw ModelError("model file: unknown birth.kind '" + bkind + "'");
    }

    DeathLaw dl;
    std::string dkind = lower(strip_quotes(require("death.kind")));
    if (dkind == "linear") {
        dl = DeathLaw::linear(to_number("death.delta", require("death.delta")));
    } else if (dkind == "quadratic") {
        dl = DeathLaw::quadratic(to_number("death.delta", require("death.delta")));
    } else if (dkind == "power") {
        dl = DeathLaw::power(to_number("death.delta", require("death.delta")),
                             to_number("death.k", require("death.k")));
    } else if (dkind == "tabulated") {
        std::vector<double> us, vs;
        parse_table("death.table", require("death.table"), us, vs);
        dl = DeathLaw::tabulated(std::move(us), std::move(vs));
    } else {
        throw ModelError("model file: unknown death.kind '" + dkind + "'");
    }

    return make_spec(m, D, r, std::move(birth), std::move(dl));
}

KineticsSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_text(ss.str());
}

std::string model_to_text(const KineticsSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "m = " << spec.m << "\n";
    os << "D = " << spec.diffusivity << "\n";
    os << "r = " << spec.delay << "\n";
    switch (spec.birth.kind) {
        case BirthKind::Nicholson:
            os << "birth.kind = nicholson\n"
               << "birth.p = " << spec.birth.p << "\nbirth.a = " << spec.birth.a
               << "\nbirth.q = " << spec.birth.q << "\n";
            break;
        case BirthKind::MackeyGlass:
            os << "birth.kind = mackeyglass\n"
               << "birth.p = " << spec.birth.p << "\nbirth.a = " << spec.birth.a
               << "\nbirth.q = " << spec.birth.q << "\n";
            break;
        case BirthKind::AgeStructured:
            os << "birth.kind = agestructured\n"
               << "birth.p = " << spec.birth.p << "\nbirth.gamma = " << spec.birth.gamma
               << "\nbirth.r = " << spec.birth.age_r << "\n";
            break;
        case BirthKind::Linear:
            os << "birth.kind = linear\nbirth.p = " << spec.birth.p << "\n";
            break;
        case BirthKind::Tabulated: {
            os << "birth.kind = tabulated\nbirth.table = \"";
            for (std::size_t i = 0; i < spec.birth.table_u.size(); ++i) {
                if (i) os << ", ";
                os << spec.birth.table_u[i] << ":" << spec.birth.table_v[i];
            }
            os << "\"\n";
            break;
        }
    }
    switch (spec.death.kind) {
        case DeathKind::Linear:
            os << "death.kind = linear\ndeath.delta = " << spec.death.delta << "\n";
            break;
        case DeathKind::Quadratic:
            os << "death.kind = quadratic\ndeath.delta = " << spec.death.delta << "\n";
            break;
        case DeathKind::Power:
            os << "death.kind = power\ndeath.delta = " << spec.death.delta
               << "\ndeath.k = " << spec.death.k << "\n";
            break;
        case DeathKind::Tabulated: {
            os << "death.kind = tabulated\ndeath.table = \"";
            for (std::size_t i = 0; i < spec.death.table_u.size(); ++i) {
                if (i) os << ", ";
                os << spec.death.table_u[i] << ":" << spec.death.table_v[i];
            }
            os << "\"\n";
            break;
        }
    }
    return os.str();
}

} // namespace degwave
