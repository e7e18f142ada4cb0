#include "cgloop/series_io.hpp"

#include <cstdio>
#include <sstream>

namespace cgloop {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

nlohmann::json encode(const Rational& r) { return to_string(r); }
nlohmann::json encode(double x) { return x; }

std::string cell(const Rational& r) { return to_string(r); }
std::string cell(double x) { return format_double(x); }

Rational decode_exact(const nlohmann::json& j) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    throw DomainError("exact series entries must be \"p/q\" strings or integers");
}

double decode_float(const nlohmann::json& j) {
    if (!j.is_number())
        throw DomainError("floating series entries must be numbers");
    return j.get<double>();
}

} // namespace

nlohmann::json to_json(const GenSeries& s) {
    return s.visit([&](const auto& x) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : x)
            terms.push_back({{"exponent", encode(t.exponent)}, {"coefficient", encode(t.coefficient)}});
        return nlohmann::json{{"backend", to_string(s.backend())}, {"cutoff", encode(x.cutoff())}, {"terms", terms}};
    });
}

GenSeries series_from_json(const nlohmann::json& j) {
    try {
        const Backend backend = parse_backend(j.at("backend").get<std::string>());
        if (backend == Backend::exact) {
            std::vector<Term<Rational>> terms;
            for (const auto& t : j.at("terms"))
                terms.push_back({decode_exact(t.at("exponent")), decode_exact(t.at("coefficient"))});
            return ExactSeries(std::move(terms), decode_exact(j.at("cutoff")));
        }
        std::vector<Term<double>> terms;
        for (const auto& t : j.at("terms"))
            terms.push_back({decode_float(t.at("exponent")), decode_float(t.at("coefficient"))});
        return FloatSeries(std::move(terms), decode_float(j.at("cutoff")));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed series JSON: ") + e.what());
    }
}

std::string to_csv(const GenSeries& s) {
    std::ostringstream os;
    os << "exponent,coefficient\n";
    s.visit([&](const auto& x) {
        for (const auto& t : x)
            os << cell(t.exponent) << ',' << cell(t.coefficient) << '\n';
        return 0;
    });
    return os.str();
}

} // namespace cgloop
