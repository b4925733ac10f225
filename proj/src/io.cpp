#include "cylres/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cylres {

namespace {

CVectorXd read_values(const Json& mode, Eigen::Index expected) {
    const auto& re = mode.at("re");
    if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != expected)
        throw std::invalid_argument("load_potential: mode " + mode.at("m").dump() + " needs " +
                                    std::to_string(expected) + " values");
    CVectorXd v(expected);
    const bool has_im = mode.contains("im");
    if (has_im && mode.at("im").size() != re.size())
        throw std::invalid_argument("load_potential: re/im length mismatch");
    for (Eigen::Index i = 0; i < expected; ++i) {
        const auto k = static_cast<std::size_t>(i);
        v[i] = Complex(re[k].get<double>(), has_im ? mode.at("im")[k].get<double>() : 0.0);
    }
    return v;
}

CylinderPotential builtin(const std::string& name, const Json& params) {
    if (name == "example10") return example10();
    if (name == "well_bump")
        return well_bump(params.value("depth", 6.0), params.value("bumpscale", 1.0), params.value("grid_n", 512));
    if (name == "zero") return zero_potential(params.value("half_width", 1.0));
    throw std::invalid_argument("load_potential: unknown builtin '" + name + "'");
}

}  // namespace

std::vector<std::string> builtin_potentials() { return {"example10", "well_bump", "zero"}; }

CylinderPotential load_potential(const Json& spec) {
    if (spec.is_string()) return builtin(spec.get<std::string>(), Json::object());
    if (!spec.is_object()) throw std::invalid_argument("load_potential: expected a name or an object");
    if (spec.contains("builtin")) return builtin(spec.at("builtin").get<std::string>(), spec);

    const auto support = spec.at("support");
    if (!support.is_array() || support.size() != 2)
        throw std::invalid_argument("load_potential: support must be [a, b]");
    const double a = support[0].get<double>(), b = support[1].get<double>();
    if (!(a < b)) throw std::invalid_argument("load_potential: support must satisfy a < b");
    const int n = spec.at("grid_n").get<int>();
    if (n < 1) throw std::invalid_argument("load_potential: grid_n must be >= 1");
    const std::string kind = spec.value("kind", "sampled");
    if (kind != "sampled" && kind != "step") throw std::invalid_argument("load_potential: kind must be sampled or step");

    std::map<int, ModeProfile> modes;
    for (const auto& m : spec.at("modes")) {
        const int k = m.at("m").get<int>();
        if (modes.count(k)) throw std::invalid_argument("load_potential: duplicate mode " + std::to_string(k));
        if (kind == "step") {
            std::vector<double> bps(static_cast<std::size_t>(n) + 1);
            for (int i = 0; i <= n; ++i) bps[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
            bps.back() = b;
            modes.emplace(k, ModeProfile::step(std::move(bps), read_values(m, n)));
        } else {
            modes.emplace(k, ModeProfile::sampled(a, b, read_values(m, n + 1)));
        }
    }
    return CylinderPotential(std::move(modes), spec.value("real", false), spec.value("real_tol", 1e-12));
}

CylinderPotential load_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_potential_file: cannot open " + path);
    return load_potential(Json::parse(in));
}

Json potential_to_json(const CylinderPotential& pot) {
    Json out;
    if (pot.modes().empty()) throw std::invalid_argument("potential_to_json: no modes");
    const ModeProfile& first = pot.modes().begin()->second;
    out["support"] = {first.x_min(), first.x_max()};
    out["grid_n"] = first.intervals();
    out["kind"] = first.is_step() ? "step" : "sampled";
    out["real"] = pot.is_real();
    out["modes"] = Json::array();
    for (const auto& [k, p] : pot.modes()) {
        if (p.kind() != first.kind() || p.x_min() != first.x_min() || p.x_max() != first.x_max() ||
            p.intervals() != first.intervals())
            throw std::invalid_argument("potential_to_json: modes must share one grid");
        Json m;
        m["m"] = k;
        std::vector<double> re, im;
        for (Eigen::Index i = 0; i < p.values().size(); ++i) {
            re.push_back(p.values()[i].real());
            im.push_back(p.values()[i].imag());
        }
        m["re"] = re;
        m["im"] = im;
        out["modes"].push_back(m);
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), columns_(header.size()) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw std::invalid_argument("CsvWriter: wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os_ << ',';
        os_ << csv_escape(fields[i]);
    }
    os_ << "\r\n";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace cylres
