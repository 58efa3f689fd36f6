#include "hitchin/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hitchin {

using nlohmann::json;

std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_complex(cplx z) {
    std::string re = format_real(z.real());
    std::string im = format_real(z.imag());
    if (im.front() != '-') im = "+" + im;
    return re + im + "j";
}

namespace {

double parse_real(const std::string &s, const std::string &whole) {
    double v = 0.0;
    const char *b = s.data();
    const char *e = s.data() + s.size();
    if (!s.empty() && *b == '+') ++b;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || b == e)
        throw DomainError("cannot parse complex number '" + whole + "'");
    return v;
}

} // namespace

cplx parse_complex(const std::string &text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s += c;
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    if (s.empty()) throw DomainError("cannot parse empty complex number");
    if (s.back() != 'j' && s.back() != 'i') return {parse_real(s, text), 0.0};
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        if (s.empty() || s == "+") return {0.0, 1.0};
        if (s == "-") return {0.0, -1.0};
        return {0.0, parse_real(s, text)};
    }
    std::string re = s.substr(0, split), im = s.substr(split);
    double iv = im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real(im, text);
    return {parse_real(re, text), iv};
}

CsvWriter::CsvWriter(std::vector<std::string> header)
  : header_(std::move(header)) {
    if (header_.empty()) throw DomainError("CsvWriter: header row is mandatory");
}

void CsvWriter::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw DomainError("CsvWriter: row width differs from header");
    rows_.push_back(std::move(row));
}

std::string CsvWriter::quote(const std::string &field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void CsvWriter::write(std::ostream &os) const {
    auto line = [&](const std::vector<std::string> &r) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) os << ',';
            os << quote(r[k]);
        }
        os << "\r\n";
    };
    line(header_);
    for (const auto &r : rows_) line(r);
}

std::string CsvWriter::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

void CsvWriter::save(const std::string &path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(f);
}

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

cplx from_cjson(const json &j) {
    if (!j.is_array() || j.size() != 2) throw DomainError("phase point JSON: complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json mat_json(const CMat &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cjson(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

CMat mat_from_json(const json &j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw DomainError("phase point JSON: residue must have n rows");
    CMat m(n, n);
    for (int r = 0; r < n; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
            throw DomainError("phase point JSON: residue rows must have n entries");
        for (int c = 0; c < n; ++c) m(r, c) = from_cjson(j[r][c]);
    }
    return m;
}

json base_json(int n, const std::vector<cplx> &sites, const std::vector<CMat> &eta) {
    json j;
    j["n"] = n;
    j["sites"] = json::array();
    for (cplx z : sites) j["sites"].push_back(cjson(z));
    j["eta"] = json::array();
    for (const auto &m : eta) j["eta"].push_back(mat_json(m));
    return j;
}

std::pair<std::vector<cplx>, std::vector<CMat>> base_from_json(const json &j, int &n) {
    if (!j.contains("n") || !j.contains("sites") || !j.contains("eta"))
        throw DomainError("phase point JSON: keys n, sites, eta are required");
    n = j["n"].get<int>();
    std::vector<cplx> sites;
    for (const auto &z : j["sites"]) sites.push_back(from_cjson(z));
    std::vector<CMat> eta;
    for (const auto &m : j["eta"]) eta.push_back(mat_from_json(m, n));
    return {sites, eta};
}

json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw DomainError(std::string("phase point JSON: ") + e.what());
    }
}

} // namespace

std::string rational_point_to_json(const RationalPhasePoint &pt) {
    return base_json(pt.n(), pt.sites(), pt.eta()).dump();
}

RationalPhasePoint rational_point_from_json(const std::string &text) {
    json j = parse_json(text);
    int n = 0;
    auto [sites, eta] = base_from_json(j, n);
    return RationalPhasePoint(std::move(eta), std::move(sites));
}

std::string elliptic_point_to_json(const EllipticPhasePoint &pt) {
    json j = base_json(pt.n(), pt.sites(), pt.eta());
    j["q"] = cjson(pt.ctx().q());
    j["p"] = json::array();
    j["t"] = json::array();
    for (int a = 0; a < pt.n(); ++a) {
        j["p"].push_back(cjson(pt.p()(a)));
        j["t"].push_back(cjson(pt.t()(a)));
    }
    return j.dump();
}

EllipticPhasePoint elliptic_point_from_json(const std::string &text) {
    json j = parse_json(text);
    int n = 0;
    auto [sites, eta] = base_from_json(j, n);
    if (!j.contains("q") || !j.contains("p") || !j.contains("t"))
        throw DomainError("phase point JSON: keys q, p, t are required");
    CVec p(n), t(n);
    if (static_cast<int>(j["p"].size()) != n || static_cast<int>(j["t"].size()) != n)
        throw DomainError("phase point JSON: p and t must have n entries");
    for (int a = 0; a < n; ++a) {
        p(a) = from_cjson(j["p"][a]);
        t(a) = from_cjson(j["t"][a]);
    }
    return EllipticPhasePoint(ThetaContext(from_cjson(j["q"])), p, t, std::move(eta), std::move(sites));
}

CsvWriter trajectory_csv(const Trajectory &traj) {
    std::vector<std::string> header{"t", "drift_max"};
    std::vector<std::vector<cplx>> inv;
    for (const auto &pt : traj.points) inv.push_back(all_invariants(pt));
    const std::size_t width = inv.empty() ? 0 : inv.front().size();
    for (std::size_t k = 0; k < width; ++k) header.push_back("inv" + std::to_string(k));
    CsvWriter w(header);
    for (std::size_t s = 0; s < traj.points.size(); ++s) {
        std::vector<std::string> row{format_real(traj.times[s]), format_real(traj.drift[s])};
        for (cplx v : inv[s]) row.push_back(format_complex(v));
        w.add_row(std::move(row));
    }
    return w;
}

} // namespace hitchin
