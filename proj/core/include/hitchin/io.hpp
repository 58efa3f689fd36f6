#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hitchin/elliptic_classical.hpp"
#include "hitchin/rational_classical.hpp"

namespace hitchin {

// "re+imj" with round-trip precision
std::string format_complex(cplx z);
// shortest round-trip decimal form
std::string format_real(double x);
// accepts "a", "a+bj", "a-bj", "bj", "(a+bj)"; throws DomainError otherwise
cplx parse_complex(const std::string &s);

// RFC 4180 table: header row mandatory, CRLF line ends, fields quoted when needed.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string> &header() const { return header_; }

    std::string str() const;
    void write(std::ostream &os) const;
    void save(const std::string &path) const;

    static std::string quote(const std::string &field);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// {"n": n, "sites": [[re, im], ...], "eta": [[[re, im], ...], ...]} with eta row-major
std::string rational_point_to_json(const RationalPhasePoint &pt);
RationalPhasePoint rational_point_from_json(const std::string &text);

// rational fields plus "q": [re, im], "p": [[re, im]], "t": [[re, im]]
std::string elliptic_point_to_json(const EllipticPhasePoint &pt);
EllipticPhasePoint elliptic_point_from_json(const std::string &text);

// trajectory table: t, drift_max, then the flattened invariants as re+imj
CsvWriter trajectory_csv(const Trajectory &traj);

} // namespace hitchin
