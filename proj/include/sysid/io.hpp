/*
 Copyright 2026 The sysid Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef SYSID_IO_HPP
#define SYSID_IO_HPP

#include "sysid/hankel.hpp"
#include "sysid/lti.hpp"
#include "sysid/markov.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

// Text formats.
//
// Documents (systems, Markov parameters, realizations, experiment configs) are
// flat `key = value` lines; arrays are comma lists and matrices are stored
// row-major next to their dimensions. '#' starts a comment line. Trajectories
// are CSV with header `t,u_1..u_p,y_1..y_m`. Floats use 17 significant digits.

namespace sysid::io {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        throw Error(ErrorKind::Parse, "number out of range: '" + s + "'");
    }
}

inline long long parse_int(const std::string& s) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::Parse, "not an integer: '" + s + "'");
    return v;
}

inline std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& item : split(s, ',')) out.push_back(parse_double(item));
    return out;
}

/// Ordered key = value document.
class KeyValueDoc {
public:
    void set(const std::string& key, const std::string& value) {
        if (!values_.count(key)) order_.push_back(key);
        values_[key] = value;
    }
    void set(const std::string& key, double value) { set(key, format_double(value)); }
    void set(const std::string& key, Index value) { set(key, std::to_string(value)); }

    void set_matrix(const std::string& key, const Matrix& M) {
        std::string s;
        for (Index i = 0; i < M.rows(); ++i)
            for (Index j = 0; j < M.cols(); ++j) {
                if (!s.empty()) s += ", ";
                s += format_double(M(i, j));
            }
        set(key, s);
    }
    void set_vector(const std::string& key, const std::vector<double>& v) {
        std::string s;
        for (double x : v) {
            if (!s.empty()) s += ", ";
            s += format_double(x);
        }
        set(key, s);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::string& get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw Error(ErrorKind::Parse, "missing key '" + key + "'");
        return it->second;
    }
    double get_double(const std::string& key) const { return parse_double(get(key)); }
    Index get_index(const std::string& key) const { return static_cast<Index>(parse_int(get(key))); }
    std::vector<double> get_doubles(const std::string& key) const { return parse_doubles(get(key)); }

    Matrix get_matrix(const std::string& key, Index rows, Index cols) const {
        const auto v = get_doubles(key);
        if (static_cast<Index>(v.size()) != rows * cols)
            throw Error(ErrorKind::Parse, "key '" + key + "' has " + std::to_string(v.size()) + " entries, expected " +
                                              std::to_string(rows * cols));
        Matrix M(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) M(i, j) = v[static_cast<std::size_t>(i * cols + j)];
        return M;
    }

    const std::vector<std::string>& keys() const { return order_; }

    std::string str(const std::string& header_comment = {}) const {
        std::ostringstream os;
        if (!header_comment.empty()) os << "# " << header_comment << "\n";
        for (const auto& k : order_) os << k << " = " << values_.at(k) << "\n";
        return os.str();
    }

    static KeyValueDoc parse(std::istream& in) {
        KeyValueDoc doc;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = trim(std::string_view(t).substr(0, eq));
            if (key.empty()) throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": empty key");
            doc.set(key, trim(std::string_view(t).substr(eq + 1)));
        }
        return doc;
    }
    static KeyValueDoc parse(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

inline void expect_type(const KeyValueDoc& doc, const std::string& type) {
    if (doc.get("type") != type)
        throw Error(ErrorKind::Parse, "expected document type '" + type + "', found '" + doc.get("type") + "'");
}

// --- StateSpace -------------------------------------------------------------

inline std::string to_text(const StateSpace& sys) {
    KeyValueDoc d;
    d.set("type", std::string("statespace"));
    d.set("n", sys.states());
    d.set("m", sys.outputs());
    d.set("p", sys.inputs());
    d.set_matrix("A", sys.A);
    d.set_matrix("B", sys.B);
    d.set_matrix("C", sys.C);
    d.set_matrix("D", sys.D);
    return d.str("sysid state-space system, matrices row-major");
}

inline StateSpace statespace_from_text(const std::string& text) {
    const auto d = KeyValueDoc::parse(text);
    expect_type(d, "statespace");
    const Index n = d.get_index("n"), m = d.get_index("m"), p = d.get_index("p");
    require(n >= 1 && m >= 1 && p >= 1, ErrorKind::Parse, "statespace: dimensions must be positive");
    return StateSpace(d.get_matrix("A", n, n), d.get_matrix("B", n, p), d.get_matrix("C", m, n),
                      d.get_matrix("D", m, p));
}

// --- MarkovParams -----------------------------------------------------------

inline std::string to_text(const MarkovParams& G) {
    KeyValueDoc d;
    d.set("type", std::string("markov"));
    d.set("m", G.outputs());
    d.set("p", G.inputs());
    d.set("T", G.horizon());
    for (Index k = 0; k < G.horizon(); ++k) d.set_matrix("G_" + std::to_string(k), G.block(k));
    return d.str("sysid Markov parameters [D, CB, CAB, ...], blocks row-major");
}

inline MarkovParams markov_from_text(const std::string& text) {
    const auto d = KeyValueDoc::parse(text);
    expect_type(d, "markov");
    const Index m = d.get_index("m"), p = d.get_index("p"), T = d.get_index("T");
    require(m >= 1 && p >= 1 && T >= 1, ErrorKind::Parse, "markov: dimensions must be positive");
    std::vector<Matrix> blocks;
    for (Index k = 0; k < T; ++k) blocks.push_back(d.get_matrix("G_" + std::to_string(k), m, p));
    return MarkovParams(m, p, std::move(blocks));
}

// --- RealizationResult ------------------------------------------------------

inline std::string to_text(const RealizationResult& r) {
    KeyValueDoc d;
    d.set("type", std::string("realization"));
    d.set("n", r.order);
    d.set("m", r.C_hat.rows());
    d.set("p", r.B_hat.cols());
    d.set("T1", r.shape.T1);
    d.set("T2", r.shape.T2);
    d.set_vector("sigma", std::vector<double>(r.sigma.data(), r.sigma.data() + r.sigma.size()));
    d.set("sigma_min_L", r.sigma_min_L);
    d.set_matrix("A", r.A_hat);
    d.set_matrix("B", r.B_hat);
    d.set_matrix("C", r.C_hat);
    d.set_matrix("D", r.D_hat);
    d.set_matrix("O", r.O_hat);
    d.set_matrix("Q", r.Q_hat);
    return d.str("sysid Ho-Kalman realization, matrices row-major");
}

inline RealizationResult realization_from_text(const std::string& text) {
    const auto d = KeyValueDoc::parse(text);
    expect_type(d, "realization");
    RealizationResult r;
    const Index n = d.get_index("n"), m = d.get_index("m"), p = d.get_index("p");
    r.order = n;
    r.shape = {d.get_index("T1"), d.get_index("T2")};
    const auto sigma = d.get_doubles("sigma");
    require(static_cast<Index>(sigma.size()) == n, ErrorKind::Parse, "realization: sigma must have n entries");
    r.sigma = Eigen::Map<const Vector>(sigma.data(), n);
    r.sigma_min_L = d.get_double("sigma_min_L");
    r.A_hat = d.get_matrix("A", n, n);
    r.B_hat = d.get_matrix("B", n, p);
    r.C_hat = d.get_matrix("C", m, n);
    r.D_hat = d.get_matrix("D", m, p);
    r.O_hat = d.get_matrix("O", r.shape.T1 * m, n);
    r.Q_hat = d.get_matrix("Q", n, r.shape.T2 * p);
    return r;
}

// --- Trajectory CSV ---------------------------------------------------------

inline std::string trajectory_to_csv(const Trajectory& traj) {
    const Index p = traj.inputs.cols(), m = traj.outputs.cols();
    std::string s = "t";
    for (Index i = 1; i <= p; ++i) s += ",u_" + std::to_string(i);
    for (Index i = 1; i <= m; ++i) s += ",y_" + std::to_string(i);
    s += "\n";
    for (Index t = 0; t < traj.length(); ++t) {
        s += std::to_string(t + 1);
        for (Index i = 0; i < p; ++i) s += "," + format_double(traj.inputs(t, i));
        for (Index i = 0; i < m; ++i) s += "," + format_double(traj.outputs(t, i));
        s += "\n";
    }
    return s;
}

inline Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "trajectory: empty file");
    const auto header = split(trim(line), ',');
    if (header.empty() || header[0] != "t") throw Error(ErrorKind::Parse, "trajectory: header must start with 't'");
    Index p = 0, m = 0;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string expect_u = "u_" + std::to_string(p + 1), expect_y = "y_" + std::to_string(m + 1);
        if (m == 0 && header[i] == expect_u)
            ++p;
        else if (header[i] == expect_y)
            ++m;
        else
            throw Error(ErrorKind::Parse, "trajectory: unexpected column '" + header[i] + "'");
    }
    require(p >= 1 && m >= 1, ErrorKind::Parse, "trajectory: need at least one input and one output column");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(trim(line), ',');
        if (static_cast<Index>(cells.size()) != 1 + p + m)
            throw Error(ErrorKind::Parse, "trajectory: row " + std::to_string(rows.size() + 1) + " has wrong width");
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i]));
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorKind::Parse, "trajectory: no samples");
    Trajectory traj;
    const Index N = static_cast<Index>(rows.size());
    traj.inputs.resize(N, p);
    traj.outputs.resize(N, m);
    for (Index t = 0; t < N; ++t) {
        const auto& r = rows[static_cast<std::size_t>(t)];
        for (Index i = 0; i < p; ++i) traj.inputs(t, i) = r[static_cast<std::size_t>(i)];
        for (Index i = 0; i < m; ++i) traj.outputs(t, i) = r[static_cast<std::size_t>(p + i)];
    }
    return traj;
}

}  // namespace sysid::io

#endif  // SYSID_IO_HPP
