#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpulse/exact_states.hpp"
#include "qpulse/fock.hpp"
#include "qpulse/jcm.hpp"
#include "qpulse/optimize.hpp"
#include "qpulse/tcm.hpp"
#include "qpulse/wigner.hpp"

namespace qpulse {

using json = nlohmann::json;

inline json to_json(const FieldState& st) {
    json j;
    j["n_max"] = st.n_max();
    std::vector<double> re, im;
    re.reserve(st.amps.size());
    im.reserve(st.amps.size());
    for (const auto& a : st.amps) {
        re.push_back(a.real());
        im.push_back(a.imag());
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline FieldState field_from_json(const json& j) {
    const int n_max = j.at("n_max").get<int>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (n_max < 0 || re.size() != im.size() ||
        re.size() != static_cast<std::size_t>(n_max) + 1)
        throw std::domain_error("field_from_json: inconsistent arrays");
    FieldState st;
    st.amps.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) st.amps[i] = {re[i], im[i]};
    return st;
}

inline json to_json(const JointState& st) {
    json j;
    j["n_max"] = st.n_max();
    std::vector<double> a, b, c, d;
    for (const auto& v : st.cg) {
        a.push_back(v.real());
        b.push_back(v.imag());
    }
    for (const auto& v : st.ce) {
        c.push_back(v.real());
        d.push_back(v.imag());
    }
    j["cg_re"] = a;
    j["cg_im"] = b;
    j["ce_re"] = c;
    j["ce_im"] = d;
    return j;
}

inline json to_json(const RecursionBuild& b) {
    json j;
    j["state"] = to_json(b.state);
    j["tau"] = b.tau;
    j["theta"] = b.spec.theta;
    j["branch_k"] = b.spec.branch_k;
    j["start"] = b.spec.start == AtomStart::Ground ? "ground" : "excited";
    j["photon_order_m"] = b.photon_order_m;
    j["n_boundary"] = b.n_boundary;
    j["boundary_leak"] = b.boundary_leak;
    j["exact_truncation"] = b.exact_truncation;
    return j;
}

inline json to_json(const OptimizationResult& r) {
    json j;
    j["params_opt"] = r.params_opt;
    j["objective_opt"] = r.objective_opt;
    j["n_evals"] = r.n_evals;
    j["converged"] = r.converged;
    j["restarts_used"] = r.restarts_used;
    return j;
}

inline json to_json(const DickeJointState& st) {
    json j;
    j["J2"] = st.J2;
    j["n_max"] = st.n_max;
    std::vector<double> re, im;
    re.reserve(st.c.size());
    im.reserve(st.c.size());
    for (const auto& v : st.c) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

// CSV with '.' decimal separator, '\n' line ends, and floats at 17
// significant digits so runs diff bit-exactly.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ',';
            out_ << cols[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& vals) {
        char buf[40];
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
            out_ << buf;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline void write_distribution_csv(const std::string& path, const FieldState& st) {
    CsvWriter csv(path);
    csv.header({"n", "prob"});
    for (int n = 0; n <= st.n_max(); ++n)
        csv.row({static_cast<double>(n), std::norm(st.amps[n])});
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_json_file: cannot open " + path);
    out << j.dump(2) << '\n';
}

// Dense Cartesian dump of W over [-extent, extent]^2, columns
// alpha_re, alpha_im, W.
inline void write_wigner_grid_csv(const std::string& path, const FieldState& st,
                                  double extent, int points_per_axis) {
    if (points_per_axis < 2)
        throw std::domain_error("write_wigner_grid_csv: need >= 2 points per axis");
    CsvWriter csv(path);
    csv.header({"alpha_re", "alpha_im", "W"});
    for (int i = 0; i < points_per_axis; ++i) {
        const double re = -extent + 2.0 * extent * i / (points_per_axis - 1);
        for (int j = 0; j < points_per_axis; ++j) {
            const double im = -extent + 2.0 * extent * j / (points_per_axis - 1);
            csv.row({re, im, wigner_at(st, {re, im})});
        }
    }
}

} // namespace qpulse
