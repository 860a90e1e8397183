#include "mkdv/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mkdv {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file " + path);
    return out;
}

std::ifstream open_in(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file " + path);
    return in;
}

}  // namespace

void write_portrait_csv(const PhasePortrait &p, const std::string &path) {
    auto out = open_out(path);
    out << "u,v,sign\n";
    for (size_t j = 0; j < p.v.size(); ++j)
        for (size_t i = 0; i < p.u.size(); ++i)
            out << fmt12(p.u[i]) << ',' << fmt12(p.v[j]) << ','
                << p.sign[j * p.u.size() + i] << '\n';
}

void write_pii_csv(const PIISolution &sol, const std::string &path) {
    auto out = open_out(path);
    out << "s,u,uprime,I\n";
    for (size_t i = 0; i < sol.s.size(); ++i)
        out << fmt12(sol.s[i]) << ',' << fmt12(sol.u[i]) << ',' << fmt12(sol.up[i]) << ','
            << fmt12(sol.I[i]) << '\n';
}

PIISolution read_pii_csv(const std::string &path) {
    auto in = open_in(path);
    PIISolution sol;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("s,", 0) == 0) continue;
        }
        std::istringstream ss(line);
        std::string f;
        std::vector<double> row;
        while (std::getline(ss, f, ',')) row.push_back(std::stod(f));
        if (row.size() != 4) throw ValidationError("pii csv: bad row in " + path);
        sol.s.push_back(row[0]);
        sol.u.push_back(row[1]);
        sol.up.push_back(row[2]);
        sol.I.push_back(row[3]);
    }
    if (sol.s.size() < 2) throw ValidationError("pii csv: too few rows in " + path);
    return sol;
}

void write_snapshot_csv(const Snapshot &snap, const std::string &path) {
    auto out = open_out(path);
    out << "x,q\n";
    for (size_t i = 0; i < snap.x.size(); ++i)
        out << fmt12(snap.x[i]) << ',' << fmt12(snap.q[i]) << '\n';
}

void write_scattering_json(const ScatteringData &data, const std::string &path) {
    json j;
    j["grid"] = data.grid;
    std::vector<double> re(data.r.size()), im(data.r.size());
    for (size_t i = 0; i < data.r.size(); ++i) {
        re[i] = data.r[i].real();
        im[i] = data.r[i].imag();
    }
    j["r_re"] = re;
    j["r_im"] = im;
    j["poles"] = json::array();
    for (size_t n = 0; n < data.poles.eta.size(); ++n) {
        j["poles"].push_back({{"re", data.poles.eta[n].real()},
                              {"im", data.poles.eta[n].imag()},
                              {"c_re", data.poles.c[n].real()},
                              {"c_im", data.poles.c[n].imag()}});
    }
    j["mass"] = data.mass;
    j["time"] = data.time;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

ScatteringData read_scattering_json(const std::string &path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const std::exception &e) {
        throw ValidationError("scattering json: parse failure in " + path + ": " + e.what());
    }
    ScatteringData d;
    d.grid = j.at("grid").get<std::vector<double>>();
    auto re = j.at("r_re").get<std::vector<double>>();
    auto im = j.at("r_im").get<std::vector<double>>();
    if (re.size() != d.grid.size() || im.size() != d.grid.size())
        throw ValidationError("scattering json: mismatched array lengths");
    d.r.resize(re.size());
    for (size_t i = 0; i < re.size(); ++i) d.r[i] = {re[i], im[i]};
    for (const auto &p : j.at("poles")) {
        d.poles.eta.emplace_back(p.at("re").get<double>(), p.at("im").get<double>());
        d.poles.c.emplace_back(p.at("c_re").get<double>(), p.at("c_im").get<double>());
        d.poles.gamma.emplace_back(0.0);
        d.poles.a_prime.emplace_back(0.0);
        d.poles.self_symmetric.push_back(false);
    }
    d.mass = j.at("mass").get<double>();
    d.time = j.at("time").get<double>();
    return d;
}

void write_phase_json(const PhaseAtOne &phase, const std::string &path) {
    json j;
    j["p"] = phase.p;
    j["phi0"] = phase.phi0;
    j["generic"] = phase.generic;
    j["phi0_blaschke"] = phase.phi0_blaschke;
    j["pv_integral"] = phase.pv_integral;
    j["arg_h1_sq"] = phase.arg_h1_sq;
    j["boundary_clamped"] = phase.boundary_clamped;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

PhaseAtOne read_phase_json(const std::string &path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const std::exception &e) {
        throw ValidationError("phase json: parse failure in " + path + ": " + e.what());
    }
    PhaseAtOne p;
    p.p = j.at("p").get<double>();
    p.phi0 = j.at("phi0").get<double>();
    p.generic = j.at("generic").get<bool>();
    p.phi0_blaschke = j.value("phi0_blaschke", p.phi0);
    p.pv_integral = j.value("pv_integral", 0.0);
    p.arg_h1_sq = j.value("arg_h1_sq", 0.0);
    p.boundary_clamped = j.value("boundary_clamped", false);
    return p;
}

std::map<std::string, std::string> read_config_file(const std::string &path) {
    auto in = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: missing '=' at line " + std::to_string(lineno));
        std::string k = line.substr(0, eq), v = line.substr(eq + 1);
        kv[k] = v;
    }
    return kv;
}

std::string config_hash(const std::map<std::string, std::string> &kv) {
    uint64_t h = 14695981039346656037ull;
    auto mix = [&](const std::string &s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto &[k, v] : kv) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const Manifest &m, const std::string &path) {
    json j;
    j["command"] = m.command;
    j["inputs"] = m.inputs;
    j["config"] = m.config;
    j["config_hash"] = config_hash(m.config);
    j["tool_version"] = "0.1.0";
    j["tolerances"] = m.tolerances;
    j["outputs"] = m.outputs;
    j["notes"] = m.notes;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::vector<double> parse_tlist(const std::string &spec, bool *had_duplicates) {
    std::vector<double> ts;
    std::istringstream ss(spec);
    std::string f;
    while (std::getline(ss, f, ','))
        if (!f.empty()) ts.push_back(std::stod(f));
    if (ts.empty()) throw ValidationError("tlist: empty specification");
    std::sort(ts.begin(), ts.end());
    auto last = std::unique(ts.begin(), ts.end());
    if (had_duplicates) *had_duplicates = last != ts.end();
    ts.erase(last, ts.end());
    return ts;
}

SWindow parse_swindow(const std::string &spec) {
    SWindow w;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &w.lo, &w.hi, &w.n) != 3)
        throw ValidationError("swindow: expected lo:hi:n, got " + spec);
    if (w.n < 1 || w.hi < w.lo) throw ValidationError("swindow: bad range " + spec);
    return w;
}

std::vector<double> parse_zgrid(const std::string &spec, double margin) {
    if (spec.rfind("geom:", 0) == 0) {
        double zmax;
        int n;
        if (std::sscanf(spec.c_str(), "geom:%lf:%d", &zmax, &n) != 2)
            throw ValidationError("zgrid: expected geom:zmax:n, got " + spec);
        return symmetric_zgrid(zmax, n, margin);
    }
    if (spec.rfind("lin:", 0) == 0) {
        // explicit grids are kept verbatim; margin violations are the
        // caller's validation error, not silently dropped
        double lo, hi;
        int n;
        if (std::sscanf(spec.c_str(), "lin:%lf:%lf:%d", &lo, &hi, &n) != 3)
            throw ValidationError("zgrid: expected lin:lo:hi:n, got " + spec);
        if (n < 1) throw ValidationError("zgrid: need at least one point");
        std::vector<double> g;
        for (int i = 0; i < n; ++i)
            g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return g;
    }
    throw ValidationError("zgrid: unknown grid spec " + spec);
}

}  // namespace mkdv
