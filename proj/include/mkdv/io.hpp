#pragma once

#include <map>
#include <string>
#include <vector>

#include "mkdv/cauchy.hpp"
#include "mkdv/painleve.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/sim.hpp"
#include "mkdv/spectral.hpp"

namespace mkdv {

// All floating-point output uses 12 significant digits, fixed column order.
std::string fmt12(double v);

void write_portrait_csv(const PhasePortrait &p, const std::string &path);
void write_pii_csv(const PIISolution &sol, const std::string &path);
void write_snapshot_csv(const Snapshot &snap, const std::string &path);
void write_scattering_json(const ScatteringData &data, const std::string &path);
ScatteringData read_scattering_json(const std::string &path);
void write_phase_json(const PhaseAtOne &phase, const std::string &path);
PhaseAtOne read_phase_json(const std::string &path);
PIISolution read_pii_csv(const std::string &path);

// Flat key=value configuration; every key is overridable by a CLI flag of the
// same name.
std::map<std::string, std::string> read_config_file(const std::string &path);

// FNV-1a over the canonicalized (sorted) key=value lines.
std::string config_hash(const std::map<std::string, std::string> &kv);

struct Manifest {
    std::string command;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> config;
    std::map<std::string, double> tolerances;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> notes;
};

void write_manifest(const Manifest &m, const std::string &path);

// "a,b,c" -> doubles; duplicates removed with a warning flag
std::vector<double> parse_tlist(const std::string &spec, bool *had_duplicates = nullptr);
// "lo:hi:n"
struct SWindow {
    double lo, hi;
    int n;
};
SWindow parse_swindow(const std::string &spec);
// "geom:zmax:n_per_side" or "lin:lo:hi:n"
std::vector<double> parse_zgrid(const std::string &spec, double margin);

}  // namespace mkdv
