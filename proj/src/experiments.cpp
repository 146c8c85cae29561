#include "isac/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "isac/error.hpp"
#include "isac/parallel.hpp"

namespace isac {

ExperimentConfig apply_overrides(ExperimentConfig c, const RunOptions& opt) {
    if (opt.trials) {
        if (*opt.trials < 2) throw ConfigError("trials", "need at least 2 trials");
        c.trials = *opt.trials;
    }
    if (opt.seed) c.seed = *opt.seed;
    if (opt.out) c.out_prefix = *opt.out;
    return c;
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("format_real: conversion failed");
    return std::string(buf, ptr);
}

namespace {

struct PointSetup {
    std::string label;
    SpreadingScheme s1;
    SpreadingScheme s2;
};

Scenario build_point(const ExperimentConfig& c, const PointSetup& setup, const std::string& axis_value) {
    int n = c.n;
    int l = c.l;
    int m = c.m;
    double alpha_db = c.alpha_db;
    double eta = c.eta;
    Modulation mod = c.modulation;
    std::string key = "eta";
    if (c.sweep_axis) {
        key = "sweep_values";
        switch (*c.sweep_axis) {
            case SweepAxis::AlphaDb: alpha_db = parse_real(key, axis_value); break;
            case SweepAxis::M: m = static_cast<int>(parse_integer(key, axis_value)); break;
            case SweepAxis::L: l = static_cast<int>(parse_integer(key, axis_value)); break;
            case SweepAxis::Eta: eta = parse_real(key, axis_value); break;
            case SweepAxis::Modulation: mod = parse_modulation(axis_value); break;
        }
    }
    try {
        Scenario scn;
        scn.alloc = SubcarrierAllocation(n, l);
        scn.M = m;
        scn.alpha_db = alpha_db;
        scn.constellation = make_constellation(mod);
        scn.spread1 = make_spreading(scn.alloc, 1, setup.s1, eta);
        scn.spread2 = make_spreading(scn.alloc, 2, setup.s2, eta);
        scn.seed = c.seed;
        scn.validate();
        return scn;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(key, e.what());
    }
}

std::string scenario_tag(const SweepPoint& p) {
    const Scenario& s = p.scenario;
    std::ostringstream os;
    os << "scheme=" << p.scheme << " N=" << s.alloc.n() << " L=" << s.alloc.l() << " M=" << s.M
       << " alpha_db=" << format_real(s.alpha_db) << " modulation=" << to_string(s.constellation.kind)
       << " eta=" << format_real(s.spread1.eta);
    return os.str();
}

std::string fixed(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("out_prefix", "cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("out_prefix", "write failed for '" + path + "'");
}

}  // namespace

std::vector<SweepPoint> expand_points(const ExperimentConfig& c) {
    std::vector<PointSetup> setups;
    if (!c.schemes.empty()) {
        for (SpreadingScheme s : c.schemes) setups.push_back({std::string(to_string(s)), s, s});
    } else {
        std::string label(to_string(c.scheme1));
        if (c.scheme2 != c.scheme1) label += "+" + std::string(to_string(c.scheme2));
        setups.push_back({label, c.scheme1, c.scheme2});
    }
    const std::vector<std::string> values =
        c.sweep_axis ? c.sweep_values : std::vector<std::string>{std::string()};

    std::vector<SweepPoint> points;
    for (const auto& setup : setups) {
        for (const auto& v : values) {
            points.push_back({setup.label, c.sweep_axis ? std::string(to_string(*c.sweep_axis)) : "",
                              v, build_point(c, setup, v)});
        }
    }
    return points;
}

void write_acf_csv(std::ostream& out, const PowerProfile& analytic, const McEstimate& mc) {
    if (analytic.size() != mc.profile.size()) throw DimensionError("write_acf_csv: lag ranges differ");
    out << "lag,analytic,analytic_db,mc,mc_db,mc_stderr\n";
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        out << analytic.lag(i) << ',' << format_real(analytic.values[i]) << ','
            << format_real(to_db(analytic.values[i])) << ',' << format_real(mc.profile.values[i]) << ','
            << format_real(to_db(mc.profile.values[i])) << ',' << format_real(mc.profile.std_error[i])
            << '\n';
    }
}

std::vector<SweepRow> compute_sweep(const ExperimentConfig& c, int workers) {
    std::vector<SweepPoint> points = expand_points(c);
    std::vector<SweepRow> rows(points.size());
    // sweep points in parallel when there are enough of them, trials in parallel otherwise
    const bool across_points = points.size() >= static_cast<std::size_t>(std::max(workers, 1));
    const int inner = across_points ? 1 : workers;
    parallel_for(points.size(), across_points ? workers : 1, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.point = std::move(points[i]);
        row.analytic = eisl(row.point.scenario);
        row.mc = estimate_eisl(row.point.scenario, c.trials, inner);
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "scheme,axis,axis_value,alpha_db,M,L,eta,modulation,eisl_db_analytic,eisl_db_mc,eisl_stderr_db\n";
    for (const SweepRow& r : rows) {
        const Scenario& s = r.point.scenario;
        // delta method: d(10 log10 x) = 10 / ln(10) * dx / x
        const double stderr_db = r.mc.eisl_linear > 0.0
                                     ? 10.0 / std::log(10.0) * r.mc.std_error / r.mc.eisl_linear
                                     : std::numeric_limits<double>::infinity();
        out << r.point.scheme << ',' << r.point.axis << ',' << r.point.axis_value << ','
            << format_real(s.alpha_db) << ',' << s.M << ',' << s.alloc.l() << ','
            << format_real(s.spread1.eta) << ',' << to_string(s.constellation.kind) << ','
            << format_real(r.analytic.eisl_db) << ',' << format_real(to_db(r.mc.eisl_linear)) << ','
            << format_real(stderr_db) << '\n';
    }
}

std::vector<std::string> run_acf(const ExperimentConfig& c, int workers) {
    const std::vector<SweepPoint> points = expand_points(c);
    const bool many_schemes = c.schemes.size() > 1;
    std::vector<std::string> paths;
    for (const SweepPoint& p : points) {
        std::string path = c.out_prefix;
        if (many_schemes) path += "_" + p.scheme;
        if (!p.axis.empty()) path += "_" + p.axis + "_" + p.axis_value;
        path += ".csv";

        const PowerProfile analytic = avg_sq_acf(p.scenario, workers);
        const McEstimate mc = estimate_acf(p.scenario, c.trials, workers);
        std::ostringstream os;
        write_acf_csv(os, analytic, mc);
        write_file(path, os.str());
        paths.push_back(std::move(path));
    }
    return paths;
}

std::string run_sweep(const ExperimentConfig& c, int workers) {
    if (!c.sweep_axis) throw ConfigError("sweep_axis", "required for a sweep");
    const std::vector<SweepRow> rows = compute_sweep(c, workers);
    std::ostringstream os;
    write_sweep_csv(os, rows);
    const std::string path = c.out_prefix + ".csv";
    write_file(path, os.str());
    return path;
}

bool run_validate(const ExperimentConfig& c, int workers, std::ostream& report) {
    if (c.trials < 100) throw ConfigError("trials", "validation needs at least 100 trials");
    const std::vector<SweepPoint> points = expand_points(c);
    bool all = true;
    for (const SweepPoint& p : points) {
        const ValidationReport rep = validate(p.scenario, c.trials, c.sigma_band, workers);
        all = all && rep.passed;
        report << (rep.passed ? "PASS " : "FAIL ") << scenario_tag(p) << " trials=" << c.trials
               << " max|z|=" << fixed(rep.max_abs_z, 3) << "@lag" << rep.worst_lag
               << " within2sigma=" << fixed(100.0 * rep.fraction_within_2sigma, 1) << "%"
               << " eisl_z=" << fixed(rep.eisl_z, 3) << '\n';
        if (!rep.passed) {
            for (const LagCheck& f : rep.failures()) {
                report << "  lag " << f.lag << " z=" << fixed(f.z, 3) << " analytic="
                       << format_real(f.analytic) << " mc=" << format_real(f.mc) << '\n';
            }
            if (!(std::abs(rep.eisl_z) <= c.sigma_band)) {
                report << "  eisl z=" << fixed(rep.eisl_z, 3) << " analytic=" << format_real(rep.eisl_analytic)
                       << " mc=" << format_real(rep.eisl_mc) << '\n';
            }
        }
    }
    return all;
}

}  // namespace isac
