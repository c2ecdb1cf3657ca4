#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/solver.hpp"
#include "kinetic_barrier/verifier.hpp"

namespace kb {

inline constexpr const char* kVersion = "0.1.0";

// Fixed shortest-roundtrip formatting so report bodies are byte-stable.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string timestamp_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", std::localtime(&t));
    return buf;
}

class CsvWriter {
   public:
    explicit CsvWriter(const std::string& path) : os_(path) {
        if (!os_) throw ConfigError("cannot write: " + path);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

   private:
    std::ofstream os_;
};

inline void write_proposition_csv(const std::string& path,
                                  const PropositionReport& rep) {
    CsvWriter w(path);
    w.row({"prop_id", "q", "v_norm", "lhs", "rhs_core", "implied_constant",
           "verdict", "variant"});
    for (const auto& r : rep.rows) {
        w.row({to_string(rep.id), fmt_double(r.q), fmt_double(r.v_norm),
               fmt_double(r.lhs), fmt_double(r.rhs_core),
               fmt_double(r.implied_constant), r.pass ? "PASS" : "FAIL", r.variant});
    }
}

inline void append_summary_json(std::string& json, const PropositionReport& rep,
                                bool first) {
    if (!first) json += ",\n";
    json += "    {\"prop\": \"" + to_string(rep.id) + "\", \"verdict\": \"" +
            (rep.verdict ? "PASS" : "FAIL") + "\"";
    json += ", \"rows\": " + std::to_string(rep.rows.size());
    json += ", \"ratio_spread\": " + fmt_double(rep.ratio_spread);
    if (rep.slope_checked && rep.slope_fit.valid) {
        json += ", \"slope\": " + fmt_double(rep.slope_fit.slope);
        json += ", \"slope_expected\": " + fmt_double(rep.slope_expected);
        json += ", \"slope_tol\": " + fmt_double(rep.slope_tol);
    }
    if (!rep.note.empty()) json += ", \"note\": \"" + rep.note + "\"";
    json += "}";
}

template <int D>
void write_moment_trace_csv(const std::string& path, const MomentTrace<D>& tr) {
    CsvWriter w(path);
    std::vector<std::string> head{"t", "mass", "energy", "entropy", "clipped_mass"};
    for (double q : tr.qs) {
        head.push_back("sup_q" + fmt_double(q));
        head.push_back("l1_q" + fmt_double(q));
    }
    w.row(head);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::vector<std::string> cells{fmt_double(tr.times[k]), fmt_double(tr.mass[k]),
                                       fmt_double(tr.energy[k]),
                                       fmt_double(tr.entropy[k]),
                                       fmt_double(tr.clipped_mass[k])};
        for (std::size_t qi = 0; qi < tr.qs.size(); ++qi) {
            cells.push_back(fmt_double(tr.sup_weighted[qi][k]));
            cells.push_back(fmt_double(tr.l1_weighted[qi][k]));
        }
        w.row(cells);
    }
}

template <int D>
void write_contact_scan_csv(const std::string& path, const ContactScan<D>& scan,
                            const Barrier& b) {
    CsvWriter w(path);
    w.row({"t0", "v0_index", "margin", "contact_found", "dtg", "q_total", "good",
           "bad1", "bad2", "bad3", "q_ns", "contradiction_held",
           "barrier_form", "barrier_q", "N_min_form", "N_one_plus_form_factor"});
    w.row({fmt_double(scan.t0), std::to_string(scan.v0_index), fmt_double(scan.margin),
           scan.contact_found ? "yes" : "no", fmt_double(scan.dtg),
           fmt_double(scan.rhs_breakdown.total.value),
           fmt_double(scan.rhs_breakdown.good.value),
           fmt_double(scan.rhs_breakdown.bad1.value),
           fmt_double(scan.rhs_breakdown.bad2.value),
           fmt_double(scan.rhs_breakdown.bad3.value),
           fmt_double(scan.rhs_breakdown.q_ns_term.value),
           scan.contradiction_inequality_held ? "yes" : "no", to_string(b.form),
           fmt_double(b.q), fmt_double(b.N.N0), fmt_double(b.equivalence_factor())});
}

inline void write_manifest(const std::string& path, const std::string& command,
                           const std::string& config_dump) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write manifest: " + path);
    os << "command = " << command << "\n";
    os << "version = kinetic-barrier " << kVersion << "\n";
    os << "# resolved configuration\n" << config_dump;
}

}  // namespace kb
