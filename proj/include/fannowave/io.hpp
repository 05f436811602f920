// Bit-stable serialization: every floating-point number is printed as the
// shortest decimal string that parses back to the same double, so identical
// runs emit identical bytes and values round-trip exactly. JSON is written by
// a small streaming writer with caller-fixed key order; CSV is
// comma-separated with a header row and LF line endings.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fannowave/config.hpp"

namespace fannowave {

std::string format_num(double v);

class JsonWriter {
  public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);  // non-finite values are emitted as quoted strings
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(long long v);
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    void finish();  // closes with a trailing newline; containers must be balanced

  private:
    void item_prefix();
    void indent(size_t depth);

    std::ostream& os_;
    struct Level {
        bool object;
        int count;
    };
    std::vector<Level> levels_;
    bool after_key_ = false;
};

void write_profile_csv(std::ostream& os, const SteadyProfile& p);
void write_field_csv(std::ostream& os, const PeriodicField& f);
// t, x, phi1, phi2, phi3 plus the reconstructed primitive state rho, u, S.
void write_traj_csv(std::ostream& os, const WindowField& traj, const SteadyProfile& profile);

void write_error_json(std::ostream& os, const std::string& type, const std::string& message);

void write_steady_json(std::ostream& os, const SimConfig& cfg, const SteadyProfile& p);
void write_lmax_json(std::ostream& os, const SimConfig& cfg, double lmax);
void write_build_report_json(std::ostream& os, const SimConfig& cfg, const BuildReport& rep);
void write_simulate_json(std::ostream& os, const SimConfig& cfg, const CflCertificate& cert,
                         double t_final);
void write_stability_json(std::ostream& os, const SimConfig& cfg, const StabilityReport& rep);
void write_xvalidate_json(std::ostream& os, const SimConfig& cfg, const CrossValidation& coarse,
                          const CrossValidation* refined, int refine_factor);

}  // namespace fannowave
