#pragma once
// Report serialization: JSON values with insertion-ordered keys and
// 17-significant-digit doubles (so equal runs produce byte-equal files),
// CSV writers for trajectories and survival curves, and the run manifest.
// The manifest carries wall time and is written to its own file so that
// report files stay byte-comparable across runs.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "glsim/ergodic_stats.hpp"
#include "glsim/gl_integrator.hpp"

namespace glsim {

extern const char* const kCodeVersion;

// %.17g; round-trips any finite double. Non-finite values are the caller's
// problem; Json::real maps them to null.
std::string format_double(double v);

class Json {
public:
    static Json null();
    static Json boolean(bool v);
    static Json integer(std::int64_t v);
    static Json real(double v);  // non-finite becomes null
    static Json str(std::string v);
    static Json array();
    static Json object();
    static Json array_of(const std::vector<double>& vs);

    Json& set(const std::string& key, Json v);  // object only; keeps insertion order
    Json& push(Json v);                         // array only

    void dump(std::ostream& os) const;
    std::string dump() const;

private:
    enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };
    Kind kind_ = Kind::Null;
    bool b_ = false;
    std::int64_t i_ = 0;
    double d_ = 0.0;
    std::string s_;
    std::vector<Json> items_;
    std::vector<std::pair<std::string, Json>> fields_;
};

// Resolved configuration echo used by manifests and report headers.
Json config_json(const SimConfig& cfg);

// One row per record: time,normH,normHdelta,normY,normZV then tracked
// functionals in name order.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Header n,count,survival.
void write_survival_csv(std::ostream& os, const std::vector<SurvivalPoint>& curve);

// Separate-file run manifest: experiment name, resolved config, code version,
// wall time. Never byte-compared across runs.
void write_manifest(const std::string& path, const std::string& experiment,
                    const Json& resolved_config, double wall_seconds);

// Opens for writing, throws std::runtime_error when the file cannot be created.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace glsim
