#include "glsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace glsim {

const char* const kCodeVersion = "0.1.0";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json Json::null() { return Json(); }

Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::Bool;
    j.b_ = v;
    return j;
}

Json Json::integer(std::int64_t v) {
    Json j;
    j.kind_ = Kind::Int;
    j.i_ = v;
    return j;
}

Json Json::real(double v) {
    if (!std::isfinite(v)) return null();
    Json j;
    j.kind_ = Kind::Real;
    j.d_ = v;
    return j;
}

Json Json::str(std::string v) {
    Json j;
    j.kind_ = Kind::Str;
    j.s_ = std::move(v);
    return j;
}

Json Json::array() {
    Json j;
    j.kind_ = Kind::Arr;
    return j;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Obj;
    return j;
}

Json Json::array_of(const std::vector<double>& vs) {
    Json j = array();
    for (double v : vs) j.push(real(v));
    return j;
}

Json& Json::set(const std::string& key, Json v) {
    if (kind_ != Kind::Obj) throw std::logic_error("Json::set on non-object");
    for (auto& kv : fields_) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return *this;
        }
    }
    fields_.emplace_back(key, std::move(v));
    return *this;
}

Json& Json::push(Json v) {
    if (kind_ != Kind::Arr) throw std::logic_error("Json::push on non-array");
    items_.push_back(std::move(v));
    return *this;
}

namespace {

void dump_string(std::ostream& os, const std::string& s) {
    os << '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            case '\r': os << "\\r"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    os << buf;
                } else {
                    os << static_cast<char>(c);
                }
        }
    }
    os << '"';
}

}  // namespace

void Json::dump(std::ostream& os) const {
    switch (kind_) {
        case Kind::Null: os << "null"; break;
        case Kind::Bool: os << (b_ ? "true" : "false"); break;
        case Kind::Int: os << i_; break;
        case Kind::Real: os << format_double(d_); break;
        case Kind::Str: dump_string(os, s_); break;
        case Kind::Arr: {
            os << '[';
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (i) os << ',';
                items_[i].dump(os);
            }
            os << ']';
            break;
        }
        case Kind::Obj: {
            os << '{';
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                if (i) os << ',';
                dump_string(os, fields_[i].first);
                os << ':';
                fields_[i].second.dump(os);
            }
            os << '}';
            break;
        }
    }
}

std::string Json::dump() const {
    std::ostringstream os;
    dump(os);
    return os.str();
}

Json config_json(const SimConfig& cfg) {
    Json j = Json::object();
    j.set("K", Json::integer(cfg.K));
    j.set("dt", Json::real(cfg.dt));
    j.set("T", Json::real(cfg.T));
    j.set("alpha", Json::real(cfg.alpha));
    j.set("beta", Json::real(cfg.beta));
    j.set("delta", Json::real(cfg.delta));
    j.set("p", Json::real(cfg.p));
    j.set("record_stride", Json::integer(cfg.record_stride));
    j.set("noise_scale", Json::real(cfg.noise_scale));
    return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "time,normH,normHdelta,normY,normZV";
    for (const auto& kv : traj.functional_track) os << ',' << kv.first;
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << format_double(traj.times[i]) << ',' << format_double(traj.norm_x_h[i]) << ','
           << format_double(traj.norm_x_h_delta[i]) << ',' << format_double(traj.norm_y_h[i])
           << ',' << format_double(traj.norm_z_v[i]);
        for (const auto& kv : traj.functional_track) os << ',' << format_double(kv.second[i]);
        os << '\n';
    }
}

void write_survival_csv(std::ostream& os, const std::vector<SurvivalPoint>& curve) {
    os << "n,count,survival\n";
    for (const auto& pt : curve) {
        os << pt.n << ',' << pt.count << ',' << format_double(pt.survival) << '\n';
    }
}

void write_manifest(const std::string& path, const std::string& experiment,
                    const Json& resolved_config, double wall_seconds) {
    Json j = Json::object();
    j.set("experiment", Json::str(experiment));
    j.set("config", resolved_config);
    j.set("code_version", Json::str(kCodeVersion));
    j.set("wall_seconds", Json::real(wall_seconds));
    write_text_file(path, j.dump() + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace glsim
