#ifndef ORBZETA_IO_HPP
#define ORBZETA_IO_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "orbzeta/dims.hpp"

namespace orbzeta {

inline constexpr const char* kToolVersion = "orbzeta 1.0.0";

// Decimal with 17 significant digits (round-trippable binary64).
std::string format_g17(double v);

// Flat key=value configuration; section headers in files are cosmetic.
// Every value read through get() is recorded with its resolved default and
// echoed into output headers.
class RunConfig {
public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;

    // all keys touched so far with their resolved values, sorted
    const std::map<std::string, std::string>& resolved() const { return resolved_; }

    static RunConfig from_file(const std::string& path);

private:
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, std::string> resolved_;
};

std::uint64_t fnv1a64(const std::string& data);

// Deterministic parallel map: f(i) for i in [0, n), results ordered by i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

// TubeSample series CSV with header eps,value,kind (17 significant digits).
std::string tube_series_csv(const TubeSeries& series);

// Structured text reports.
std::string dimension_report(const std::vector<ComplexDimension>& dims);
std::string meromorphic_report(const MeromorphicFn& fn);
std::string fit_report_csv(const FitResult& fit);

} // namespace orbzeta

#endif
