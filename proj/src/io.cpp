#include "orbzeta/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace orbzeta {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    const std::string v = (it == kv_.end()) ? fallback : it->second;
    resolved_[key] = v;
    return v;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const std::string v = get(key, format_g17(fallback));
    try {
        return std::stod(v);
    } catch (...) {
        throw DomainError("config: key '" + key + "' is not a number: " + v);
    }
}

long RunConfig::get_long(const std::string& key, long fallback) const {
    const std::string v = get(key, std::to_string(fallback));
    try {
        return std::stol(v);
    } catch (...) {
        throw DomainError("config: key '" + key + "' is not an integer: " + v);
    }
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') continue; // section header, cosmetic
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("config: expected key=value: " + line);
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        const auto vb = val.find_first_not_of(" \t");
        val = (vb == std::string::npos) ? "" : val.substr(vb);
        cfg.set(key, val);
    }
    return cfg;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string tube_series_csv(const TubeSeries& series) {
    std::ostringstream out;
    out << "eps,value,kind\n";
    std::string kind = "V";
    if (series.kind == TubeKind::Vc) kind = "Vc";
    if (series.kind == TubeKind::Primitive)
        kind = "Primitive(" + std::to_string(series.primitive_order) + ")";
    for (std::size_t i = 0; i < series.eps.size(); ++i) {
        out << format_g17(series.eps[i]) << "," << format_g17(series.value[i]) << "," << kind
            << "\n";
    }
    return out.str();
}

std::string dimension_report(const std::vector<ComplexDimension>& dims) {
    std::ostringstream out;
    out << "# location_re location_im order laurent... cancelled\n";
    for (const auto& d : dims) {
        out << format_g17(d.location.real()) << " " << format_g17(d.location.imag()) << " "
            << d.order;
        for (const Cx& cc : d.principal)
            out << " " << format_g17(cc.real()) << (cc.imag() >= 0 ? "+" : "")
                << format_g17(cc.imag()) << "i";
        out << " " << (d.cancelled ? "cancelled" : "-") << "\n";
    }
    return out.str();
}

std::string meromorphic_report(const MeromorphicFn& fn) {
    std::ostringstream out;
    out << "backend: " << fn.backend() << "\n";
    out << "truncation M: " << fn.truncation() << "\n";
    out << "validity: Re s > " << format_g17(fn.sigma_min()) << "\n";
    out << "poles (location_re location_im order laurent... cancelled):\n";
    for (const auto& t : fn.structure()) {
        out << "  " << format_g17(t.pole.real()) << " " << format_g17(t.pole.imag()) << " "
            << t.order;
        for (const Cx& cc : t.laurent)
            out << " " << format_g17(cc.real()) << (cc.imag() >= 0 ? "+" : "")
                << format_g17(cc.imag()) << "i";
        out << " " << (t.cancelled ? "cancelled" : "-") << "\n";
    }
    return out.str();
}

std::string fit_report_csv(const FitResult& fit) {
    std::ostringstream out;
    out << "# residual_norm=" << format_g17(fit.residual_norm)
        << " condition_number=" << format_g17(fit.condition_number)
        << " reliable=" << (fit.reliable ? 1 : 0) << "\n";
    out << "exponent,log_power,coefficient\n";
    for (std::size_t i = 0; i < fit.basis.size(); ++i) {
        out << format_g17(fit.basis[i].exponent) << "," << fit.basis[i].log_power << ","
            << format_g17(fit.coefficients[i]) << "\n";
    }
    return out.str();
}

} // namespace orbzeta
