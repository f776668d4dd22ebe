#ifndef ORBZETA_MEROMORPHIC_HPP
#define ORBZETA_MEROMORPHIC_HPP

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "orbzeta/specfun.hpp"

namespace orbzeta {

// Laurent data at one pole; laurent[q-1] holds c_{-q}.
struct PrincipalTerm {
    Cx pole;
    int order = 1;
    std::vector<Cx> laurent;
    bool cancelled = false;
};

// An evaluable meromorphic continuation: structured principal parts plus a
// convergent evaluator with a validity half-plane {Re s > sigma_min}.
class MeromorphicFn {
public:
    MeromorphicFn() = default;
    MeromorphicFn(std::function<Cx(Cx)> eval, double sigma_min, int truncation,
                  std::vector<PrincipalTerm> structure, std::string backend)
        : eval_(std::move(eval)),
          sigma_min_(sigma_min),
          truncation_(truncation),
          structure_(std::move(structure)),
          backend_(std::move(backend)) {}

    Cx operator()(Cx s) const {
        if (s.real() <= sigma_min_)
            throw OutOfHalfPlane("MeromorphicFn: Re s outside validity half-plane");
        return eval_(s);
    }

    double sigma_min() const { return sigma_min_; }
    int truncation() const { return truncation_; }
    const std::vector<PrincipalTerm>& structure() const { return structure_; }
    const std::string& backend() const { return backend_; }

private:
    std::function<Cx(Cx)> eval_;
    double sigma_min_ = -1e300;
    int truncation_ = 0;
    std::vector<PrincipalTerm> structure_;
    std::string backend_;
};

} // namespace orbzeta

#endif
