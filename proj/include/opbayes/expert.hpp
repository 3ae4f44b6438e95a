// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opbayes {

/// A panel of point opinions about one model parameter plus the shared
/// credibility parameter xi. Opinions carry the units of the estimated
/// parameter: positive intensities / tail indices in the frequency and Pareto
/// models, real location values in the lognormal model (positivity is
/// enforced by those models, not here). xi is unused when the panel is empty.
class ExpertPanel {
public:
    ExpertPanel() = default;

    ExpertPanel(std::vector<double> opinions, double xi)
        : opinions_(std::move(opinions)), xi_(xi) {
        for (double v : opinions_)
            if (!std::isfinite(v)) throw std::domain_error("ExpertPanel: opinions must be finite");
        if (!opinions_.empty() && (!(xi_ > 0.0) || !std::isfinite(xi_)))
            throw std::domain_error("ExpertPanel: xi must be positive when opinions are present");
    }

    static ExpertPanel none() { return ExpertPanel(); }

    bool empty() const { return opinions_.empty(); }
    std::size_t size() const { return opinions_.size(); }
    double xi() const { return xi_; }
    const std::vector<double>& opinions() const { return opinions_; }

    /// Arithmetic mean of the opinions (left-to-right accumulation).
    double opinion_mean() const {
        if (opinions_.empty()) throw std::domain_error("ExpertPanel: mean of empty panel");
        double s = 0.0;
        for (double v : opinions_) s += v;
        return s / static_cast<double>(opinions_.size());
    }

    void require_positive_opinions(const char* model) const {
        for (double v : opinions_)
            if (!(v > 0.0))
                throw std::domain_error(std::string(model) +
                                        ": expert opinions must be positive in this model");
    }

private:
    std::vector<double> opinions_;
    double xi_ = 1.0;
};

}  // namespace opbayes
