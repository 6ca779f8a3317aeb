#pragma once

// Potential term q of the differential expression  -y'' + q y.  Square
// integrability is all the solver needs, so the representations are kept
// simple: zero, piecewise constant, linearly interpolated samples, or an
// arbitrary callable (library construction only; files cannot carry code).

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sltc {

class Potential {
public:
    enum class Kind { Zero, PiecewiseConstant, Sampled, ClosedForm };

    Potential() = default;  // identically zero

    static Potential zero() { return Potential(); }

    // values[k] on (breaks[k-1], breaks[k]); values has one more entry than breaks
    static Potential piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
        if (values.size() != breaks.size() + 1)
            throw std::invalid_argument("piecewise potential needs one more value than breakpoints");
        for (std::size_t i = 1; i < breaks.size(); ++i)
            if (!(breaks[i] > breaks[i - 1]))
                throw std::invalid_argument("potential breakpoints must be strictly increasing");
        Potential p;
        p.kind_ = Kind::PiecewiseConstant;
        p.breaks_ = std::move(breaks);
        p.values_ = std::move(values);
        return p;
    }

    // linear interpolation through (grid[k], values[k]); constant beyond the ends
    static Potential sampled(std::vector<double> grid, std::vector<double> values) {
        if (grid.size() != values.size() || grid.size() < 2)
            throw std::invalid_argument("sampled potential needs matching grid/value arrays");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw std::invalid_argument("sample grid must be strictly increasing");
        Potential p;
        p.kind_ = Kind::Sampled;
        p.breaks_ = std::move(grid);
        p.values_ = std::move(values);
        return p;
    }

    static Potential closed_form(std::function<double(double)> f) {
        Potential p;
        p.kind_ = Kind::ClosedForm;
        p.fn_ = std::move(f);
        return p;
    }

    Kind kind() const { return kind_; }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::Zero:
                return 0.0;
            case Kind::PiecewiseConstant: {
                auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
                return values_[static_cast<std::size_t>(it - breaks_.begin())];
            }
            case Kind::Sampled: {
                if (x <= breaks_.front()) return values_.front();
                if (x >= breaks_.back()) return values_.back();
                auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
                std::size_t k = static_cast<std::size_t>(it - breaks_.begin());
                double t = (x - breaks_[k - 1]) / (breaks_[k] - breaks_[k - 1]);
                return values_[k - 1] + t * (values_[k] - values_[k - 1]);
            }
            case Kind::ClosedForm:
                return fn_(x);
        }
        return 0.0;
    }

    // abscissae in (lo, hi) where smoothness breaks; the integrator restarts
    // steps there so discontinuities never sit inside a step
    std::vector<double> interior_breakpoints(double lo, double hi) const {
        std::vector<double> out;
        if (kind_ == Kind::PiecewiseConstant || kind_ == Kind::Sampled) {
            for (double b : breaks_)
                if (b > lo && b < hi) out.push_back(b);
        }
        return out;
    }

private:
    Kind kind_ = Kind::Zero;
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::function<double(double)> fn_;
};

}  // namespace sltc
