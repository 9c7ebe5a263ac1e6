#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace ndlimit {

/// Error thrown when a physical parameter falls outside its admissible
/// window. The message names the parameter and the window.
class ParamWindowError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Physical parameters of the constrained Dirac problem and the example
/// potential family K(x) = exp(-a|x|), P(x) = 1/(1+|x|^mu), Gamma(x)=|x|^-tau.
///
/// Admissible windows (validated at construction):
///   m > 0, c > 0, kappa in [2, 7/3), s in (2, 8/3],
///   a > 0, mu in (0, (10-3s)/2), tau in (0, 7-3kappa).
struct PhysParams {
    double m = 1.0;
    double c = 8.0;
    double kappa = 2.0;
    double s = 2.5;
    double a = 0.2;
    double mu = 1.0;
    double tau = 0.5;

    PhysParams() = default;
    PhysParams(double m_, double c_, double kappa_, double s_, double a_,
               double mu_, double tau_)
        : m(m_), c(c_), kappa(kappa_), s(s_), a(a_), mu(mu_), tau(tau_) {
        validate();
    }

    double mc2() const { return m * c * c; }

    double mu_upper() const { return (10.0 - 3.0 * s) / 2.0; }
    double tau_upper() const { return 7.0 - 3.0 * kappa; }

    void validate() const {
        auto fail = [](const std::string& key, double value, const std::string& window) {
            std::ostringstream os;
            os << "parameter '" << key << "' = " << value
               << " outside admissible window " << window;
            throw ParamWindowError(os.str());
        };
        if (!(m > 0.0)) fail("m", m, "(0, inf)");
        if (!(c > 0.0)) fail("c", c, "(0, inf)");
        if (!(kappa >= 2.0 && kappa < 7.0 / 3.0)) fail("kappa", kappa, "[2, 7/3)");
        if (!(s > 2.0 && s <= 8.0 / 3.0)) fail("s", s, "(2, 8/3]");
        if (!(a > 0.0)) fail("a", a, "(0, inf)");
        if (!(mu > 0.0 && mu < mu_upper())) {
            std::ostringstream w;
            w << "(0, " << mu_upper() << ") = (0, (10-3s)/2)";
            fail("mu", mu, w.str());
        }
        if (!(tau > 0.0 && tau < tau_upper())) {
            std::ostringstream w;
            w << "(0, " << tau_upper() << ") = (0, 7-3kappa)";
            fail("tau", tau, w.str());
        }
    }

    PhysParams with_c(double c_new) const {
        PhysParams p = *this;
        p.c = c_new;
        return p;
    }
};

}  // namespace ndlimit
