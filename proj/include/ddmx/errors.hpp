#ifndef DDMX_ERRORS_HPP
#define DDMX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddmx {

/// Bad configuration (unknown key, invalid value, violated constraint).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated mathematical precondition (nonzero mean, lost positivity, ...).
class constraint_error : public std::runtime_error {
public:
    explicit constraint_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite data where finite values are required.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// CFL exhaustion: the step size was halved 20 times and is still unstable.
class blowup_error : public std::runtime_error {
public:
    blowup_error(double time, double linf_rho, const std::string& msg)
        : std::runtime_error(msg), time(time), linf_rho(linf_rho) {}
    double time;
    double linf_rho;
};

} // namespace ddmx

#endif
