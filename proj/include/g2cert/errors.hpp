#ifndef G2CERT_ERRORS_HPP
#define G2CERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace g2cert {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct not_prime_error : error {
    explicit not_prime_error(const std::string& m) : error(m) {}
};
struct unsupported_characteristic_error : error {
    explicit unsupported_characteristic_error(const std::string& m) : error(m) {}
};
struct division_by_zero_error : error {
    explicit division_by_zero_error(const std::string& m) : error(m) {}
};
struct context_mismatch_error : error {
    explicit context_mismatch_error(const std::string& m) : error(m) {}
};
struct non_split_spectrum_error : error {
    explicit non_split_spectrum_error(const std::string& m) : error(m) {}
};
struct singular_matrix_error : error {
    explicit singular_matrix_error(const std::string& m) : error(m) {}
};
struct form_space_error : error {
    explicit form_space_error(const std::string& m) : error(m) {}
};
struct zero_torus_parameter_error : error {
    explicit zero_torus_parameter_error(const std::string& m) : error(m) {}
};
struct resource_guard_error : error {
    explicit resource_guard_error(const std::string& m) : error(m) {}
};
struct singular_input_error : error {
    explicit singular_input_error(const std::string& m) : error(m) {}
};
struct retries_exhausted_error : error {
    explicit retries_exhausted_error(const std::string& m) : error(m) {}
};
struct trials_exhausted_error : error {
    explicit trials_exhausted_error(const std::string& m) : error(m) {}
};
struct unsupported_ell_error : error {
    explicit unsupported_ell_error(const std::string& m) : error(m) {}
};
struct no_solution_error : error {
    explicit no_solution_error(const std::string& m) : error(m) {}
};
struct bad_prime_error : error {
    explicit bad_prime_error(const std::string& m) : error(m) {}
};
struct zero_vector_error : error {
    explicit zero_vector_error(const std::string& m) : error(m) {}
};
struct wrong_charpoly_error : error {
    explicit wrong_charpoly_error(const std::string& m) : error(m) {}
};
struct precondition_error : error {
    explicit precondition_error(const std::string& m) : error(m) {}
};
struct zero_argument_error : error {
    explicit zero_argument_error(const std::string& m) : error(m) {}
};
struct factorization_failed_error : error {
    explicit factorization_failed_error(const std::string& m) : error(m) {}
};
struct excluded_prime_error : error {
    explicit excluded_prime_error(const std::string& m) : error(m) {}
};

} // namespace g2cert

#endif
