#pragma once

namespace flni {

/// The penalty triple (lambda_f, lambda_l, lambda_ni): fusion weight on
/// |beta_i - beta_j| per edge, lasso weight on |beta_i| per vertex, and the
/// one-sided weight on (beta_i - beta_j)_+ per edge.
struct Penalties {
    double lambda_f = 0.0;
    double lambda_l = 0.0;
    double lambda_ni = 0.0;

    /// Throws std::invalid_argument unless all three are finite and >= 0.
    void validate() const;

    friend bool operator==(const Penalties&, const Penalties&) = default;
};

}  // namespace flni
