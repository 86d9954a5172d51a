#pragma once

#include "jkit/gauge.hpp"

namespace jkit {

// The pair contact groupoid M x R x M over a contact base: source pr3,
// target pr1, multiplication (x,t,y)(y,s,z) = (x,t+s,z), sigma = t and
// eta = e^sigma pr3* eta_base - pr1* eta_base.
struct PairGroupoid {
    ContactForm base_eta;
    Chart base;
    Chart total;             // left copy, t, right copy
    SmoothMap alpha_map;     // source: pr3
    SmoothMap beta_map;      // target: pr1
    Scalar sigma;            // the t coordinate
    Tensor eta_g;            // contact form on the total chart
    int t_index() const { return base.dim(); }
};

PairGroupoid build_pair_groupoid(const ContactForm& eta,
                                 const std::vector<Point>& total_samples = {});

// eta_{gh}(X ._TG Y) = eta_g(X) + e^{sigma(g)} eta_h(Y), expanded over
// symbolic composable points and tangent components.
bool verify_multiplicative(const PairGroupoid& g, const Tensor& form);

// sigma(gh) = sigma(g) + sigma(h), symbolically.
bool verify_sigma_multiplicative(const PairGroupoid& g);

// eta - e^sigma alpha* B + beta* B; requires B admissible for the base.
PairGroupoid gauge_groupoid_contact(const PairGroupoid& g, const Tensor& b_base,
                                    const std::vector<Point>& base_samples,
                                    const std::vector<Point>& total_samples = {});

struct KernelCheckReport {
    bool containment = false;  // hamiltonian fields land in the kernels
    bool span_match = false;   // and span them
};

// ker(d alpha) = {X_{beta* f}} and ker(d beta) = {X_{e^sigma alpha* f}} at the
// samples.  Probes are enriched with pairwise products to realize all jet
// directions; throws when the enriched span still falls short.
KernelCheckReport check_source_target_kernels(const PairGroupoid& g,
                                              const std::vector<Scalar>& probes,
                                              const std::vector<Point>& samples);

}  // namespace jkit
