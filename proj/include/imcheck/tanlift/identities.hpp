#pragma once

#include <vector>

#include "imcheck/cartan/identities.hpp"
#include "imcheck/tanlift/tangent.hpp"

namespace imcheck::tanlift {

/// τ from the symmetric-coefficient expansion
/// τ(α) = 1/(k−1)! Σ α_{i1…ik} ẋ^{i1} dx^{i2}∧…∧dx^{ik}, summing over all
/// ordered index tuples.
KForm tau_coordinate(const TangentChart& tm, const KForm& a);

/// (dx^{i1}∧…∧dx^{ik})_T as Σ_n dx^{i1}∧…∧dẋ^{in}∧…∧dx^{ik}.
KForm basis_lift_expansion(const TangentChart& tm, const cartan::Indices& indices);

/// Lift rules for functions and products, basis expansion, the τ formula for
/// α_T, commutation with d, τ and α_T for 2-forms through ω♯, and the
/// sharp-map construction of α_T.
std::vector<cartan::Identity> tangent_identities();

}  // namespace imcheck::tanlift
