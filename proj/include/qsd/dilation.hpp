// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSD_DILATION_HPP
#define QSD_DILATION_HPP

#include <cstdint>
#include <vector>

#include "qsd/quantum.hpp"

namespace qsd {

/// One rank-1 piece of a POVM element: vector = sqrt(sigma) * l with l a unit
/// eigenvector of element `element`.
struct Rank1Term {
    std::size_t element = 0;
    std::size_t within = 0;
    double sigma = 0.0;
    CVector vector;
};

struct Rank1Decomposition {
    std::size_t dim = 0;
    /// Label of every POVM element, in element order.
    std::vector<Label> element_labels;
    /// Grouped by element; sigma descending within each group.
    std::vector<Rank1Term> terms;
    std::vector<std::size_t> per_element_rank;
    /// Threshold applied by truncate(); 0 when untruncated.
    double delta = 0.0;

    std::size_t total_rank() const { return terms.size(); }
};

/// Eigenpairs with eigenvalue > rank_tol are kept. The default keeps every
/// strictly positive component so that the exact dilation is an isometry to
/// machine precision; use truncate() to drop small components.
Rank1Decomposition decompose_rank1(const Povm &povm, double rank_tol = 0.0);

/// Removes the terms with sigma < delta. No renormalization, so the
/// resulting map is in general a contraction rather than an isometry.
Rank1Decomposition truncate(const Rank1Decomposition &dec, double delta);

struct DilationResult {
    std::size_t domain_dim = 0;
    /// Number of rank-1 terms actually encoded.
    std::size_t total_rank = 0;
    int domain_qubits = 0;
    int target_qubits = 0;
    /// 2^target_qubits x domain_dim.
    CMatrix isometry;
    /// Label of every computational-basis outcome of the target register.
    std::vector<Label> outcome_map;
    /// Labels of the POVM elements the dilation was built from.
    std::vector<Label> element_labels;
    double delta = 0.0;

    std::size_t target_dim() const { return static_cast<std::size_t>(isometry.rows()); }
    int ancilla_qubits() const { return target_qubits - domain_qubits; }
};

/// V = sum_l |l><f_l| with the terms of `dec` in order, so outcome l of a
/// computational-basis measurement records the element of term l. Rows from
/// total_rank on are zero and map to the residual label.
DilationResult build_isometry(const Rank1Decomposition &dec);

/// Baseline V = sum_i sqrt(Pi_i) (x) |i> on dimension k * d, padded to a
/// power of two. Row index = system_index * k + i.
DilationResult build_isometry_generic(const Povm &povm);

struct DilationReport {
    /// max |V^dagger V - I| entrywise.
    double isometry_deviation = 0.0;
    /// max over test states and POVM elements of
    /// |sum_{b -> label} <b|V rho V^dagger|b> - Tr(rho Pi_label)|.
    double max_probability_deviation = 0.0;
    std::size_t states_checked = 0;
};

/// Checks the dilation against `povm` on the maximally mixed state, every
/// computational basis state and `random_states` seeded random states.
DilationReport verify_dilation(const DilationResult &dil, const Povm &povm, std::size_t random_states = 10,
                               std::uint64_t seed = 7);

struct OutcomeCounts {
    /// Conclusive labels in index order, then the inconclusive label if any
    /// basis outcome carries it, then the residual label.
    std::vector<Label> labels;
    std::vector<double> probabilities;
    /// Empty when shots == 0.
    std::vector<std::uint64_t> counts;

    double probability(const Label &label) const;
};

/// Exact outcome probabilities through the dilation, aggregated by label.
/// The residual entry collects basis outcomes mapped to Residual plus the
/// truncation deficit 1 - Tr(V rho V^dagger). With shots > 0 the counts are a
/// multinomial draw that is a pure function of (probabilities, shots, seed).
OutcomeCounts simulate_measurement(const DilationResult &dil, const DensityMatrix &rho, std::uint64_t shots = 0,
                                   std::uint64_t seed = 0);
OutcomeCounts simulate_measurement(const DilationResult &dil, const PureState &psi, std::uint64_t shots = 0,
                                   std::uint64_t seed = 0);

/// Square unitary whose first domain_dim columns are the isometry (after
/// polar re-orthonormalization when the dilation was truncated). The
/// remaining columns span the orthogonal complement.
CMatrix complete_to_unitary(const DilationResult &dil);

/// Multinomial counts for `shots` draws from `probabilities` (need not be
/// exactly normalized; negative entries are treated as 0).
std::vector<std::uint64_t> sample_multinomial(const std::vector<double> &probabilities, std::uint64_t shots,
                                              std::uint64_t seed);

}  // namespace qsd

#endif
