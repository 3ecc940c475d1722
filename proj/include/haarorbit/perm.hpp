#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "haarorbit/errors.hpp"
#include "haarorbit/exact.hpp"

namespace haarorbit {

/// Hard cap on the symmetric-group degree handled anywhere in the library.
inline constexpr int kMaxDegree = 12;

/// Conjugacy class of S_p, encoded as the integer partition of p given by the
/// cycle lengths in non-increasing order.
class CycleType {
public:
    explicit CycleType(std::vector<int> parts);

    int p() const { return p_; }
    int cycle_count() const { return static_cast<int>(parts_.size()); }
    int transposition_distance() const { return p_ - cycle_count(); }
    bool is_derangement() const { return parts_.empty() ? false : parts_.back() >= 2; }
    bool is_perfect_matching() const;
    const std::vector<int>& parts() const { return parts_; }

    /// "3,1" style label used by the CLI.
    std::string to_string() const;
    static CycleType parse(const std::string& label);

    bool operator==(const CycleType& other) const { return parts_ == other.parts_; }
    /// Canonical order: descending lexicographic on parts ([4] < [3,1] < ... < [1,1,1,1]).
    bool operator<(const CycleType& other) const { return parts_ > other.parts_; }

private:
    std::vector<int> parts_;
    int p_ = 0;
};

/// Permutation of {0,...,p-1} in one-line notation: images[i] is where i maps.
struct Permutation {
    std::vector<int> images;

    static Permutation identity(int p);
    int degree() const { return static_cast<int>(images.size()); }

    /// (a.compose(b))(i) = a(b(i)): b acts first.
    Permutation compose(const Permutation& other) const;
    Permutation inverse() const;
    CycleType cycle_type() const;

    bool operator==(const Permutation&) const = default;
};

/// All partitions of p in canonical (descending lexicographic) order.
/// The count equals the partition function value; 1 <= p <= kMaxDegree.
std::vector<CycleType> partitions(int p);

/// Number of permutations of S_p with the given cycle type: p! / prod_j j^{m_j} m_j!.
Integer class_size(const CycleType& type);

/// Product of Catalan numbers Cat_{part-1} over the cycle lengths; governs the
/// leading 1/d order of the Weingarten function of the class.
Integer mobius_coefficient(const CycleType& type);

Integer catalan(int n);

/// Unsigned Stirling number of the first kind: permutations of S_p with exactly m cycles.
Integer stirling_first_unsigned(int p, int m);

/// Number of fixed-point-free permutations of S_p.
Integer derangement_count(int p);

/// ceil(p!/e) for p >= 1; exact via the derangement count (the fractional part
/// of p!/e lies below 1/2 exactly when p is even).
Integer ceil_factorial_over_e(int p);

/// (p-1)!! for p even, 0 for p odd: derangements made of 2-cycles only.
Integer perfect_matching_count(int p);

/// Fixed-point-free classes (all parts >= 2) with their sizes, canonical order.
std::vector<std::pair<CycleType, Integer>> derangement_classes(int p);

/// distance k -> number of derangements of S_p at transposition distance k.
std::map<int, Integer> derangements_by_distance(int p);

namespace detail {

void check_degree(int p);

/// Cycle type of a raw one-line permutation; writes parts (descending) into
/// `parts_out` (capacity >= p) and returns the cycle count.
int cycle_type_of(const int* images, int p, int* parts_out);

int cycle_count_of(const int* images, int p);

/// Packs a descending parts list into a uint64 key (4 bits per part, p <= 12).
std::uint64_t pack_parts(const int* parts, int count);

/// Canonical representative of a class: consecutive cycles (0 1 .. a1-1)(a1 ..) ...
Permutation representative(const CycleType& type);

template <class F>
void for_each_permutation(int p, F&& f) {
    check_degree(p);
    std::vector<int> img(p);
    for (int i = 0; i < p; ++i) img[i] = i;
    do {
        f(img.data());
    } while (std::next_permutation(img.begin(), img.end()));
}

template <class F>
void for_each_derangement_impl(std::vector<int>& img, std::uint32_t used, int pos, int p, F& f) {
    if (pos == p) {
        f(img.data());
        return;
    }
    for (int v = 0; v < p; ++v) {
        if (v == pos || (used >> v) & 1u) continue;
        img[pos] = v;
        for_each_derangement_impl(img, used | (1u << v), pos + 1, p, f);
    }
}

/// Enumerates fixed-point-free permutations in lexicographic order without
/// materializing them; the visitor receives the raw one-line array.
template <class F>
void for_each_derangement(int p, F&& f) {
    check_degree(p);
    if (p < 2) return;
    std::vector<int> img(p);
    for_each_derangement_impl(img, 0u, 0, p, f);
}

} // namespace detail

/// Maps cycle types of S_p to their index in the canonical partitions(p) list.
class ClassIndex {
public:
    explicit ClassIndex(int p);

    int p() const { return p_; }
    const std::vector<CycleType>& classes() const { return classes_; }
    int size() const { return static_cast<int>(classes_.size()); }
    int index_of(const CycleType& type) const;
    /// Index from a raw descending parts array (hot path, no allocation).
    int index_of_parts(const int* parts, int count) const;
    /// Cycle-type index of a raw permutation.
    int index_of_permutation(const int* images) const;

private:
    int p_;
    std::vector<CycleType> classes_;
    std::map<std::uint64_t, int> lookup_;
};

} // namespace haarorbit
