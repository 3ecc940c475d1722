#include "haarorbit/perm.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace haarorbit {

namespace detail {

void check_degree(int p) {
    if (p < 1) throw ConditionError("degree must be positive, got " + std::to_string(p));
    if (p > kMaxDegree)
        throw ResourceError("degree " + std::to_string(p) + " exceeds hard cap " +
                            std::to_string(kMaxDegree));
}

int cycle_type_of(const int* images, int p, int* parts_out) {
    std::uint32_t seen = 0;
    int count = 0;
    for (int i = 0; i < p; ++i) {
        if ((seen >> i) & 1u) continue;
        int len = 0;
        int j = i;
        do {
            seen |= 1u << j;
            j = images[j];
            ++len;
        } while (j != i);
        parts_out[count++] = len;
    }
    std::sort(parts_out, parts_out + count, std::greater<int>());
    return count;
}

int cycle_count_of(const int* images, int p) {
    std::uint32_t seen = 0;
    int count = 0;
    for (int i = 0; i < p; ++i) {
        if ((seen >> i) & 1u) continue;
        int j = i;
        do {
            seen |= 1u << j;
            j = images[j];
        } while (j != i);
        ++count;
    }
    return count;
}

std::uint64_t pack_parts(const int* parts, int count) {
    std::uint64_t key = 0;
    for (int i = 0; i < count; ++i) key = (key << 4) | static_cast<std::uint64_t>(parts[i]);
    return key;
}

Permutation representative(const CycleType& type) {
    Permutation perm;
    perm.images.resize(type.p());
    int base = 0;
    for (int len : type.parts()) {
        for (int k = 0; k < len; ++k) perm.images[base + k] = base + (k + 1) % len;
        base += len;
    }
    return perm;
}

} // namespace detail

CycleType::CycleType(std::vector<int> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), std::greater<int>());
    for (int part : parts_) {
        if (part < 1) throw ConditionError("cycle type parts must be positive");
        p_ += part;
    }
    if (p_ < 1) throw ConditionError("cycle type must have at least one part");
    detail::check_degree(p_);
}

bool CycleType::is_perfect_matching() const {
    for (int part : parts_)
        if (part != 2) return false;
    return p_ % 2 == 0 && !parts_.empty();
}

std::string CycleType::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out << ',';
        out << parts_[i];
    }
    return out.str();
}

CycleType CycleType::parse(const std::string& label) {
    std::vector<int> parts;
    std::istringstream in(label);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            parts.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw ParseError("invalid cycle type token '" + token + "' in '" + label + "'");
        }
    }
    if (parts.empty()) throw ParseError("empty cycle type '" + label + "'");
    return CycleType(std::move(parts));
}

Permutation Permutation::identity(int p) {
    detail::check_degree(p);
    Permutation perm;
    perm.images.resize(p);
    for (int i = 0; i < p; ++i) perm.images[i] = i;
    return perm;
}

Permutation Permutation::compose(const Permutation& other) const {
    if (degree() != other.degree()) throw ConditionError("permutation degree mismatch");
    Permutation out;
    out.images.resize(degree());
    for (int i = 0; i < degree(); ++i) out.images[i] = images[other.images[i]];
    return out;
}

Permutation Permutation::inverse() const {
    Permutation out;
    out.images.resize(degree());
    for (int i = 0; i < degree(); ++i) out.images[images[i]] = i;
    return out;
}

CycleType Permutation::cycle_type() const {
    std::array<int, kMaxDegree> parts{};
    int count = detail::cycle_type_of(images.data(), degree(), parts.data());
    return CycleType(std::vector<int>(parts.begin(), parts.begin() + count));
}

namespace {

void emit_partitions(int remaining, int max_part, std::vector<int>& current,
                     std::vector<CycleType>& out) {
    if (remaining == 0) {
        out.emplace_back(current);
        return;
    }
    for (int k = std::min(remaining, max_part); k >= 1; --k) {
        current.push_back(k);
        emit_partitions(remaining - k, k, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<CycleType> partitions(int p) {
    detail::check_degree(p);
    std::vector<CycleType> out;
    std::vector<int> current;
    emit_partitions(p, p, current, out);
    return out;
}

Integer class_size(const CycleType& type) {
    // Orbit-stabilizer: centralizer order is prod_j j^{m_j} m_j!.
    Integer denom = 1;
    int multiplicity = 0;
    const auto& parts = type.parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        ++multiplicity;
        denom *= parts[i];
        if (i + 1 == parts.size() || parts[i + 1] != parts[i]) {
            denom *= factorial(multiplicity);
            multiplicity = 0;
        }
    }
    return factorial(type.p()) / denom;
}

Integer catalan(int n) {
    if (n < 0) throw ConditionError("catalan index must be nonnegative");
    return binomial(2 * n, n) / (n + 1);
}

Integer mobius_coefficient(const CycleType& type) {
    Integer prod = 1;
    for (int part : type.parts()) prod *= catalan(part - 1);
    return prod;
}

Integer stirling_first_unsigned(int p, int m) {
    detail::check_degree(p);
    if (m < 0 || m > p)
        throw ConditionError("stirling cycle count out of range: m=" + std::to_string(m));
    // c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k)
    std::vector<Integer> row(p + 1, 0);
    row[0] = 1;
    for (int n = 1; n <= p; ++n) {
        for (int k = n; k >= 1; --k) row[k] = row[k - 1] + (n - 1) * row[k];
        row[0] = 0;
    }
    return row[m];
}

Integer derangement_count(int p) {
    detail::check_degree(p);
    // D_n = (n-1)(D_{n-1} + D_{n-2})
    Integer prev2 = 1, prev1 = 0;  // D_0, D_1
    if (p == 0) return prev2;
    if (p == 1) return prev1;
    Integer cur = 0;
    for (int n = 2; n <= p; ++n) {
        cur = (n - 1) * (prev1 + prev2);
        prev2 = prev1;
        prev1 = cur;
    }
    return cur;
}

Integer ceil_factorial_over_e(int p) {
    if (p < 1) throw ConditionError("ceil_factorial_over_e needs p >= 1");
    Integer d = derangement_count(p);
    return (p % 2 == 0) ? d : d + 1;
}

Integer perfect_matching_count(int p) {
    detail::check_degree(p);
    if (p % 2 != 0) return 0;
    return double_factorial(p - 1);
}

std::vector<std::pair<CycleType, Integer>> derangement_classes(int p) {
    std::vector<std::pair<CycleType, Integer>> out;
    for (const auto& type : partitions(p))
        if (type.is_derangement()) out.emplace_back(type, class_size(type));
    return out;
}

std::map<int, Integer> derangements_by_distance(int p) {
    std::map<int, Integer> out;
    for (const auto& [type, size] : derangement_classes(p))
        out[type.transposition_distance()] += size;
    return out;
}

ClassIndex::ClassIndex(int p) : p_(p), classes_(partitions(p)) {
    for (int i = 0; i < size(); ++i) {
        const auto& parts = classes_[i].parts();
        lookup_.emplace(detail::pack_parts(parts.data(), static_cast<int>(parts.size())), i);
    }
}

int ClassIndex::index_of(const CycleType& type) const {
    const auto& parts = type.parts();
    return index_of_parts(parts.data(), static_cast<int>(parts.size()));
}

int ClassIndex::index_of_parts(const int* parts, int count) const {
    auto it = lookup_.find(detail::pack_parts(parts, count));
    if (it == lookup_.end()) throw ConditionError("cycle type does not belong to S_" + std::to_string(p_));
    return it->second;
}

int ClassIndex::index_of_permutation(const int* images) const {
    std::array<int, kMaxDegree> parts{};
    int count = detail::cycle_type_of(images, p_, parts.data());
    return index_of_parts(parts.data(), count);
}

} // namespace haarorbit
