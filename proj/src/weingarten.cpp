#include "haarorbit/weingarten.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace haarorbit {

namespace {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Enumeration counts for the class-collapsed Gram system. For row class kappa
// with representative sigma, counts(kappa, lambda, c) is the number of tau in
// S_p with cycle_type(sigma tau^{-1}) = lambda and c[tau] = c. These are
// d-independent, so one p!-enumeration per p serves every dimension.
struct GramCounts {
    int p = 0;
    std::shared_ptr<const ClassIndex> index;
    std::vector<std::int64_t> counts;  // [row * C * p + col * p + (c-1)]

    std::int64_t at(int row, int col, int c) const {
        const int n = index->size();
        return counts[(static_cast<std::size_t>(row) * n + col) * p + (c - 1)];
    }
};

void fill_gram_row(const GramCounts& tables, std::vector<std::int64_t>& out, int row,
                   const Permutation& rep) {
    const int p = tables.p;
    const ClassIndex& index = *tables.index;
    const int n = index.size();
    std::vector<int> tau(p), composed(p);
    std::array<int, kMaxDegree> parts{};
    for (int i = 0; i < p; ++i) tau[i] = i;
    do {
        // omega = rep o tau^{-1}: omega[tau[i]] = rep[i], built without inverting tau.
        for (int i = 0; i < p; ++i) composed[tau[i]] = rep.images[i];
        int count = detail::cycle_type_of(composed.data(), p, parts.data());
        int col = index.index_of_parts(parts.data(), count);
        int cycles = detail::cycle_count_of(tau.data(), p);
        ++out[(static_cast<std::size_t>(row) * n + col) * p + (cycles - 1)];
    } while (std::next_permutation(tau.begin(), tau.end()));
}

GramCounts build_gram_counts(int p, bool alternate_representatives) {
    GramCounts tables;
    tables.p = p;
    tables.index = std::make_shared<ClassIndex>(p);
    const int n = tables.index->size();
    tables.counts.assign(static_cast<std::size_t>(n) * n * p, 0);

    std::vector<Permutation> reps(n);
    for (int row = 0; row < n; ++row) {
        Permutation rep = detail::representative(tables.index->classes()[row]);
        if (alternate_representatives && p >= 2) {
            // Conjugate by the reversal (p-1, ..., 0) to pick a different element
            // of the same class.
            Permutation rev = Permutation::identity(p);
            std::reverse(rev.images.begin(), rev.images.end());
            rep = rev.compose(rep).compose(rev.inverse());
        }
        reps[row] = std::move(rep);
    }

    unsigned hw = std::thread::hardware_concurrency();
    int workers = std::min<int>(n, hw ? static_cast<int>(hw) : 1);
    if (workers <= 1 || p <= 7) {
        for (int row = 0; row < n; ++row) fill_gram_row(tables, tables.counts, row, reps[row]);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int row = next.fetch_add(1); row < n; row = next.fetch_add(1))
                    fill_gram_row(tables, tables.counts, row, reps[row]);
            });
        for (auto& t : pool) t.join();
    }
    return tables;
}

const GramCounts& gram_counts(int p) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GramCounts>> cache;
    std::unique_lock lock(mutex);
    if (auto it = cache.find(p); it != cache.end()) return *it->second;
    lock.unlock();
    auto built = std::make_shared<GramCounts>(build_gram_counts(p, false));
    lock.lock();
    auto [it, inserted] = cache.emplace(p, std::move(built));
    return *it->second;
}

std::vector<Rational> solve_weingarten(const GramCounts& tables, int d) {
    const int p = tables.p;
    const int n = tables.index->size();

    std::vector<Integer> d_pow(p + 1);
    d_pow[0] = 1;
    for (int c = 1; c <= p; ++c) d_pow[c] = d_pow[c - 1] * d;

    RationalMatrix gram(n, n);
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col) {
            Integer entry = 0;
            for (int c = 1; c <= p; ++c) entry += tables.at(row, col, c) * d_pow[c];
            gram(row, col) = Rational(entry);
        }

    // Orthogonality: the identity-class row equals 1, every other row 0.
    RationalVector rhs = RationalVector::Zero(n);
    std::vector<int> ones(p, 1);
    rhs(tables.index->index_of_parts(ones.data(), p)) = 1;

    Eigen::FullPivLU<RationalMatrix> lu(gram);
    if (lu.rank() < n)
        throw ConditionError("Gram system singular at p=" + std::to_string(p) +
                             ", d=" + std::to_string(d));
    RationalVector solution = lu.solve(rhs);
    return std::vector<Rational>(solution.data(), solution.data() + n);
}

void check_weingarten_regime(int p, int d, bool allow_extended) {
    detail::check_degree(p);
    int cap = allow_extended ? kMaxDegree : kWeingartenDefaultPMax;
    if (p > cap)
        throw ResourceError("weingarten table order p=" + std::to_string(p) +
                            " exceeds cap " + std::to_string(cap));
    if (d < p)
        throw ConditionError("weingarten tables need d >= p (got d=" + std::to_string(d) +
                             ", p=" + std::to_string(p) + ")");
}

} // namespace

WeingartenTable::WeingartenTable(int p, int d, std::vector<Rational> values,
                                 std::shared_ptr<const ClassIndex> index)
    : p_(p), d_(d), index_(std::move(index)), values_(std::move(values)) {
    doubles_.reserve(values_.size());
    for (const auto& v : values_) doubles_.push_back(to_double(v));
}

const Rational& WeingartenTable::value(const CycleType& type) const {
    return values_[index_->index_of(type)];
}

Rational WeingartenTable::weighted_sum() const {
    Rational sum = 0;
    for (int i = 0; i < index_->size(); ++i)
        sum += Rational(class_size(index_->classes()[i])) * values_[i];
    return sum;
}

WeingartenTable build_weingarten_table(int p, int d, bool alternate_representatives) {
    check_weingarten_regime(p, d, true);
    GramCounts tables = build_gram_counts(p, alternate_representatives);
    return WeingartenTable(p, d, solve_weingarten(tables, d), tables.index);
}

const WeingartenTable& weingarten_table(int p, int d, bool allow_extended) {
    check_weingarten_regime(p, d, allow_extended);
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const WeingartenTable>> cache;
    const auto key = std::make_pair(p, d);
    {
        std::scoped_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
    }
    const GramCounts& counts = gram_counts(p);
    auto table = std::make_shared<const WeingartenTable>(p, d, solve_weingarten(counts, d),
                                                         counts.index);
    std::scoped_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(table));
    return *it->second;
}

Rational weingarten_closed_form(const CycleType& type, int d) {
    const int p = type.p();
    if (p > 4) throw ResourceError("closed forms cover p <= 4 only");
    if (d < p) throw ConditionError("closed forms need d >= p");
    const Integer d2 = Integer(d) * d;
    const auto& parts = type.parts();
    if (p == 1) return Rational(1, d);
    if (p == 2) {
        if (parts[0] == 2) return Rational(Integer(-1), Integer(d) * (d2 - 1));
        return Rational(Integer(1), d2 - 1);
    }
    if (p == 3) {
        Integer denom = (d2 - 4) * (d2 - 1);
        if (parts[0] == 3) return Rational(Integer(2), denom * d);
        if (parts[0] == 2) return Rational(Integer(-1), denom);
        return Rational(d2 - 2, denom * d);
    }
    Integer denom = (d2 - 9) * (d2 - 4) * (d2 - 1);
    if (parts[0] == 4) return Rational(Integer(-5), denom * d);
    if (parts[0] == 3) return Rational(2 * d2 - 3, denom * d2);
    if (parts[0] == 2 && parts[1] == 2) return Rational(d2 + 6, denom * d2);
    if (parts[0] == 2) return Rational(-(d2 - 4), denom * d);
    return Rational(d2 * d2 - 8 * d2 + 6, denom * d2);
}

double weingarten_asymptotic(const CycleType& type, int d) {
    const int distance = type.transposition_distance();
    double magnitude = to_double(mobius_coefficient(type)) /
                       std::pow(static_cast<double>(d), type.p() + distance);
    return (distance % 2 == 0) ? magnitude : -magnitude;
}

int collins_matsumoto_p_cap(int d) {
    if (d < 1) throw ConditionError("dimension must be positive");
    const Integer d4 = integer_pow(d, 4);
    int p = 0;
    while (36 * integer_pow(p + 1, 7) <= d4) ++p;
    return p;
}

WeingartenInterval collins_matsumoto_interval(const CycleType& type, int d) {
    const int p = type.p();
    if (p > collins_matsumoto_p_cap(d))
        throw ConditionError("Collins-Matsumoto bound needs p <= floor((d/sqrt 6)^{4/7})");
    const double dist = type.transposition_distance();
    const double mob = to_double(mobius_coefficient(type));
    const double dd = d;
    const double matsu = 1.0 / (1.0 - 6.0 * std::pow(p, 3.5) / (dd * dd));

    WeingartenInterval out;
    const double lead = mob / std::pow(dd, p + dist);
    out.lower = lead / (1.0 - (p - 1.0) / (dd * dd));
    out.upper = lead * matsu;

    const double weak_lead = mob / (std::pow(dd * dd - 1.0, p / 2.0) * std::pow(dd, dist));
    out.weak_lower = weak_lead * (1.0 + (p / 2.0 - 1.0) / (dd * dd));
    out.weak_upper = weak_lead * matsu;
    return out;
}

Rational weingarten_class_sum(int p, int d) {
    detail::check_degree(p);
    if (d < 1) throw ConditionError("dimension must be positive");
    // (d-1)!/(p+d-1)! = 1/(d (d+1) ... (d+p-1))
    Integer denom = 1;
    for (int k = 0; k < p; ++k) denom *= (d + k);
    return Rational(Integer(1), denom);
}

} // namespace haarorbit
