// Product functionals on the free product C<x1> * C<x2> of two one-generator algebras.
//
// Each algebra carries a moment functional (phi_i(x_i^k) = m_k, m_0 = 1). A word is an
// alternating product of letters x_i^p. Two products are evaluated:
//
//   monotone:  phi(b1 a1 b2 ... a_{n-1} b_n) = phi1(a1 ... a_{n-1}) phi2(b1) ... phi2(b_n)
//   c-free:    phi(a1 ... an) = phi_{e(1)}(a1) ... phi_{e(n)}(an) whenever the a_i alternate
//              and each is centered for its psi_{e(i)}.
//
// The c-free value of an arbitrary word comes from writing every letter as
// a = (a - psi(a) 1) + psi(a) 1, expanding, merging neighbours that become adjacent,
// and recursing on the shorter alternating products.
//
// Everything is templated on the scalar so the identities can be checked in exact
// rational arithmetic.

#ifndef MONOCONV_CFREE_HPP
#define MONOCONV_CFREE_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <monoconv/error.hpp>

namespace monoconv::cfree {

struct Letter {
    int algebra = 1;  // 1 or 2
    int power = 1;    // >= 0; power 0 is the unit

    friend bool operator==(const Letter&, const Letter&) = default;
};

inline constexpr std::size_t max_word_length = 16;

// Alternating word after dropping unit letters and merging same-algebra neighbours.
class Word {
public:
    Word() = default;

    explicit Word(const std::vector<Letter>& letters)
    {
        for (const auto& l : letters) {
            if (l.algebra != 1 && l.algebra != 2)
                detail::fail(Errc::domain_error, "letter algebra must be 1 or 2");
            if (l.power < 0)
                detail::fail(Errc::domain_error, "letter power must be non-negative");
            if (l.power == 0)
                continue;
            if (!letters_.empty() && letters_.back().algebra == l.algebra)
                letters_.back().power += l.power;
            else
                letters_.push_back(l);
        }
    }

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }

    // Swap the roles of the two algebras.
    Word mirrored() const
    {
        std::vector<Letter> out = letters_;
        for (auto& l : out)
            l.algebra = 3 - l.algebra;
        return Word(out);
    }

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Letter> letters_;
};

// phi(x^k) = m_k with m_0 = 1.
template <typename Scalar>
class MomentFunctional {
public:
    MomentFunctional() = default;
    explicit MomentFunctional(std::vector<Scalar> moments) : m_(std::move(moments)) {}

    // delta(lambda 1 + a_0) = lambda: all positive moments vanish.
    static MomentFunctional delta(std::size_t order) { return MomentFunctional(std::vector<Scalar>(order, Scalar(0))); }

    std::size_t order() const noexcept { return m_.size(); }

    Scalar operator()(std::size_t k) const
    {
        if (k == 0)
            return Scalar(1);
        if (k > m_.size())
            detail::fail(Errc::order_exceeded, "moment " + std::to_string(k) + " beyond order " +
                                                   std::to_string(m_.size()));
        return m_[k - 1];
    }

    // Linear extension to a polynomial sum_j c_j x^j.
    Scalar apply(const std::vector<Scalar>& poly) const
    {
        Scalar acc(0);
        for (std::size_t j = 0; j < poly.size(); ++j)
            if (poly[j] != Scalar(0))
                acc += poly[j] * (*this)(j);
        return acc;
    }

private:
    std::vector<Scalar> m_;
};

template <typename Scalar>
Scalar monotone_eval(const Word& word, const MomentFunctional<Scalar>& phi1, const MomentFunctional<Scalar>& phi2)
{
    Scalar result(1);
    std::size_t power1 = 0;
    for (const auto& l : word.letters()) {
        if (l.algebra == 1)
            power1 += static_cast<std::size_t>(l.power);
        else
            result *= phi2(static_cast<std::size_t>(l.power));
    }
    return result * phi1(power1);
}

namespace detail {

template <typename T>
bool scalar_less(const T& a, const T& b)
{
    return a < b;
}

template <typename T>
bool scalar_less(const std::complex<T>& a, const std::complex<T>& b)
{
    if (a.real() != b.real())
        return a.real() < b.real();
    return a.imag() < b.imag();
}

// An element of one algebra as a polynomial in its generator.
template <typename Scalar>
struct Element {
    int algebra = 1;
    std::vector<Scalar> poly;  // coefficients of x^0, x^1, ...
};

template <typename Scalar>
std::vector<Scalar> poly_mul(const std::vector<Scalar>& p, const std::vector<Scalar>& q)
{
    std::vector<Scalar> out(p.size() + q.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == Scalar(0))
            continue;
        for (std::size_t j = 0; j < q.size(); ++j)
            out[i + j] += p[i] * q[j];
    }
    return out;
}

template <typename Scalar>
struct KeyLess {
    bool operator()(const std::vector<Element<Scalar>>& a, const std::vector<Element<Scalar>>& b) const
    {
        if (a.size() != b.size())
            return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].algebra != b[i].algebra)
                return a[i].algebra < b[i].algebra;
            if (a[i].poly.size() != b[i].poly.size())
                return a[i].poly.size() < b[i].poly.size();
            for (std::size_t j = 0; j < a[i].poly.size(); ++j) {
                if (scalar_less(a[i].poly[j], b[i].poly[j]))
                    return true;
                if (scalar_less(b[i].poly[j], a[i].poly[j]))
                    return false;
            }
        }
        return false;
    }
};

} // namespace detail

// Evaluator for phi1 (psi1)*(psi2) phi2. The memo table lives in the evaluator, so one
// instance can be reused across many words with the same four functionals.
template <typename Scalar>
class CFreeEvaluator {
public:
    CFreeEvaluator(MomentFunctional<Scalar> phi1, MomentFunctional<Scalar> psi1, MomentFunctional<Scalar> phi2,
                   MomentFunctional<Scalar> psi2)
        : phi_{std::move(phi1), std::move(phi2)}, psi_{std::move(psi1), std::move(psi2)}
    {
    }

    Scalar operator()(const Word& word)
    {
        if (word.size() > max_word_length)
            monoconv::detail::fail(Errc::recursion_limit, "word longer than " + std::to_string(max_word_length));
        std::vector<Element> elems;
        elems.reserve(word.size());
        for (const auto& l : word.letters()) {
            std::vector<Scalar> poly(static_cast<std::size_t>(l.power) + 1, Scalar(0));
            poly.back() = Scalar(1);
            elems.push_back({l.algebra, std::move(poly)});
        }
        return evaluate(elems);
    }

    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    using Element = detail::Element<Scalar>;
    using Key = std::vector<Element>;

    const MomentFunctional<Scalar>& phi(int algebra) const { return phi_[algebra - 1]; }
    const MomentFunctional<Scalar>& psi(int algebra) const { return psi_[algebra - 1]; }

    Scalar evaluate(const Key& elems)
    {
        if (elems.empty())
            return Scalar(1);
        if (elems.size() == 1)
            return phi(elems[0].algebra).apply(elems[0].poly);
        if (auto it = memo_.find(elems); it != memo_.end())
            return it->second;

        // a = a_c + s 1 with s = psi(a) and psi(a_c) = 0.
        const std::size_t n = elems.size();
        std::vector<Scalar> shift(n);
        std::vector<std::vector<Scalar>> centered(n);
        std::vector<std::size_t> split;  // letters with s != 0
        for (std::size_t i = 0; i < n; ++i) {
            shift[i] = psi(elems[i].algebra).apply(elems[i].poly);
            centered[i] = elems[i].poly;
            centered[i][0] -= shift[i];
            if (shift[i] != Scalar(0))
                split.push_back(i);
        }

        // All letters centered and alternating: the value factorizes.
        Scalar total(1);
        for (std::size_t i = 0; i < n; ++i)
            total *= phi(elems[i].algebra).apply(centered[i]);

        // Every other term replaces a non-empty subset of the split letters by scalars.
        const std::size_t subsets = std::size_t{1} << split.size();
        for (std::size_t mask = 1; mask < subsets; ++mask) {
            Scalar coeff(1);
            std::vector<bool> dropped(n, false);
            for (std::size_t b = 0; b < split.size(); ++b) {
                if (mask & (std::size_t{1} << b)) {
                    dropped[split[b]] = true;
                    coeff *= shift[split[b]];
                }
            }
            Key reduced;
            for (std::size_t i = 0; i < n; ++i) {
                if (dropped[i])
                    continue;
                if (!reduced.empty() && reduced.back().algebra == elems[i].algebra)
                    reduced.back().poly = detail::poly_mul(reduced.back().poly, centered[i]);
                else
                    reduced.push_back({elems[i].algebra, centered[i]});
            }
            total += coeff * evaluate(reduced);
        }
        memo_.emplace(elems, total);
        return total;
    }

    MomentFunctional<Scalar> phi_[2];
    MomentFunctional<Scalar> psi_[2];
    std::map<Key, Scalar, detail::KeyLess<Scalar>> memo_;
};

template <typename Scalar>
Scalar cfree_eval(const Word& word, const MomentFunctional<Scalar>& phi1, const MomentFunctional<Scalar>& psi1,
                  const MomentFunctional<Scalar>& phi2, const MomentFunctional<Scalar>& psi2)
{
    CFreeEvaluator<Scalar> eval(phi1, psi1, phi2, psi2);
    return eval(word);
}

// All canonical words with 1..max_len letters and powers 1..max_power.
inline std::vector<Word> canonical_words(std::size_t max_len, int max_power)
{
    std::vector<Word> out;
    for (int first = 1; first <= 2; ++first) {
        std::vector<std::vector<Letter>> layer{{}};
        for (std::size_t len = 1; len <= max_len; ++len) {
            std::vector<std::vector<Letter>> next;
            for (const auto& prefix : layer) {
                const int algebra = (len % 2 == 1) ? first : 3 - first;
                for (int p = 1; p <= max_power; ++p) {
                    auto w = prefix;
                    w.push_back({algebra, p});
                    out.emplace_back(w);
                    next.push_back(std::move(w));
                }
            }
            layer = std::move(next);
        }
    }
    return out;
}

struct SpecializationReport {
    std::size_t words = 0;
    std::size_t mismatches = 0;
    double max_defect = 0.0;
};

// cfree_eval(., phi1, delta, phi2, phi2) against monotone_eval(., phi1, phi2) on every
// canonical word. `defect` maps a scalar difference to a non-negative double.
template <typename Scalar, typename Defect>
SpecializationReport check_monotone_specialization(const MomentFunctional<Scalar>& phi1,
                                                   const MomentFunctional<Scalar>& phi2, std::size_t max_len,
                                                   int max_power, Defect defect)
{
    const auto delta = MomentFunctional<Scalar>::delta(phi1.order());
    CFreeEvaluator<Scalar> eval(phi1, delta, phi2, phi2);
    SpecializationReport rep;
    for (const auto& w : canonical_words(max_len, max_power)) {
        const Scalar diff = eval(w) - monotone_eval(w, phi1, phi2);
        const double d = defect(diff);
        ++rep.words;
        if (d != 0.0)
            ++rep.mismatches;
        rep.max_defect = std::max(rep.max_defect, d);
    }
    return rep;
}

} // namespace monoconv::cfree

#endif // MONOCONV_CFREE_HPP
