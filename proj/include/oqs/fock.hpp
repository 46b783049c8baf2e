// fock.hpp: truncated multimode Fock space objects used for bath operators.

#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "oqs/linalg.hpp"

namespace oqs {

// Sparse occupation numbers, sorted by mode; zero occupations are not stored.
class OccupationIndex {
public:
    using Entry = std::pair<int, int>;  // (mode, count)

    OccupationIndex() = default;
    explicit OccupationIndex(std::vector<Entry> entries);

    static OccupationIndex vacuum() { return {}; }
    static OccupationIndex single(int mode, int count = 1);

    int operator[](int mode) const;
    int total() const;
    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    int max_mode() const { return entries_.empty() ? -1 : entries_.back().first; }

    // Occupation with n_mode shifted by delta; nullopt if it would go negative.
    std::optional<OccupationIndex> shifted(int mode, int delta) const;

    auto operator<=>(const OccupationIndex&) const = default;
    bool operator==(const OccupationIndex&) const = default;

private:
    std::vector<Entry> entries_;
};

// Sparse state vector over occupation indices.
using FockVector = std::map<OccupationIndex, Complex>;

FockVector annihilate(const FockVector& psi, int mode);
FockVector create(const FockVector& psi, int mode);
Complex inner(const FockVector& bra, const FockVector& ket);  // <bra|ket>
FockVector operator+(const FockVector& a, const FockVector& b);
FockVector operator*(Complex c, const FockVector& a);

// phi = sum_k w_k |ket_k><bra_k|. Entries are keyed (ket, bra): the coefficient
// c_{n p} multiplies |n><p|, so the first index is the ket.
class FockOperator {
public:
    struct Dyad {
        Complex weight;
        FockVector ket;
        FockVector bra;
    };
    using EntryMap = std::map<std::pair<OccupationIndex, OccupationIndex>, Complex>;

    FockOperator() = default;
    FockOperator(int n_modes, int max_exc) : n_modes_(n_modes), max_exc_(max_exc) {}

    void add_dyad(Complex w, FockVector ket, FockVector bra);
    void add_entry(const OccupationIndex& ket, const OccupationIndex& bra, Complex c);

    int n_modes() const { return n_modes_; }
    int max_exc() const { return max_exc_; }
    const std::vector<Dyad>& dyads() const { return dyads_; }

    EntryMap entries(double drop_tol = 0.0) const;
    Complex trace() const;
    FockOperator adjoint() const;
    FockOperator scaled(Complex c) const;
    bool is_fock_diagonal(double tol = 1e-14) const;

    // Throws std::out_of_range if any index exceeds the mode count or max_exc.
    void validate() const;

private:
    int n_modes_{0};
    int max_exc_{2};
    std::vector<Dyad> dyads_;
};

bool approx_equal(const FockOperator& a, const FockOperator& b, double tol);

}  // namespace oqs
