#include "oqs/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oqs {

OccupationIndex::OccupationIndex(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    for (const auto& [mode, count] : entries) {
        if (mode < 0 || count < 0) throw std::out_of_range("OccupationIndex: negative mode or count");
        if (count == 0) continue;
        if (!entries_.empty() && entries_.back().first == mode) {
            entries_.back().second += count;
        } else {
            entries_.emplace_back(mode, count);
        }
    }
}

OccupationIndex OccupationIndex::single(int mode, int count) { return OccupationIndex({{mode, count}}); }

int OccupationIndex::operator[](int mode) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{mode, 0},
                               [](const Entry& a, const Entry& b) { return a.first < b.first; });
    return (it != entries_.end() && it->first == mode) ? it->second : 0;
}

int OccupationIndex::total() const {
    int n = 0;
    for (const auto& e : entries_) n += e.second;
    return n;
}

std::optional<OccupationIndex> OccupationIndex::shifted(int mode, int delta) const {
    const int now = (*this)[mode];
    if (now + delta < 0) return std::nullopt;
    OccupationIndex out;
    out.entries_.reserve(entries_.size() + 1);
    bool placed = false;
    for (const auto& e : entries_) {
        if (!placed && e.first >= mode) {
            placed = true;
            if (e.first == mode) {
                if (e.second + delta > 0) out.entries_.emplace_back(mode, e.second + delta);
                continue;
            }
            if (delta > 0) out.entries_.emplace_back(mode, delta);
        }
        out.entries_.push_back(e);
    }
    if (!placed && delta > 0) out.entries_.emplace_back(mode, delta);
    return out;
}

FockVector annihilate(const FockVector& psi, int mode) {
    FockVector out;
    for (const auto& [occ, c] : psi) {
        const int n = occ[mode];
        if (n == 0) continue;
        out[*occ.shifted(mode, -1)] += c * std::sqrt(static_cast<double>(n));
    }
    return out;
}

FockVector create(const FockVector& psi, int mode) {
    FockVector out;
    for (const auto& [occ, c] : psi) {
        const int n = occ[mode];
        out[*occ.shifted(mode, +1)] += c * std::sqrt(static_cast<double>(n + 1));
    }
    return out;
}

Complex inner(const FockVector& bra, const FockVector& ket) {
    Complex s{0.0, 0.0};
    const FockVector& small = bra.size() <= ket.size() ? bra : ket;
    const FockVector& large = bra.size() <= ket.size() ? ket : bra;
    for (const auto& [occ, c] : small) {
        auto it = large.find(occ);
        if (it == large.end()) continue;
        s += (&small == &bra) ? std::conj(c) * it->second : std::conj(it->second) * c;
    }
    return s;
}

FockVector operator+(const FockVector& a, const FockVector& b) {
    FockVector out = a;
    for (const auto& [occ, c] : b) out[occ] += c;
    return out;
}

FockVector operator*(Complex c, const FockVector& a) {
    FockVector out = a;
    for (auto& kv : out) kv.second *= c;
    return out;
}

void FockOperator::add_dyad(Complex w, FockVector ket, FockVector bra) {
    dyads_.push_back({w, std::move(ket), std::move(bra)});
}

void FockOperator::add_entry(const OccupationIndex& ket, const OccupationIndex& bra, Complex c) {
    add_dyad(c, FockVector{{ket, Complex(1.0)}}, FockVector{{bra, Complex(1.0)}});
}

FockOperator::EntryMap FockOperator::entries(double drop_tol) const {
    EntryMap out;
    for (const auto& d : dyads_)
        for (const auto& [kocc, kc] : d.ket)
            for (const auto& [bocc, bc] : d.bra) out[{kocc, bocc}] += d.weight * kc * std::conj(bc);
    if (drop_tol > 0.0) std::erase_if(out, [&](const auto& kv) { return std::abs(kv.second) <= drop_tol; });
    return out;
}

Complex FockOperator::trace() const {
    Complex t{0.0, 0.0};
    for (const auto& d : dyads_) t += d.weight * inner(d.bra, d.ket);
    return t;
}

FockOperator FockOperator::adjoint() const {
    FockOperator out(n_modes_, max_exc_);
    for (const auto& d : dyads_) out.add_dyad(std::conj(d.weight), d.bra, d.ket);
    return out;
}

FockOperator FockOperator::scaled(Complex c) const {
    FockOperator out = *this;
    for (auto& d : out.dyads_) d.weight *= c;
    return out;
}

bool FockOperator::is_fock_diagonal(double tol) const {
    for (const auto& [key, c] : entries())
        if (key.first != key.second && std::abs(c) > tol) return false;
    return true;
}

void FockOperator::validate() const {
    auto check = [&](const OccupationIndex& occ) {
        if (occ.max_mode() >= n_modes_) {
            throw std::out_of_range("FockOperator: mode index " + std::to_string(occ.max_mode()) +
                                    " outside bath of " + std::to_string(n_modes_) + " modes");
        }
        if (occ.total() > max_exc_) {
            throw std::out_of_range("FockOperator: occupation with " + std::to_string(occ.total()) +
                                    " excitations exceeds max_exc " + std::to_string(max_exc_));
        }
    };
    for (const auto& d : dyads_) {
        for (const auto& kv : d.ket) check(kv.first);
        for (const auto& kv : d.bra) check(kv.first);
    }
}

bool approx_equal(const FockOperator& a, const FockOperator& b, double tol) {
    auto ea = a.entries();
    for (const auto& [key, c] : b.entries()) ea[key] -= c;
    return std::all_of(ea.begin(), ea.end(), [&](const auto& kv) { return std::abs(kv.second) <= tol; });
}

}  // namespace oqs
