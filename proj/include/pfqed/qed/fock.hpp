#ifndef PFQED_QED_FOCK_HPP
#define PFQED_QED_FOCK_HPP

#include "pfqed/core/error.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace pfqed::qed {

/// Occupation signature with at most two quanta: `first` and `second`
/// are mode indices or -1. Vacuum (-1,-1), single (a,-1), pair (a,b), a <= b.
struct FockState
{
    int first = -1;
    int second = -1;

    int photons() const noexcept { return (first >= 0) + (second >= 0); }

    /// Occupation of mode a.
    int occupation(int a) const noexcept { return (first == a) + (second == a); }

    bool operator==(const FockState&) const = default;
};

/// Multimode Fock space truncated to at most `max_photons` (1 or 2)
/// quanta in total. Ordering: vacuum, singles by ascending mode, pairs
/// (a, b) ascending lexicographically.
class FockBasis
{
public:
    explicit FockBasis(std::size_t modes, int max_photons = 2) : m_modes(modes), m_max_photons(max_photons)
    {
        pfqed::detail::require(max_photons >= 0 && max_photons <= 2, "FockBasis: max_photons must be 0, 1 or 2");
        pfqed::detail::require(modes <= 1u << 20, "FockBasis: too many modes");
        m_states.push_back({});
        if(max_photons >= 1)
            for(std::size_t a = 0; a < modes; ++a) m_states.push_back({static_cast<int>(a), -1});
        if(max_photons >= 2)
            for(std::size_t a = 0; a < modes; ++a)
                for(std::size_t b = a; b < modes; ++b) m_states.push_back({static_cast<int>(a), static_cast<int>(b)});
    }

    /// 1 + N_p + (N_p^2 + N_p)/2 for the two-photon truncation.
    static std::size_t two_photon_dimension(std::size_t modes) { return 1 + modes + (modes * modes + modes) / 2; }

    std::size_t modes() const noexcept { return m_modes; }
    int max_photons() const noexcept { return m_max_photons; }
    std::size_t size() const noexcept { return m_states.size(); }
    const FockState& state(std::size_t index) const { return m_states.at(index); }
    const std::vector<FockState>& states() const noexcept { return m_states; }

    std::size_t index_of(const FockState& s) const
    {
        if(s.first < 0) return 0;
        const auto a = static_cast<std::size_t>(s.first);
        if(s.second < 0) return 1 + a;
        const auto b = static_cast<std::size_t>(s.second);
        pfqed::detail::require(a <= b && b < m_modes, "FockBasis::index_of: pair must satisfy a <= b < N_p");
        return 1 + m_modes + a * m_modes - a * (a - 1) / 2 + (b - a);
    }

    /// b_a^dagger |state(index)>: target index and matrix element
    /// sqrt(n_a + 1), or nothing if the result leaves the truncation.
    std::optional<std::pair<std::size_t, double>> raise(std::size_t index, int a) const
    {
        const FockState& s = m_states[index];
        if(s.photons() >= m_max_photons) return std::nullopt;
        if(s.first < 0) return std::make_pair(index_of({a, -1}), 1.0);
        const int lo = std::min(s.first, a), hi = std::max(s.first, a);
        return std::make_pair(index_of({lo, hi}), s.first == a ? std::sqrt(2.0) : 1.0);
    }

private:
    std::size_t m_modes;
    int m_max_photons;
    std::vector<FockState> m_states;
};

inline FockBasis build_fock_basis(std::size_t modes, int max_photons = 2)
{
    pfqed::detail::require(modes >= 1, "build_fock_basis: N_p must be >= 1");
    return FockBasis(modes, max_photons);
}

} // namespace pfqed::qed

#endif // PFQED_QED_FOCK_HPP
