#ifndef PFQED_SCENARIO_CACHE_HPP
#define PFQED_SCENARIO_CACHE_HPP

#include "pfqed/matter/h2.hpp"
#include "pfqed/scenario/output.hpp"

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace pfqed::scenario {

/// $PFQED_CACHE_DIR, else ./.pfqed-cache.
inline std::filesystem::path default_cache_dir()
{
    if(const char* env = std::getenv("PFQED_CACHE_DIR"); env && *env) return env;
    return std::filesystem::current_path() / ".pfqed-cache";
}

/// On-disk store of clamped-nuclei H2 solves (energies, dipole matrix,
/// residuals; no wavefunctions). Entries are keyed by every input of the
/// solve, so a hit returns exactly what a cold solve would.
class MatterCache
{
public:
    explicit MatterCache(std::filesystem::path dir = default_cache_dir()) : m_dir(std::move(dir)) {}

    const std::filesystem::path& dir() const noexcept { return m_dir; }
    std::size_t hits() const noexcept { return m_hits; }
    std::size_t misses() const noexcept { return m_misses; }

    static std::string key(double R, const matter::Grid1D& grid, const matter::H2Model& model, std::size_t n_states,
                           matter::ExchangeSectors sectors, const linalg::KrylovOptions& krylov = {})
    {
        std::ostringstream s;
        s << "h2-v1|" << format_number(R) << '|' << format_number(grid.x_min) << '|' << format_number(grid.dx) << '|'
          << grid.n << '|' << format_number(model.a_ee) << '|' << format_number(model.a_en) << '|'
          << format_number(model.nuclear_mass) << '|' << format_number(model.electron_mass) << '|' << n_states << '|'
          << (sectors == matter::ExchangeSectors::all ? "all" : "sym") << '|' << krylov.seed << '|'
          << format_number(krylov.tol);
        return sha256_hex(s.str());
    }

    matter::MatterBasis h2(double R, const matter::Grid1D& grid, const matter::H2Model& model, std::size_t n_states,
                           matter::ExchangeSectors sectors = matter::ExchangeSectors::all,
                           const matter::MatterSolveOptions& opt = {})
    {
        const auto path = m_dir / (key(R, grid, model, n_states, sectors, opt.krylov) + ".bin");
        matter::MatterBasis mb;
        if(load(path, grid, mb))
        {
            ++m_hits;
            return mb;
        }
        ++m_misses;
        matter::MatterSolveOptions o = opt;
        o.keep_vectors = false;
        mb = matter::h2_basis(R, grid, model, n_states, sectors, o);
        store(path, mb);
        return mb;
    }

private:
    static constexpr std::uint32_t magic = 0x50465143; // "PFQC"

    bool load(const std::filesystem::path& path, const matter::Grid1D& grid, matter::MatterBasis& mb) const
    {
        std::ifstream in(path, std::ios::binary);
        if(!in) return false;
        std::uint32_t m = 0;
        std::uint64_t n = 0, nr = 0;
        in.read(reinterpret_cast<char*>(&m), sizeof m);
        in.read(reinterpret_cast<char*>(&n), sizeof n);
        in.read(reinterpret_cast<char*>(&nr), sizeof nr);
        if(!in || m != magic || n == 0 || n > 100000 || nr > n) return false;
        const auto N = static_cast<Eigen::Index>(n);
        mb.grid = grid;
        mb.electrons = 2;
        mb.energies.resize(N);
        mb.dipole.resize(N, N);
        mb.residuals.assign(nr, 0.0);
        in.read(reinterpret_cast<char*>(mb.energies.data()), static_cast<std::streamsize>(n * sizeof(double)));
        in.read(reinterpret_cast<char*>(mb.dipole.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
        in.read(reinterpret_cast<char*>(mb.residuals.data()), static_cast<std::streamsize>(nr * sizeof(double)));
        return static_cast<bool>(in);
    }

    void store(const std::filesystem::path& path, const matter::MatterBasis& mb) const
    {
        std::error_code ec;
        std::filesystem::create_directories(m_dir, ec);
        if(ec) return; // caching is best effort
        const std::uint64_t n = mb.size(), nr = mb.residuals.size();
        // Unique temporary name, then an atomic rename, so concurrent
        // writers never expose a partial entry.
        static std::atomic<std::uint64_t> counter{0};
        const auto tmp = path.string() + ".tmp" + std::to_string(counter++) + "." +
                         std::to_string(reinterpret_cast<std::uintptr_t>(&mb));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if(!out) return;
            out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
            out.write(reinterpret_cast<const char*>(&n), sizeof n);
            out.write(reinterpret_cast<const char*>(&nr), sizeof nr);
            out.write(reinterpret_cast<const char*>(mb.energies.data()), static_cast<std::streamsize>(n * sizeof(double)));
            out.write(reinterpret_cast<const char*>(mb.dipole.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
            out.write(reinterpret_cast<const char*>(mb.residuals.data()), static_cast<std::streamsize>(nr * sizeof(double)));
            if(!out) return;
        }
        std::filesystem::rename(tmp, path, ec);
        if(ec) std::filesystem::remove(tmp, ec);
    }

    std::filesystem::path m_dir;
    std::atomic<std::size_t> m_hits{0};
    std::atomic<std::size_t> m_misses{0};
};

} // namespace pfqed::scenario

#endif // PFQED_SCENARIO_CACHE_HPP
