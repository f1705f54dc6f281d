#include "phqchat/synthetic.hpp"

#include "phqchat/error.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

namespace phqchat {

namespace {

enum class Cell { TruePositive, FalseNegative, FalsePositive, TrueNegative };

constexpr int kMaxMagnitude = 6;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, bound). Modulo bias is negligible for the bounds used here.
    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::vector<int> magnitudes(std::size_t n, double mean_abs, Rng& rng) {
    const long target = std::lround(mean_abs * static_cast<double>(n));
    if (target < 0 || target > static_cast<long>(n) * kMaxMagnitude) {
        throw ValidationError("synthetic: mean_abs_noise out of reach");
    }
    std::vector<int> m(n, static_cast<int>(target / static_cast<long>(n)));
    for (long r = 0; r < target % static_cast<long>(n); ++r) {
        m[static_cast<std::size_t>(r)] += 1;
    }
    // Spread the mass while keeping the sum fixed.
    for (std::size_t step = 0; step < 8 * n; ++step) {
        const std::size_t from = rng.below(n);
        const std::size_t to = rng.below(n);
        if (from != to && m[from] > 0 && m[to] < kMaxMagnitude) {
            m[from] -= 1;
            m[to] += 1;
        }
    }
    return m;
}

/// Feasible (form total, agent total) pairs for a cell and magnitude.
std::vector<std::pair<int, int>> candidates(Cell cell, int magnitude) {
    std::vector<std::pair<int, int>> out;
    for (int form = 0; form <= kMaxTotal; ++form) {
        for (const int sign : {+1, -1}) {
            const int agent = form + sign * magnitude;
            if (agent < 0 || agent > kMaxTotal || (magnitude == 0 && sign < 0)) {
                continue;
            }
            const bool form_pos = form >= kCutoff;
            const bool agent_pos = agent >= kCutoff;
            const bool ok = (cell == Cell::TruePositive && form_pos && agent_pos) ||
                            (cell == Cell::FalseNegative && form_pos && !agent_pos) ||
                            (cell == Cell::FalsePositive && !form_pos && agent_pos) ||
                            (cell == Cell::TrueNegative && !form_pos && !agent_pos);
            if (ok) {
                out.emplace_back(form, agent);
            }
        }
    }
    return out;
}

ItemScores spread_total(int total, Rng& rng) {
    ItemScores items{};
    for (int placed = 0; placed < total;) {
        auto& slot = items[rng.below(kItemCount)];
        if (slot < kMaxLevel) {
            slot += 1;
            placed += 1;
        }
    }
    return items;
}

ItemScores perturb(ItemScores items, int delta, Rng& rng) {
    while (delta != 0) {
        auto& slot = items[rng.below(kItemCount)];
        if (delta > 0 && slot < kMaxLevel) {
            slot += 1;
            delta -= 1;
        } else if (delta < 0 && slot > 0) {
            slot -= 1;
            delta += 1;
        }
    }
    return items;
}

}  // namespace

PairedDataset make_synthetic_dataset(const SyntheticOptions& options) {
    Rng rng(options.seed);
    const std::size_t n = options.cells ? static_cast<std::size_t>(options.cells->n()) : options.n;
    if (n < 1) {
        throw ValidationError("synthetic: dataset must have at least one subject");
    }
    std::vector<int> mags = magnitudes(n, options.mean_abs_noise, rng);
    rng.shuffle(mags);

    std::vector<std::pair<int, int>> totals(n);
    if (options.cells) {
        const auto& c = *options.cells;
        if (c.tp < 0 || c.fn < 0 || c.fp < 0 || c.tn < 0) {
            throw ValidationError("synthetic: negative cell count");
        }
        std::vector<Cell> cells;
        cells.insert(cells.end(), static_cast<std::size_t>(c.tp), Cell::TruePositive);
        cells.insert(cells.end(), static_cast<std::size_t>(c.fn), Cell::FalseNegative);
        cells.insert(cells.end(), static_cast<std::size_t>(c.fp), Cell::FalsePositive);
        cells.insert(cells.end(), static_cast<std::size_t>(c.tn), Cell::TrueNegative);
        rng.shuffle(cells);
        // Crossing the cutoff needs a nonzero magnitude: swap one in where required.
        for (std::size_t i = 0; i < n; ++i) {
            if ((cells[i] == Cell::FalseNegative || cells[i] == Cell::FalsePositive) && mags[i] == 0) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (mags[j] > 0 && cells[j] != Cell::FalseNegative && cells[j] != Cell::FalsePositive) {
                        std::swap(mags[i], mags[j]);
                        break;
                    }
                }
                if (mags[i] == 0) {
                    throw ValidationError("synthetic: not enough noise to realize the requested cells");
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto options_for_subject = candidates(cells[i], mags[i]);
            if (options_for_subject.empty()) {
                throw ValidationError("synthetic: infeasible cell/magnitude combination");
            }
            totals[i] = options_for_subject[rng.below(options_for_subject.size())];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            // Right-skewed form totals, as in a mostly non-clinical sample.
            const std::size_t a = rng.below(28);
            const std::size_t b = rng.below(28);
            const int form = static_cast<int>(a * b / 27);
            int sign = rng.below(2) == 0 ? 1 : -1;
            if (form + sign * mags[i] < 0 || form + sign * mags[i] > kMaxTotal) {
                sign = -sign;
            }
            totals[i] = {form, form + sign * mags[i]};
        }
    }

    PairedDataset out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PairedRecord rec;
        std::array<char, 32> id{};
        std::snprintf(id.data(), id.size(), "s%03zu", i + 1);
        rec.subject_id = id.data();
        rec.form_total = totals[i].first;
        rec.agent_total = totals[i].second;
        rec.form_items = spread_total(rec.form_total, rng);
        rec.agent_items = perturb(rec.form_items, rec.agent_total - rec.form_total, rng);
        rec.days_between = static_cast<int>(rng.below(static_cast<std::size_t>(options.max_days) + 1));
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace phqchat
