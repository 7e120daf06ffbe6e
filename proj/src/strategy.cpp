#include "adaptida/strategy.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace adaptida {

bool StrategyConfig::operator==(const StrategyConfig& o) const {
    return distribution == o.distribution && clusters == o.clusters &&
           load_balancing == o.load_balancing && polling == o.polling &&
           donation_fraction == o.donation_fraction && donate_from == o.donate_from &&
           anticipation_trigger == o.anticipation_trigger && ordering == o.ordering;
}

void validate_config(const StrategyConfig& config, int workers) {
    if (workers < 1)
        throw ConfigError("at least one worker is required");
    if (config.clusters < 1 || config.clusters > workers)
        throw ConfigError("clusters must be in 1.." + std::to_string(workers) + ", got " +
                          std::to_string(config.clusters));
    if (!(config.donation_fraction >= 0.0 && config.donation_fraction <= 1.0))
        throw ConfigError("donation fraction must be in [0,1]");
    if (config.anticipation_trigger < 0)
        throw ConfigError("anticipation trigger must be nonnegative");
    if (config.distribution == Distribution::KumarRao && !config.load_balancing)
        throw ConfigError("KumarRao distribution needs load balancing: idle workers could never get work");
}

std::string to_string(Distribution d) { return d == Distribution::KumarRao ? "KR" : "BF"; }
std::string to_string(Polling p) { return p == Polling::Neighbor ? "neighbor" : "random"; }
std::string to_string(DonateEnd e) { return e == DonateEnd::HeadOfList ? "head" : "tail"; }

std::string to_string(const StrategyConfig& c) {
    char frac[32];
    std::snprintf(frac, sizeof frac, "%g", c.donation_fraction);
    return "dist=" + to_string(c.distribution) + ";clusters=" + std::to_string(c.clusters) +
           ";lb=" + (c.load_balancing ? "on" : "off") + ";poll=" + to_string(c.polling) +
           ";frac=" + frac + ";end=" + to_string(c.donate_from) +
           ";trigger=" + std::to_string(c.anticipation_trigger) + ";order=" + c.ordering.name();
}

StrategyConfig parse_config(const std::string& text) {
    StrategyConfig c;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw DataError("config item '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        auto bad = [&] { return DataError("bad value '" + value + "' for config key '" + key + "'"); };
        try {
            if (key == "dist") {
                if (value == "KR")
                    c.distribution = Distribution::KumarRao;
                else if (value == "BF")
                    c.distribution = Distribution::BreadthFirst;
                else
                    throw bad();
            } else if (key == "clusters") {
                c.clusters = std::stoi(value);
            } else if (key == "lb") {
                if (value != "on" && value != "off")
                    throw bad();
                c.load_balancing = value == "on";
            } else if (key == "poll") {
                if (value == "neighbor")
                    c.polling = Polling::Neighbor;
                else if (value == "random")
                    c.polling = Polling::Random;
                else
                    throw bad();
            } else if (key == "frac") {
                c.donation_fraction = std::stod(value);
            } else if (key == "end") {
                if (value == "head")
                    c.donate_from = DonateEnd::HeadOfList;
                else if (value == "tail")
                    c.donate_from = DonateEnd::TailOfList;
                else
                    throw bad();
            } else if (key == "trigger") {
                c.anticipation_trigger = std::stoi(value);
            } else if (key == "order") {
                c.ordering = parse_order_policy(value);
            } else {
                throw DataError("unknown config key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    return c;
}

std::vector<std::vector<int>> plan_clusters(int workers, int clusters) {
    if (workers < 1 || clusters < 1 || clusters > workers)
        throw ConfigError("cannot split " + std::to_string(workers) + " workers into " +
                          std::to_string(clusters) + " clusters");
    std::vector<std::vector<int>> out(static_cast<std::size_t>(clusters));
    const int base = workers / clusters, extra = workers % clusters;
    int next = 0;
    for (int c = 0; c < clusters; ++c) {
        const int size = base + (c < extra ? 1 : 0);
        for (int i = 0; i < size; ++i)
            out[static_cast<std::size_t>(c)].push_back(next++);
    }
    return out;
}

Poller::Poller(std::vector<int> members, int self, Polling policy, std::uint64_t seed)
    : members_(std::move(members)), policy_(policy), rng_(seed) {
    auto it = std::find(members_.begin(), members_.end(), self);
    if (it == members_.end())
        throw ConfigError("worker is not a member of its own cluster");
    self_index_ = static_cast<std::size_t>(it - members_.begin());
}

std::optional<int> Poller::next() {
    const std::size_t n = members_.size();
    if (n < 2)
        return std::nullopt;
    if (policy_ == Polling::Random) {
        std::size_t pick = static_cast<std::size_t>(rng_.below(n - 1));
        if (pick >= self_index_)
            ++pick;
        return members_[pick];
    }
    const std::size_t idx = right_next_ ? (self_index_ + 1) % n : (self_index_ + n - 1) % n;
    right_next_ = !right_next_;
    return members_[idx];
}

std::size_t donation_count(std::size_t size, double fraction) noexcept {
    if (size == 0 || fraction <= 0.0)
        return 0;
    if (size == 1)
        return fraction >= 1.0 ? 1 : 0;
    const auto want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(size) - 1e-9));
    return std::min(want, size - 1);
}

}  // namespace adaptida
