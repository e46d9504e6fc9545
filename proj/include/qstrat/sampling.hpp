#pragma once

// IID, quantile-stratified (QS) and layered quantile-stratified (LQS)
// sampling by inverse transform.
//
//   IID  draws every uniform from (0,1); block indices are recorded only.
//   QS   picks a random permutation of the m blocks and draws one uniform
//        inside each block.
//   LQS  concatenates independent QS subsamples of sizes m_1..m_K and
//        shuffles the result.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstrat/distribution.hpp"
#include "qstrat/errors.hpp"
#include "qstrat/rng.hpp"

namespace qstrat {

class LayerSpec {
public:
    LayerSpec() = default;

    explicit LayerSpec(std::vector<int> sizes) : sizes_(std::move(sizes)) {
        if (sizes_.empty()) throw ConfigError("layer spec needs at least one layer");
        for (const int s : sizes_) {
            if (s < 1) throw ConfigError("every layer size must be >= 1");
        }
    }

    static LayerSpec single(int m) { return LayerSpec(std::vector<int>{m}); }
    static LayerSpec ones(int m) { return LayerSpec(std::vector<int>(static_cast<std::size_t>(m), 1)); }

    // Parses "18,9,3".
    static LayerSpec parse(std::string_view text) {
        std::vector<int> sizes;
        std::string item;
        std::istringstream is{std::string(text)};
        while (std::getline(is, item, ',')) {
            std::size_t used = 0;
            int value = 0;
            try {
                value = std::stoi(item, &used);
            } catch (const std::exception&) {
                throw ConfigError("bad layer size '" + item + "'");
            }
            if (used != item.size()) throw ConfigError("bad layer size '" + item + "'");
            sizes.push_back(value);
        }
        return LayerSpec(std::move(sizes));
    }

    const std::vector<int>& sizes() const { return sizes_; }
    std::size_t count() const { return sizes_.size(); }
    int total() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

    // Sum over layers of 1/m_k.
    double reciprocal_sum() const {
        double acc = 0.0;
        for (const int s : sizes_) acc += 1.0 / s;
        return acc;
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(sizes_[i]);
        }
        return out;
    }

private:
    std::vector<int> sizes_;
};

enum class MethodKind { IID, QS, LQS };

struct Method {
    MethodKind kind = MethodKind::IID;
    LayerSpec layers;  // meaningful only for LQS

    static Method iid() { return {MethodKind::IID, {}}; }
    static Method qs() { return {MethodKind::QS, {}}; }
    static Method lqs(LayerSpec layers) { return {MethodKind::LQS, std::move(layers)}; }
};

inline std::string_view method_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::IID: return "iid";
        case MethodKind::QS: return "qs";
        case MethodKind::LQS: return "lqs";
    }
    return "?";
}

inline MethodKind parse_method(std::string_view name) {
    if (name == "iid") return MethodKind::IID;
    if (name == "qs") return MethodKind::QS;
    if (name == "lqs") return MethodKind::LQS;
    throw ConfigError("unknown method '" + std::string(name) + "' (expected iid, qs or lqs)");
}

struct SampleBatch {
    Method method;
    std::vector<double> uniforms;  // U_i in (0,1)
    std::vector<double> values;    // X_i = Q(U_i)
    std::vector<int> blocks;       // block of U_i within its layer, 1-based
    std::vector<int> layer_of;     // LQS layer of each value (1-based); all 1 otherwise
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    std::size_t size() const { return values.size(); }
};

// Block index ceil(m u) of a uniform, clamped to 1..m.
inline int block_of(double u, int m) {
    const auto s = static_cast<int>(std::ceil(u * m));
    return std::clamp(s, 1, m);
}

// A uniform on block s of m, strictly inside (0,1) and with ceil(m u) == s.
inline double uniform_in_block(int s, int m, double v) {
    double u = (static_cast<double>(s - 1) + v) / m;
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    while (u > 0.0 && std::ceil(u * m) > s) u = std::nextafter(u, 0.0);
    while (u < 1.0 && std::ceil(u * m) < s) u = std::nextafter(u, 1.0);
    return u;
}

// Uniformly random permutation of 1..m (SRSWOR of all m block indices).
inline std::vector<int> srswor_perm(int m, Rng& rng) {
    if (m < 1) throw DomainError("permutation size must be >= 1");
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 1);
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

namespace detail {

inline void check_size(int m) {
    if (m < 1) throw DomainError("sample size must be >= 1");
}

inline SampleBatch empty_batch(Method method, int m, const Rng& rng) {
    SampleBatch batch;
    batch.method = std::move(method);
    const auto n = static_cast<std::size_t>(m);
    batch.uniforms.reserve(n);
    batch.values.reserve(n);
    batch.blocks.reserve(n);
    batch.layer_of.reserve(n);
    batch.seed = rng.seed();
    batch.stream = rng.stream();
    return batch;
}

// Appends one QS subsample of size m (uniforms and blocks only).
inline void append_qs_uniforms(SampleBatch& batch, int m, int layer, Rng& rng) {
    const std::vector<int> perm = srswor_perm(m, rng);
    for (const int s : perm) {
        batch.uniforms.push_back(uniform_in_block(s, m, rng.uniform_open()));
        batch.blocks.push_back(s);
        batch.layer_of.push_back(layer);
    }
}

inline void fill_values(SampleBatch& batch, const Distribution& dist) {
    batch.values.clear();
    for (const double u : batch.uniforms) batch.values.push_back(dist.quantile(u));
}

}  // namespace detail

inline SampleBatch sample_iid(const Distribution& dist, int m, Rng& rng) {
    detail::check_size(m);
    SampleBatch batch = detail::empty_batch(Method::iid(), m, rng);
    for (int i = 0; i < m; ++i) {
        const double u = rng.uniform_open();
        batch.uniforms.push_back(u);
        batch.blocks.push_back(block_of(u, m));
        batch.layer_of.push_back(1);
    }
    detail::fill_values(batch, dist);
    return batch;
}

inline SampleBatch sample_qs(const Distribution& dist, int m, Rng& rng) {
    detail::check_size(m);
    SampleBatch batch = detail::empty_batch(Method::qs(), m, rng);
    detail::append_qs_uniforms(batch, m, 1, rng);
    detail::fill_values(batch, dist);
    return batch;
}

inline SampleBatch sample_lqs(const Distribution& dist, const LayerSpec& layers, Rng& rng) {
    if (layers.count() == 0) throw ConfigError("layer spec needs at least one layer");
    const int m = layers.total();
    SampleBatch batch = detail::empty_batch(Method::lqs(layers), m, rng);
    int layer = 1;
    for (const int size : layers.sizes()) detail::append_qs_uniforms(batch, size, layer++, rng);

    // Fisher-Yates over all m (layer, block) labels.
    for (std::size_t i = batch.uniforms.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(batch.uniforms[i], batch.uniforms[j]);
        std::swap(batch.blocks[i], batch.blocks[j]);
        std::swap(batch.layer_of[i], batch.layer_of[j]);
    }
    detail::fill_values(batch, dist);
    return batch;
}

// Dispatches on the method. For LQS the layer sizes must sum to m.
inline SampleBatch sample(const Distribution& dist, int m, const Method& method, Rng& rng) {
    switch (method.kind) {
        case MethodKind::IID: return sample_iid(dist, m, rng);
        case MethodKind::QS: return sample_qs(dist, m, rng);
        case MethodKind::LQS:
            if (method.layers.total() != m) {
                throw ConfigError("layer sizes sum to " + std::to_string(method.layers.total()) +
                                  " but m = " + std::to_string(m));
            }
            return sample_lqs(dist, method.layers, rng);
    }
    throw ConfigError("unknown sampling method");
}

}  // namespace qstrat
