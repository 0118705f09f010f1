#include "tracemark/lexgraph/graph_key.hpp"

#include "tracemark/common/crypto.hpp"
#include "tracemark/common/text.hpp"

namespace tracemark::lexgraph {

GraphKey::GraphKey(Bytes key) : key_(std::move(key)) {
    if (key_.size() < min_size) {
        throw ConfigurationError("graph key must be at least 16 bytes");
    }
}

unsigned label(std::string_view x, std::string_view y, const GraphKey& key) {
    std::string message = canonical(x);
    message.push_back('\0');
    message += canonical(y);
    const Digest d = hmac_sha256(
        key.bytes(), {reinterpret_cast<const std::uint8_t*>(message.data()), message.size()});
    return d.back() & 1U;
}

} // namespace tracemark::lexgraph
