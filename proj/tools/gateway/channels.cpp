#include "channels.hpp"

#include <string>

#include <rba/enhance.hpp>
#include <rba/errors.hpp>
#include <rba/image_io.hpp>

namespace rba::gateway {

Channel parse_channel(std::string_view name) {
    if (name == "rgb") return Channel::rgb;
    if (name == "green") return Channel::green;
    if (name == "edges") return Channel::edges;
    if (name == "highpass") return Channel::highpass;
    throw ParameterError("unknown channel '" + std::string(name) + "' (expected rgb, green, edges or highpass)");
}

std::vector<std::uint8_t> render_channel_png(const ColorImage& img, const ChannelRequest& req) {
    switch (req.channel) {
        case Channel::rgb: return encode_png(img);
        case Channel::green: return encode_png(green_channel(img));
        case Channel::edges: return encode_png(laplacian_edges(green_channel(img), req.kernel ? req.kernel : 5));
        case Channel::highpass:
            return encode_png(to_gray(high_pass(green_channel(img), req.kernel ? req.kernel : 51, !req.mean_blur)));
    }
    throw ParameterError("unknown channel");
}

}  // namespace rba::gateway
