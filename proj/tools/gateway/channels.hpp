#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <rba/raster.hpp>

namespace rba::gateway {

enum class Channel { rgb, green, edges, highpass };

/// Throws ParameterError for names other than rgb, green, edges, highpass.
Channel parse_channel(std::string_view name);

struct ChannelRequest {
    Channel channel = Channel::green;
    int kernel = 0;  // 0 selects 5 for edges and 51 for highpass
    bool mean_blur = false;
};

/// PNG bytes of the requested view. Edges and high-pass work on the green channel.
/// Both the CLI and the service go through here.
std::vector<std::uint8_t> render_channel_png(const ColorImage& img, const ChannelRequest& req);

}  // namespace rba::gateway
