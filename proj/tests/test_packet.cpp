#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netcache/packet.hpp"

using namespace netcache;

TEST_CASE("packet ordering is content-major, index-minor") {
    CHECK(PacketId{1, 2} < PacketId{1, 3});
    CHECK(PacketId{2, 1} > PacketId{1, 9});
    CHECK(PacketId{5, 5} == PacketId{5, 5});
}

TEST_CASE("packed keys are unique per (content, index)") {
    CHECK(PacketId{1, 2}.key() != PacketId{2, 1}.key());
    CHECK(PacketId{7, 7}.key() == PacketId{7, 7}.key());
}

TEST_CASE("request and data packets default to not nominated") {
    RequestPacket req;
    DataPacket data;
    CHECK(req.nf == kNotNominated);
    CHECK(data.nf == kNotNominated);
    CHECK(data.size_units == 1);
}
