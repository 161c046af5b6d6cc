#include <gtest/gtest.h>

#include <thread>

#include "../support/line_client.hpp"
#include "spaace/cosim.hpp"
#include "spaace/scenario.hpp"

using namespace spaace;
using testing_support::LineClient;

namespace {

ControllerParams spaace_m() { return named_case("case1_1").effective_controller(); }

// Server on a free port, served from a background thread.
struct RunningServer {
    CosimServer server;
    std::thread loop;
    explicit RunningServer(ControllerParams p) : server(std::move(p), 0), loop([this] { server.serve(); }) {}
    ~RunningServer() {
        server.stop();
        loop.join();
    }
};

}  // namespace

TEST(Session, StepMatchesLibraryBitwise) {
    CosimSession session(spaace_m());
    Modulator lib(spaace_m());
    for (int k = 0; k < 30; ++k) {
        const double t = k * 2e-4, x = 0.3 + 0.01 * k;
        const auto reply = session.handle("STEP " + format_double(t) + " 0.7 " + format_double(x));
        EXPECT_EQ(reply.text, "REF " + format_double(lib.modulate_step(t, 0.7, x)));
        EXPECT_FALSE(reply.close);
    }
}

TEST(Session, MalformedFramesKeepSessionAlive) {
    CosimSession session(spaace_m());
    EXPECT_EQ(session.handle("STEP 0.0 0.7").text, "ERR malformed frame");
    EXPECT_EQ(session.handle("STEP 0.0 0.7 abc").text, "ERR malformed frame");
    EXPECT_EQ(session.handle("").text, "ERR malformed frame");
    EXPECT_EQ(session.handle("HELLO").text, "ERR malformed frame");
    EXPECT_EQ(session.handle("STEP 0.0 0.7 0.3\r").text, "REF 0.7");
}

TEST(Session, NonMonotoneStepIsReported) {
    CosimSession session(spaace_m());
    (void)session.handle("STEP 0.001 0.7 0.3");
    EXPECT_EQ(session.handle("STEP 0.001 0.7 0.3").text.rfind("ERR ", 0), 0u);
    EXPECT_EQ(session.handle("STEP 0.002 0.7 0.3").text.rfind("REF ", 0), 0u);
}

TEST(Session, ResetParamsBye) {
    CosimSession session(spaace_m());
    (void)session.handle("STEP 0.001 0.7 0.3");
    EXPECT_EQ(session.handle("RESET").text, "OK");
    EXPECT_FALSE(session.modulator().state().last_time());
    EXPECT_EQ(session.handle("PARAMS mode=spaace m1=-0.2 t_sample=1ms").text, "OK");
    EXPECT_EQ(session.modulator().params().mode, Mode::Spaace);
    EXPECT_EQ(session.modulator().params().m1, -0.2);
    EXPECT_EQ(session.modulator().params().t_sample, 1e-3);
    EXPECT_EQ(session.handle("PARAMS n=0").text, "ERR invalid controller params: n must be ≥ 1");
    EXPECT_EQ(session.modulator().params().n, 4);
    EXPECT_EQ(session.handle("PARAMS bogus=1").text, "ERR unknown parameter 'bogus'");
    EXPECT_EQ(session.handle("PARAMS").text, "ERR malformed frame");
    const auto bye = session.handle("BYE");
    EXPECT_EQ(bye.text, "BYE");
    EXPECT_TRUE(bye.close);
}

TEST(Server, LoopbackSessionAndBye) {
    RunningServer srv(spaace_m());
    LineClient c(srv.server.port());
    EXPECT_EQ(c.request("STEP 0 0.3 0.3"), "REF 0.3");
    EXPECT_EQ(c.request("STEP 2"), "ERR malformed frame");
    EXPECT_EQ(c.request("RESET"), "OK");
    EXPECT_EQ(c.request("BYE"), "BYE");
    EXPECT_EQ(c.read_line(), "");  // closed by the server
}

TEST(Server, PipelinedFramesInOneWrite) {
    RunningServer srv(spaace_m());
    LineClient c(srv.server.port());
    c.send_raw("STEP 0 0.3 0.3\nSTEP 0.0002 0.3 0.3\nRESET\n");
    EXPECT_EQ(c.read_line(), "REF 0.3");
    EXPECT_EQ(c.read_line(), "REF 0.3");
    EXPECT_EQ(c.read_line(), "OK");
}

TEST(Server, ConcurrentSessionsAreIsolated) {
    RunningServer srv(spaace_m());
    const auto port = srv.server.port();
    auto drive = [port](double x_offset, std::vector<std::string>& out) {
        LineClient c(port);
        for (int k = 0; k < 200; ++k) {
            out.push_back(c.request("STEP " + format_double(k * 2e-4) + " 0.7 " + format_double(0.3 + x_offset + 0.001 * k)));
        }
    };
    std::vector<std::string> a, b, a_alone;
    std::thread ta([&] { drive(0.0, a); });
    std::thread tb([&] { drive(0.1, b); });
    ta.join();
    tb.join();
    drive(0.0, a_alone);
    EXPECT_EQ(a, a_alone);
    EXPECT_NE(a, b);
}

TEST(Server, BusyPortFails) {
    RunningServer srv(spaace_m());
    EXPECT_THROW(CosimServer(spaace_m(), srv.server.port()), Error);
}
