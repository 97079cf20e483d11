#include <doctest.h>

#include "geometer/domains.hpp"

using namespace geometer;

TEST_CASE("host extraction") {
  CHECK(net::host_from_url("https://www.bet365.com/casino") == "www.bet365.com");
  CHECK(net::host_from_url("http://User@Host.Example.COM:8080/p?q#f") ==
        "host.example.com");
  CHECK(net::host_from_url("news.co.uk/path") == "news.co.uk");
  CHECK(net::host_from_url("  https://a.b.c  ") == "a.b.c");
  CHECK(net::host_from_url("") == "");
}

TEST_CASE("registrable domains under known suffixes") {
  CHECK(net::registrable_domain("https://promo.brand.com/x") == "brand.com");
  CHECK(net::registrable_domain("https://news.co.uk/igaming") == "news.co.uk");
  CHECK(net::registrable_domain("deep.promo.news.co.uk") == "news.co.uk");
  CHECK(net::registrable_domain(
            "https://www.gamblingcommission.gov.uk/public-register") ==
        "gamblingcommission.gov.uk");
  CHECK(net::registrable_domain("https://www.companieshouse.gov.uk/x") ==
        "companieshouse.gov.uk");
  CHECK(net::registrable_domain("aurorabet.example") == "aurorabet.example");
}

TEST_CASE("unknown suffixes fall back to last two labels") {
  CHECK(net::registrable_domain("a.b.notarealtld") == "b.notarealtld");
  CHECK(net::registrable_domain("single") == "single");
}

TEST_CASE("wildcard and exception rules") {
  CHECK(net::registrable_domain("foo.anything.ck") == "foo.anything.ck");
  CHECK(net::registrable_domain("anything.ck") == "anything.ck");
  CHECK(net::registrable_domain("www.ck") == "www.ck");
  CHECK(net::registrable_domain("sub.www.ck") == "www.ck");
}

TEST_CASE("degenerate hosts") {
  CHECK(net::registrable_domain("192.168.0.1") == "192.168.0.1");
  CHECK(net::registrable_domain("co.uk") == "co.uk");  // bare public suffix
  CHECK(net::registrable_domain("") == "");
  CHECK(net::registrable_domain("https://bet365.com:443/") == "bet365.com");
}
