#pragma once

#include <string>
#include <string_view>

namespace geometer::net {

// Lowercased host part of a URL ("https://User@Www.Foo.co.uk:8443/x" ->
// "www.foo.co.uk"). Accepts scheme-less input; returns "" for inputs with
// no host-like part.
std::string host_from_url(std::string_view url);

// Registrable domain of a URL or bare host, per a bundled public-suffix
// snapshot ("promo.brand.com" -> "brand.com", "news.co.uk" -> "news.co.uk").
// Unknown suffixes fall back to the last two labels. Hosts that are IP
// addresses or are themselves a public suffix are returned unchanged.
// Returns "" only for empty/whitespace input.
std::string registrable_domain(std::string_view url_or_host);

}  // namespace geometer::net
