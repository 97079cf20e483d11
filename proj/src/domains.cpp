#include "geometer/domains.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "geometer/text.hpp"

namespace geometer::net {

namespace {

// Snapshot of the public suffix list: the generic TLDs plus the country
// suffixes this toolkit routinely meets in UK-market source lists. Entries
// follow PSL rule syntax: "*." is a wildcard level, "!" marks an exception.
// Anything absent falls back to the last-two-labels rule.
constexpr std::array<std::string_view, 174> kSuffixRules = {
    // generic
    "com", "org", "net", "edu", "gov", "mil", "int", "info", "biz", "name",
    "pro", "mobi", "tel", "travel", "xxx", "aero", "coop", "museum", "jobs",
    "cat", "asia", "post", "xyz", "online", "site", "store", "tech", "blog",
    "news", "app", "dev", "page", "cloud", "digital", "media", "agency",
    "games", "casino", "bet", "bingo", "poker", "io", "ai", "co", "me", "tv",
    "cc", "ws", "example", "invalid", "localhost", "test",
    // united kingdom
    "uk", "co.uk", "org.uk", "net.uk", "ltd.uk", "plc.uk", "me.uk", "ac.uk",
    "gov.uk", "sch.uk", "nhs.uk", "police.uk", "mod.uk", "service.gov.uk",
    "gg", "je", "im",
    // europe
    "eu", "de", "fr", "it", "es", "nl", "be", "at", "ch", "li", "lu", "ie",
    "pt", "gr", "se", "no", "dk", "fi", "is", "pl", "cz", "sk", "hu", "ro",
    "bg", "hr", "si", "lt", "lv", "ee", "mt", "cy", "com.cy", "com.mt",
    "com.pl", "com.gr", "com.ro",
    // americas
    "us", "ca", "mx", "com.mx", "br", "com.br", "net.br", "org.br", "ar",
    "com.ar", "cl", "com.co",
    // asia-pacific
    "au", "com.au", "net.au", "org.au", "edu.au", "gov.au", "nz", "co.nz",
    "org.nz", "net.nz", "govt.nz", "jp", "co.jp", "or.jp", "ne.jp", "ac.jp",
    "go.jp", "cn", "com.cn", "net.cn", "org.cn", "gov.cn", "hk", "com.hk",
    "in", "co.in", "org.in", "net.in", "gov.in", "sg", "com.sg", "kr",
    "co.kr", "tw", "com.tw", "my", "com.my", "ph", "com.ph", "id", "co.id",
    // africa / middle east
    "za", "co.za", "org.za", "il", "co.il", "org.il", "tr", "com.tr", "ae",
    "ru", "su", "ua", "com.ua",
    // wildcard + exception samples kept for rule coverage
    "*.ck", "!www.ck",
};

const std::unordered_set<std::string_view>& suffix_rules() {
  static const std::unordered_set<std::string_view> rules(kSuffixRules.begin(),
                                                          kSuffixRules.end());
  return rules;
}

bool looks_like_ip(std::string_view host) {
  if (host.find(':') != std::string_view::npos) return true;  // IPv6
  bool all_digit_labels = !host.empty();
  std::size_t start = 0;
  while (start <= host.size() && all_digit_labels) {
    std::size_t dot = host.find('.', start);
    std::string_view label = host.substr(
        start, dot == std::string_view::npos ? host.size() - start
                                             : dot - start);
    if (label.empty() ||
        !std::all_of(label.begin(), label.end(),
                     [](char c) { return text::is_digit(c); })) {
      all_digit_labels = false;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return all_digit_labels;
}

std::vector<std::string_view> labels_of(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (start <= host.size()) {
    std::size_t dot = host.find('.', start);
    if (dot == std::string_view::npos) {
      labels.push_back(host.substr(start));
      break;
    }
    labels.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  return labels;
}

std::string join_from(const std::vector<std::string_view>& labels,
                      std::size_t first) {
  std::string out;
  for (std::size_t i = first; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out.append(labels[i]);
  }
  return out;
}

}  // namespace

std::string host_from_url(std::string_view url) {
  std::string_view rest = text::trim(url);
  if (rest.empty()) return "";
  if (std::size_t scheme = rest.find("://"); scheme != std::string_view::npos) {
    rest = rest.substr(scheme + 3);
  }
  if (std::size_t cut = rest.find_first_of("/?#"); cut != std::string_view::npos) {
    rest = rest.substr(0, cut);
  }
  if (std::size_t at = rest.rfind('@'); at != std::string_view::npos) {
    rest = rest.substr(at + 1);
  }
  // strip a trailing :port, but leave IPv6 literals alone
  if (std::size_t colon = rest.rfind(':'); colon != std::string_view::npos &&
                                           rest.find(':') == colon) {
    std::string_view port = rest.substr(colon + 1);
    if (!port.empty() && std::all_of(port.begin(), port.end(), [](char c) {
          return text::is_digit(c);
        })) {
      rest = rest.substr(0, colon);
    }
  }
  while (!rest.empty() && rest.front() == '.') rest.remove_prefix(1);
  while (!rest.empty() && rest.back() == '.') rest.remove_suffix(1);
  return text::fold(rest);
}

std::string registrable_domain(std::string_view url_or_host) {
  std::string host = host_from_url(url_or_host);
  if (host.empty()) {
    // keep the classifier's "non-empty domain for non-empty url" contract
    // even for degenerate inputs like bare paths
    std::string_view trimmed = text::trim(url_or_host);
    return text::fold(trimmed);
  }
  if (looks_like_ip(host)) return host;

  const auto labels = labels_of(host);
  const auto& rules = suffix_rules();

  // longest matching suffix; exceptions shorten the matched rule by one label
  std::size_t suffix_start = labels.size();  // labels.size() == no match
  bool matched = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::string candidate = join_from(labels, i);
    if (rules.count("!" + candidate)) {
      // exception rule: the candidate itself is registrable
      return candidate;
    }
    if (rules.count(candidate)) {
      suffix_start = i;
      matched = true;
      break;  // scanning outward-in, first hit is the longest suffix
    }
    if (i + 1 < labels.size()) {
      std::string wildcard = "*." + join_from(labels, i + 1);
      if (rules.count(wildcard)) {
        suffix_start = i;
        matched = true;
        break;
      }
    }
  }
  if (!matched) {
    // unknown suffix: last two labels
    if (labels.size() <= 2) return host;
    return join_from(labels, labels.size() - 2);
  }
  if (suffix_start == 0) return host;  // host is itself a public suffix
  return join_from(labels, suffix_start - 1);
}

}  // namespace geometer::net
