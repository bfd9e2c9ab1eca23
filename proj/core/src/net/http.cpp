// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "cfgrag/net/http.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace cfgrag::net {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_begin = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override {
    const auto [origin, path] = split_url(request.url);
    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout).count();
    client.set_connection_timeout(std::max<long long>(1, secs), 0);
    client.set_read_timeout(std::max<long long>(1, secs), 0);
    client.set_write_timeout(std::max<long long>(1, secs), 0);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") content_type = v;
      else headers.emplace(k, v);
    }

    httplib::Result res = request.method == "GET" ? client.Get(path, headers)
                                                  : client.Post(path, headers, request.body, content_type);
    if (!res) return {0, "", httplib::to_string(res.error())};
    return {res->status, res->body, ""};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport() { return std::make_shared<HttplibTransport>(); }

std::chrono::milliseconds RetryPolicy::delay_before(int retry) const {
  const double scale = std::pow(factor, std::max(0, retry - 1));
  return std::chrono::milliseconds(static_cast<long long>(static_cast<double>(base_delay.count()) * scale));
}

bool is_transient(const HttpResponse& r) noexcept { return r.status == 0 || r.status == 429 || r.status >= 500; }

RetriedResponse send_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy) {
  RetriedResponse out;
  out.response = transport.send(request);
  while (is_transient(out.response) && out.retries < policy.max_retries) {
    ++out.retries;
    const auto delay = policy.delay_before(out.retries);
    if (policy.sleep) policy.sleep(delay);
    else std::this_thread::sleep_for(delay);
    out.response = transport.send(request);
  }
  return out;
}

std::string env_or_empty(const std::string& name) {
  if (name.empty()) return {};
  const char* v = std::getenv(name.c_str());
  return v ? std::string(v) : std::string();
}

}  // namespace cfgrag::net
