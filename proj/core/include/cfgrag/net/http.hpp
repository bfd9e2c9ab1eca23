// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

namespace cfgrag::net {

struct HttpRequest {
  std::string method = "POST";
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{60'000};
};

struct HttpResponse {
  int status = 0;  // 0 = transport failure (connect, timeout, TLS)
  std::string body;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_default_transport();

/// Exponential backoff: delay(n) = base * factor^(n-1) before retry n.
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for

  std::chrono::milliseconds delay_before(int retry) const;
};

/// 429, 5xx and transport failures are retried.
bool is_transient(const HttpResponse& r) noexcept;

struct RetriedResponse {
  HttpResponse response;
  int retries = 0;
};

/// Sends with retries on transient failures. Returns the last response;
/// callers decide whether a non-2xx status is an error.
RetriedResponse send_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy);

/// Caps concurrent in-flight requests.
class InflightLimiter {
 public:
  explicit InflightLimiter(int bound) : sem_(bound < 1 ? 1 : bound) {}

  class Permit {
   public:
    explicit Permit(InflightLimiter& l) : l_(&l) { l_->sem_.acquire(); }
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    ~Permit() { l_->sem_.release(); }

   private:
    InflightLimiter* l_;
  };

  Permit acquire() { return Permit(*this); }

 private:
  std::counting_semaphore<> sem_;
};

/// Value of the environment variable, or empty.
std::string env_or_empty(const std::string& name);

}  // namespace cfgrag::net
