#pragma once

/**
 * @file   server.hpp
 * @brief  HTTP binding of the JSON request dispatcher: POST /api.
 */

#include <string>

#include "httplib.h"

#include "elspline/curveio.hpp"

namespace elspline::io {

/// Requests share nothing but the immutable constants, so handlers may run concurrently.
inline void configure_server(httplib::Server& server) {
  server.set_payload_max_length(8u << 20);
  server.Post("/api", [](const httplib::Request& req, httplib::Response& res) {
    res.set_content(handle_request_text(req.body), "application/json; charset=utf-8");
  });
  server.Get("/api", [](const httplib::Request&, httplib::Response& res) {
    res.status = 405;
    res.set_content(error_json(ErrorCode::ParseError, "use POST with a JSON body").dump(), "application/json; charset=utf-8");
  });
}

}  // namespace elspline::io
