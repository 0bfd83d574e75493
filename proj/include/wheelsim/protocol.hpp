#pragma once

// Session wire protocol: JSON text frames with a "type" discriminator.
//
//   client -> server   hello, input, end
//   server -> client   welcome, frame, ended, error
//
// Unknown fields are ignored on decode.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wheelsim/input.hpp"
#include "wheelsim/level.hpp"
#include "wheelsim/session.hpp"

namespace wheelsim::wire {

struct Hello {
  std::string level_id;
  std::optional<DeviceDescriptor> device_descriptor;
  std::optional<Calibration> calibration;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct Input {
  double t{0.0};
  std::vector<double> axes;
  friend bool operator==(const Input&, const Input&) = default;
};

struct End {
  friend bool operator==(const End&, const End&) = default;
};

struct Welcome {
  Level level;
  ChairParams params;
  double dt{kDefaultDt};
  friend bool operator==(const Welcome&, const Welcome&) = default;
};

struct FrameMsg {
  Frame frame;
  friend bool operator==(const FrameMsg&, const FrameMsg&) = default;
};

struct Ended {
  SessionReport report;
  friend bool operator==(const Ended&, const Ended&) = default;
};

struct Error {
  std::string code;  ///< unknown_level, bad_message, session_ended
  std::string message;
  friend bool operator==(const Error&, const Error&) = default;
};

using Message = std::variant<Hello, Input, End, Welcome, FrameMsg, Ended, Error>;

std::string_view type_name(const Message& m);

std::string encode(const Message& m);
/// Throws DecodeError naming the offending JSON path.
Message decode(std::string_view text);

}  // namespace wheelsim::wire
