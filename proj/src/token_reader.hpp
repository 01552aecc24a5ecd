#pragma once

#include <istream>
#include <string>

#include "perfectmap/errors.hpp"

namespace perfectmap::detail {

// Whitespace-separated token stream with 1-based line tracking and '#'
// comment lines, shared by the GM and UG readers.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  int line() const { return line_; }

  bool next(std::string& tok) {
    tok.clear();
    for (;;) {
      if (pos_ >= buf_.size()) {
        if (!std::getline(in_, buf_)) return false;
        ++line_;
        pos_ = 0;
        // comment line: first non-blank char is '#'
        auto first = buf_.find_first_not_of(" \t\r");
        if (first != std::string::npos && buf_[first] == '#') {
          pos_ = buf_.size();
          continue;
        }
      }
      while (pos_ < buf_.size() && std::isspace(static_cast<unsigned char>(buf_[pos_]))) ++pos_;
      if (pos_ >= buf_.size()) continue;
      std::size_t start = pos_;
      while (pos_ < buf_.size() && !std::isspace(static_cast<unsigned char>(buf_[pos_]))) ++pos_;
      tok = buf_.substr(start, pos_ - start);
      return true;
    }
  }

  std::string require(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(line_, std::string("unexpected end of input, expected ") + what);
    return tok;
  }

  void expect_keyword(const char* kw) {
    std::string tok = require(kw);
    if (tok != kw) throw ParseError(line_, std::string("expected '") + kw + "', got '" + tok + "'");
  }

  long long require_int(const char* what) {
    std::string tok = require(what);
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(line_, std::string("expected integer for ") + what + ", got '" + tok + "'");
    }
  }

  double require_double(const char* what) {
    std::string tok = require(what);
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(line_, std::string("expected number for ") + what + ", got '" + tok + "'");
    }
  }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

}  // namespace perfectmap::detail
