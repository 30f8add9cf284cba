#include "radonmap.hpp"

#include "error.hpp"

#include "json.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <sstream>

namespace curvnd {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  fail(Errc::ParseError, "line " + std::to_string(line) + ": " + msg);
}

struct Lexer {
  const std::string& s;
  std::size_t i = 0;
  int line;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i;
    return true;
  }
  double number() {
    skip();
    std::size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
      std::size_t save = i++;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      else
        i = save;
    }
    double v = 0;
    auto res = std::from_chars(s.data() + start, s.data() + i, v);
    if (start == i || res.ec != std::errc() || res.ptr != s.data() + i) parse_fail(line, "bad number");
    return v;
  }
  int integer() {
    skip();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    int v = 0;
    auto res = std::from_chars(s.data() + start, s.data() + i, v);
    if (start == i || res.ec != std::errc()) parse_fail(line, "expected integer");
    return v;
  }
};

Polynomial<double> parse_component(const std::string& text, int line, int n, int d1) {
  Lexer lx{text, 0, line};
  Polynomial<double> p(n + d1);
  bool first = true;
  while (!lx.at_end()) {
    double sign = 1.0;
    if (lx.accept('+')) {
    } else if (lx.accept('-')) {
      sign = -1.0;
    } else if (!first) {
      parse_fail(line, "expected '+' or '-'");
    }
    first = false;
    double coeff = 1.0;
    std::vector<int> e(n + d1, 0);
    bool need_factor = true;
    while (need_factor) {
      char c = lx.peek();
      if (c == 'x' || c == 't') {
        ++lx.i;
        int idx = lx.integer();
        int lim = c == 'x' ? n : d1;
        if (idx < 1 || idx > lim) parse_fail(line, std::string("variable index out of range for ") + c);
        int pw = 1;
        if (lx.accept('^')) pw = lx.integer();
        e[(c == 'x' ? 0 : n) + idx - 1] += pw;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        double v = lx.number();
        if (lx.accept('^')) v = std::pow(v, lx.integer());
        coeff *= v;
      } else {
        parse_fail(line, c == '\0' ? "unexpected end of line" : std::string("unexpected character '") + c + "'");
      }
      need_factor = lx.accept('*');
    }
    p.add_term(e, sign * coeff);
  }
  if (first) parse_fail(line, "empty component");
  return p;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

PolynomialMap parse_map_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0, n = -1, d1 = -1;
  std::optional<std::pair<double, double>> box;
  std::vector<std::pair<int, std::string>> comps;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq != std::string::npos) {
      std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
      Lexer lx{val, 0, line};
      if (key == "n") {
        n = lx.integer();
      } else if (key == "d1") {
        d1 = lx.integer();
      } else if (key == "box") {
        double lo = lx.accept('-') ? -lx.number() : lx.number();
        double hi = lx.accept('-') ? -lx.number() : lx.number();
        if (!(lo < hi)) parse_fail(line, "box needs lo < hi");
        box = std::make_pair(lo, hi);
      } else {
        parse_fail(line, "unknown header '" + key + "'");
      }
      if (!lx.at_end()) parse_fail(line, "trailing characters in header");
      continue;
    }
    comps.emplace_back(line, s);
  }
  if (n < 1) fail(Errc::ParseError, "missing or invalid 'n' header");
  if (d1 < 0) fail(Errc::ParseError, "missing 'd1' header");
  if (comps.empty()) fail(Errc::ParseError, "no components");
  std::vector<Polynomial<double>> ps;
  for (const auto& [l, s] : comps) ps.push_back(parse_component(s, l, n, d1));
  PolynomialMap m(n, d1, std::move(ps));
  m.box = box;
  return m;
}

std::string map_to_text(const PolynomialMap& phi) {
  std::ostringstream out;
  out << "n = " << phi.n() << "\n";
  out << "d1 = " << phi.d1() << "\n";
  if (phi.box) out << "box = " << format_double(phi.box->first) << " " << format_double(phi.box->second) << "\n";
  for (const auto& c : phi.components()) {
    if (c.is_zero()) {
      out << "0\n";
      continue;
    }
    bool first = true;
    for (const auto& [e, v] : c.terms()) {
      if (first)
        out << (v < 0 ? "-" : "");
      else
        out << (v < 0 ? " - " : " + ");
      first = false;
      out << format_double(std::abs(v));
      for (int i = 0; i < phi.nvars(); ++i) {
        if (e[i] == 0) continue;
        out << " * " << (i < phi.n() ? 'x' : 't') << (i < phi.n() ? i + 1 : i - phi.n() + 1);
        if (e[i] > 1) out << '^' << e[i];
      }
    }
    out << "\n";
  }
  return out.str();
}

PolynomialMap parse_map_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const int n = j.at("n").get<int>(), d1 = j.at("d1").get<int>();
    if (n < 1 || d1 < 0) fail(Errc::ParseError, "invalid dimensions");
    std::vector<Polynomial<double>> ps;
    for (const auto& comp : j.at("components")) {
      Polynomial<double> p(n + d1);
      for (const auto& term : comp) {
        auto x = term.value("x", std::vector<int>(n, 0));
        auto t = term.value("t", std::vector<int>(d1, 0));
        if (static_cast<int>(x.size()) != n || static_cast<int>(t.size()) != d1)
          fail(Errc::ParseError, "exponent array length mismatch");
        std::vector<int> e = x;
        e.insert(e.end(), t.begin(), t.end());
        p.add_term(e, term.at("coeff").get<double>());
      }
      ps.push_back(std::move(p));
    }
    if (ps.empty()) fail(Errc::ParseError, "no components");
    PolynomialMap m(n, d1, std::move(ps));
    if (j.contains("box")) {
      auto b = j.at("box").get<std::vector<double>>();
      if (b.size() != 2 || !(b[0] < b[1])) fail(Errc::ParseError, "box needs [lo, hi] with lo < hi");
      m.box = std::make_pair(b[0], b[1]);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("json: ") + e.what());
  }
}

std::string map_to_json(const PolynomialMap& phi) {
  nlohmann::ordered_json j;
  j["n"] = phi.n();
  j["d1"] = phi.d1();
  if (phi.box) j["box"] = {phi.box->first, phi.box->second};
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : phi.components()) {
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [e, v] : c.terms()) {
      nlohmann::ordered_json t;
      t["coeff"] = v;
      t["x"] = std::vector<int>(e.begin(), e.begin() + phi.n());
      t["t"] = std::vector<int>(e.begin() + phi.n(), e.end());
      terms.push_back(t);
    }
    comps.push_back(terms);
  }
  j["components"] = comps;
  return j.dump(2) + "\n";
}

PolynomialMap parse_map(const std::string& text) {
  std::size_t a = text.find_first_not_of(" \t\r\n");
  if (a != std::string::npos && text[a] == '{') return parse_map_json(text);
  return parse_map_text(text);
}

}  // namespace curvnd
