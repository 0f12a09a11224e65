#include "matchgame/instance_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace matchgame {

namespace {

using Json = nlohmann::ordered_json;
using Pointer = Json::json_pointer;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Locating a JSON pointer in the source text.  The text has already been
// parsed, so the scanner can assume it is well formed.

class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  // byte offset of the value at `ptr`, or of the deepest ancestor found
  std::size_t offset(const Pointer& ptr) const {
    std::vector<std::string> tokens;
    for (Pointer p = ptr; !p.empty(); p = p.parent_pointer()) tokens.insert(tokens.begin(), p.back());
    std::size_t pos = skip_ws(0);
    for (const auto& token : tokens) {
      auto next = child(pos, token);
      if (!next) break;
      pos = *next;
    }
    return pos;
  }

  std::pair<std::size_t, std::size_t> line_column(std::size_t offset) const {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < offset && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return {line, column};
  }

 private:
  std::size_t skip_ws(std::size_t pos) const {
    while (pos < text_.size() && (text_[pos] == ' ' || text_[pos] == '\n' || text_[pos] == '\r' || text_[pos] == '\t'))
      ++pos;
    return pos;
  }

  // position just past the string starting at pos; the raw contents in `out`
  std::size_t skip_string(std::size_t pos, std::string* out = nullptr) const {
    ++pos;
    while (pos < text_.size() && text_[pos] != '"') {
      if (text_[pos] == '\\') {
        if (out) out->push_back(text_[pos + 1]);
        pos += 2;
      } else {
        if (out) out->push_back(text_[pos]);
        ++pos;
      }
    }
    return pos + 1;
  }

  std::size_t skip_value(std::size_t pos) const {
    pos = skip_ws(pos);
    if (pos >= text_.size()) return pos;
    const char c = text_[pos];
    if (c == '"') return skip_string(pos);
    if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos;
      while (true) {
        pos = skip_ws(pos);
        if (pos >= text_.size() || text_[pos] == close) return pos + 1;
        if (text_[pos] == ',') {
          ++pos;
          continue;
        }
        if (c == '{') {
          pos = skip_ws(skip_string(pos));
          ++pos;  // ':'
        }
        pos = skip_value(pos);
      }
    }
    while (pos < text_.size() && std::string_view(",]} \n\r\t").find(text_[pos]) == std::string_view::npos) ++pos;
    return pos;
  }

  std::optional<std::size_t> child(std::size_t pos, const std::string& token) const {
    if (pos >= text_.size()) return std::nullopt;
    if (text_[pos] == '{') {
      ++pos;
      while (true) {
        pos = skip_ws(pos);
        if (pos >= text_.size() || text_[pos] == '}') return std::nullopt;
        if (text_[pos] == ',') {
          ++pos;
          continue;
        }
        std::string key;
        pos = skip_ws(skip_string(pos, &key)) + 1;
        pos = skip_ws(pos);
        if (key == token) return pos;
        pos = skip_value(pos);
      }
    }
    if (text_[pos] == '[') {
      std::size_t index = 0;
      try {
        index = std::stoul(token);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      ++pos;
      for (std::size_t k = 0;; ++k) {
        pos = skip_ws(pos);
        if (pos >= text_.size() || text_[pos] == ']') return std::nullopt;
        if (k == index) return pos;
        pos = skip_ws(skip_value(pos));
        if (pos < text_.size() && text_[pos] == ',') ++pos;
      }
    }
    return std::nullopt;
  }

  std::string_view text_;
};

// ---------------------------------------------------------------------------
// Typed access with located errors.

class Reader {
 public:
  Reader(std::string_view text, std::string_view format) : locator_(text) {
    try {
      root_ = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
      auto [line, column] = locator_.line_column(e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError(syntax_message(e.what()), line, column);
    }
    const Pointer here;
    if (!root_.is_object()) fail(here, "document must be a JSON object");
    const std::string expected = "matchgame-" + std::string(format);
    if (text_of(Pointer("/format")) != expected) fail(Pointer("/format"), "expected format '" + expected + "'");
    if (integer(Pointer("/version")) != kFileVersion)
      fail(Pointer("/version"), "unsupported version; this build reads version " + std::to_string(kFileVersion));
  }

  [[noreturn]] void fail(const Pointer& ptr, const std::string& message) const {
    auto [line, column] = locator_.line_column(locator_.offset(ptr));
    const std::string where = ptr.empty() ? std::string("document") : ptr.to_string();
    throw ParseError(where + ": " + message, line, column);
  }

  bool has(const Pointer& ptr) const { return root_.contains(ptr) && !root_.at(ptr).is_null(); }

  const Json& at(const Pointer& ptr) const {
    if (!root_.contains(ptr)) fail(ptr.parent_pointer(), "missing field '" + ptr.back() + "'");
    return root_.at(ptr);
  }

  const Json& array(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_array()) fail(ptr, "expected an array");
    return v;
  }

  const Json& object(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_object()) fail(ptr, "expected an object");
    return v;
  }

  double number(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  }

  std::optional<double> maybe_number(const Pointer& ptr) const {
    if (!has(ptr)) return std::nullopt;
    return number(ptr);
  }

  std::int64_t integer(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::size_t index(const Pointer& ptr, std::size_t bound) const {
    const Json& v = at(ptr);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(ptr, "expected a non-negative integer");
    const auto k = v.get<std::uint64_t>();
    if (k >= bound) fail(ptr, "index " + std::to_string(k) + " out of range (" + std::to_string(bound) + ")");
    return static_cast<std::size_t>(k);
  }

  std::optional<std::size_t> maybe_index(const Pointer& ptr, std::size_t bound) const {
    if (!has(ptr)) return std::nullopt;
    return index(ptr, bound);
  }

  std::size_t count(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(ptr, "expected a non-negative integer");
    return static_cast<std::size_t>(v.get<std::uint64_t>());
  }

  bool boolean(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_boolean()) fail(ptr, "expected true or false");
    return v.get<bool>();
  }

  std::string text_of(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  BigInt big_integer(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
    if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      const bool digits = !s.empty() && s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) == std::string::npos &&
                          s != "-";
      if (digits) return BigInt(s);
    }
    if (v.is_number_float()) fail(ptr, "floats are not allowed here; write an integer or [numerator, denominator]");
    fail(ptr, "expected an integer");
  }

  Rational rational(const Pointer& ptr) const {
    const Json& v = at(ptr);
    if (v.is_array()) {
      if (v.size() != 2) fail(ptr, "a rational is [numerator, denominator]");
      const BigInt num = big_integer(ptr / 0), den = big_integer(ptr / 1);
      if (den == 0) fail(ptr / 1, "zero denominator");
      return Rational(num, den);
    }
    return Rational(big_integer(ptr));
  }

  std::vector<double> numbers(const Pointer& ptr) const {
    const Json& v = array(ptr);
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(ptr / k));
    return out;
  }

  std::vector<Rational> rationals(const Pointer& ptr) const {
    const Json& v = array(ptr);
    std::vector<Rational> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(rational(ptr / k));
    return out;
  }

  template <class T, class Entry>
  Matrix<T> matrix(const Pointer& ptr, Entry entry) const {
    const Json& rows = array(ptr);
    if (rows.empty()) fail(ptr, "a payoff matrix needs at least one row");
    const std::size_t cols = array(ptr / 0).size();
    if (cols == 0) fail(ptr / 0, "a payoff matrix needs at least one column");
    Matrix<T> m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (array(ptr / r).size() != cols) fail(ptr / r, "ragged matrix: expected " + std::to_string(cols) + " entries");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(ptr / r / c);
    }
    return m;
  }

  RealMatrix real_matrix(const Pointer& ptr) const {
    return matrix<double>(ptr, [&](const Pointer& p) { return number(p); });
  }

  RationalMatrix rational_matrix(const Pointer& ptr) const {
    return matrix<Rational>(ptr, [&](const Pointer& p) { return rational(p); });
  }

  MixedStrategy strategy(const Pointer& ptr) const {
    const auto w = numbers(ptr);
    try {
      return MixedStrategy(w);
    } catch (const ContractViolation& e) {
      throw ContractViolation(ptr.to_string() + ": " + e.what());
    }
  }

  StrategyAssignment play(const Pointer& ptr) const {
    object(ptr);
    const std::string kind = text_of(ptr / "kind");
    if (kind == "mixed") return MixedPlay{strategy(ptr / "x"), strategy(ptr / "y")};
    if (kind == "transfer") return TransferPlay{number(ptr / "x"), number(ptr / "y")};
    if (kind == "repeated") {
      RepeatedStrategy sigma;
      const Json& runs = array(ptr / "schedule");
      for (std::size_t k = 0; k < runs.size(); ++k) {
        const Pointer run = ptr / "schedule" / k;
        if (array(run).size() != 3) fail(run, "a schedule run is [row, column, stages]");
        sigma.schedule.push_back({count(run / 0), count(run / 1), big_integer(run / 2)});
      }
      const auto limit = rationals(ptr / "limit");
      if (limit.size() != 2) fail(ptr / "limit", "a limit payoff is [man, woman]");
      sigma.limit_payoff = {limit[0], limit[1]};
      if (has(ptr / "punish_man")) sigma.punish_man = rationals(ptr / "punish_man");
      if (has(ptr / "punish_woman")) sigma.punish_woman = rationals(ptr / "punish_woman");
      return sigma;
    }
    fail(ptr / "kind", "unknown play kind '" + kind + "'");
  }

  Payoffs payoffs(const Pointer& ptr) const {
    if (array(ptr).size() != 2) fail(ptr, "payoffs are [man, woman]");
    return {number(ptr / 0), number(ptr / 1)};
  }

  OutsideOptions options(const Pointer& ptr) const {
    if (array(ptr).size() != 2) fail(ptr, "outside options are [man, woman]");
    return {number(ptr / 0), number(ptr / 1)};
  }

  const Json& root() const { return root_; }

 private:
  static std::string syntax_message(std::string what) {
    // drop nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix
    if (auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    return "syntax error: " + what;
  }

  Locator locator_;
  Json root_;
};

Json header(std::string_view format) {
  Json j;
  j["format"] = "matchgame-" + std::string(format);
  j["version"] = kFileVersion;
  return j;
}

Json integer_json(const BigInt& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(n);
  return n.str();
}

Json rational_json(const Rational& q) {
  if (denominator(q) == 1) return integer_json(numerator(q));
  return Json::array({integer_json(numerator(q)), integer_json(denominator(q))});
}

// Non-finite doubles have no JSON spelling; they are written as null.
Json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json optional_json(const std::optional<double>& x) { return x ? number_json(*x) : Json(nullptr); }
Json optional_json(const std::optional<std::size_t>& x) { return x ? Json(*x) : Json(nullptr); }

Json real_matrix_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Json rational_matrix_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (const auto& q : m.row(r)) row.push_back(rational_json(q));
    rows.push_back(row);
  }
  return rows;
}

Json rationals_json(const std::vector<Rational>& qs) {
  Json out = Json::array();
  for (const auto& q : qs) out.push_back(rational_json(q));
  return out;
}

Json play_json(const StrategyAssignment& play) {
  return std::visit(
      Overloaded{
          [](const MixedPlay& m) {
            Json j;
            j["kind"] = "mixed";
            j["x"] = std::vector<double>(m.x.weights().begin(), m.x.weights().end());
            j["y"] = std::vector<double>(m.y.weights().begin(), m.y.weights().end());
            return j;
          },
          [](const TransferPlay& t) {
            Json j;
            j["kind"] = "transfer";
            j["x"] = t.x;
            j["y"] = t.y;
            return j;
          },
          [](const RepeatedStrategy& r) {
            Json j;
            j["kind"] = "repeated";
            Json runs = Json::array();
            for (const auto& run : r.schedule) runs.push_back(Json::array({run.s, run.t, integer_json(run.count)}));
            j["schedule"] = runs;
            j["limit"] = Json::array({rational_json(r.limit_payoff.first), rational_json(r.limit_payoff.second)});
            j["punish_man"] = r.punish_man ? rationals_json(*r.punish_man) : Json(nullptr);
            j["punish_woman"] = r.punish_woman ? rationals_json(*r.punish_woman) : Json(nullptr);
            return j;
          },
      },
      play);
}

Json pair_json(double a, double b) { return Json::array({number_json(a), number_json(b)}); }

Json agent_json(const AgentId& a) { return a.is_empty ? Json(nullptr) : Json(a.index); }

// -0.0 is written as 0.0
std::string scalar_dump(const Json& j) {
  if (j.is_number_float() && j.get<double>() == 0) return "0.0";
  return j.dump();
}

std::string inline_json(const Json& j) {
  if (!j.is_array()) return scalar_dump(j);
  std::string out = "[";
  for (std::size_t k = 0; k < j.size(); ++k) out += (k ? ", " : "") + inline_json(j[k]);
  return out + "]";
}

// Indented like dump(2), except that arrays of scalars and the rows of
// payoff matrices stay on one line.
void write_json(std::string& out, const Json& j, int depth, bool matrix = false) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  if (j.is_array()) {
    const bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); });
    if (flat) {
      out += inline_json(j);
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out += pad;
      if (matrix) out += inline_json(j[k]);
      else write_json(out, j[k], depth + 1);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + ']';
  } else if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (const auto& [key, value] : j.items()) {
      out += pad + Json(key).dump() + ": ";
      write_json(out, value, depth + 1, key == "A" || key == "B");
      out += ++k < j.size() ? ",\n" : "\n";
    }
    out += close + '}';
  } else {
    out += scalar_dump(j);
  }
}

std::string dump(const Json& j) {
  std::string out;
  write_json(out, j, 0);
  return out + "\n";
}

}  // namespace

// ---------------------------------------------------------------------------

InstanceFile parse_instance(std::string_view text) {
  Reader in(text, "instance");
  InstanceFile file;
  MatchingGame& g = file.game;

  const auto kind = parse_class_name(in.text_of(Pointer("/class")));
  if (!kind) in.fail(Pointer("/class"), "class must be one of zerosum, competitive, repeated, transfer");
  g.men = in.count(Pointer("/men"));
  g.women = in.count(Pointer("/women"));
  g.epsilon = in.number(Pointer("/epsilon"));
  g.irp_men = in.numbers(Pointer("/irp_men"));
  g.irp_women = in.numbers(Pointer("/irp_women"));
  if (g.irp_men.size() != g.men) in.fail(Pointer("/irp_men"), "expected one IRP per man");
  if (g.irp_women.size() != g.women) in.fail(Pointer("/irp_women"), "expected one IRP per woman");

  const Pointer couples("/couples");
  if (in.array(couples).size() != g.men) in.fail(couples, "expected one row of couples per man");
  for (std::size_t i = 0; i < g.men; ++i) {
    if (in.array(couples / i).size() != g.women) in.fail(couples / i, "expected one couple per woman");
    for (std::size_t j = 0; j < g.women; ++j) {
      const Pointer c = couples / i / j;
      in.object(c);
      switch (*kind) {
        case GameClass::ZeroSum: g.games.emplace_back(ZeroSumGame{in.real_matrix(c / "A")}); break;
        case GameClass::StrictlyCompetitive:
          g.games.emplace_back(CompetitiveGame{in.real_matrix(c / "A"), in.real_matrix(c / "B")});
          break;
        case GameClass::Repeated:
          g.games.emplace_back(RepeatedGame{in.rational_matrix(c / "A"), in.rational_matrix(c / "B")});
          break;
        case GameClass::LinearTransfer: g.games.emplace_back(TransferGame{in.number(c / "a"), in.number(c / "b")}); break;
      }
    }
  }

  if (in.has(Pointer("/order"))) {
    const Json& order = in.array(Pointer("/order"));
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < order.size(); ++k) out.push_back(in.index(Pointer("/order") / k, g.men));
    file.order = std::move(out);
  }
  if (in.has(Pointer("/seed"))) file.seed = static_cast<std::uint64_t>(in.integer(Pointer("/seed")));
  if (in.has(Pointer("/generator"))) file.generator = in.text_of(Pointer("/generator"));
  g.validate();
  return file;
}

std::string emit_instance(const InstanceFile& file) {
  const MatchingGame& g = file.game;
  Json j = header("instance");
  j["class"] = class_name(g.kind());
  j["men"] = g.men;
  j["women"] = g.women;
  j["epsilon"] = g.epsilon;
  j["irp_men"] = g.irp_men;
  j["irp_women"] = g.irp_women;
  Json couples = Json::array();
  for (std::size_t i = 0; i < g.men; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < g.women; ++k) {
      Json c;
      std::visit(Overloaded{
                     [&](const ZeroSumGame& z) { c["A"] = real_matrix_json(z.A); },
                     [&](const CompetitiveGame& s) {
                       c["A"] = real_matrix_json(s.A);
                       c["B"] = real_matrix_json(s.B);
                     },
                     [&](const RepeatedGame& r) {
                       c["A"] = rational_matrix_json(r.A);
                       c["B"] = rational_matrix_json(r.B);
                     },
                     [&](const TransferGame& t) {
                       c["a"] = t.a;
                       c["b"] = t.b;
                     },
                 },
                 g.game(i, k));
      row.push_back(c);
    }
    couples.push_back(row);
  }
  j["couples"] = couples;
  if (file.order) j["order"] = *file.order;
  if (file.seed) j["seed"] = *file.seed;
  if (file.generator) j["generator"] = *file.generator;
  return dump(j);
}

MatchingProfile parse_profile(std::string_view text, const MatchingGame& g) {
  Reader in(text, "profile");
  if (in.count(Pointer("/men")) != g.men) in.fail(Pointer("/men"), "profile and instance disagree on the men");
  if (in.count(Pointer("/women")) != g.women) in.fail(Pointer("/women"), "profile and instance disagree on the women");
  MatchingProfile p = MatchingProfile::unmatched(g);
  const Pointer couples("/couples");
  const Json& list = in.array(couples);
  std::vector<bool> man_taken(g.men), woman_taken(g.women);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Pointer c = couples / k;
    in.object(c);
    const std::size_t i = in.index(c / "man", g.men), j = in.index(c / "woman", g.women);
    if (man_taken[i] || woman_taken[j]) throw ContractViolation(c.to_string() + ": agent matched twice");
    man_taken[i] = woman_taken[j] = true;
    p.match(g, i, j, in.play(c / "play"), in.payoffs(c / "payoffs"));
  }
  for (std::size_t i = 0; i < g.men; ++i)
    if (std::fabs(in.number(Pointer("/u") / i) - p.u(i)) > 1e-9)
      throw ContractViolation("/u/" + std::to_string(i) + ": payoff disagrees with the couples");
  for (std::size_t j = 0; j < g.women; ++j)
    if (std::fabs(in.number(Pointer("/v") / j) - p.v(j)) > 1e-9)
      throw ContractViolation("/v/" + std::to_string(j) + ": payoff disagrees with the couples");
  check_profile(g, p);
  return p;
}

std::string emit_profile(const MatchingGame& g, const MatchingProfile& p) {
  Json j = header("profile");
  j["class"] = class_name(g.kind());
  j["men"] = g.men;
  j["women"] = g.women;
  Json couples = Json::array();
  for (auto [i, k] : p.couples()) {
    Json c;
    c["man"] = i;
    c["woman"] = k;
    c["play"] = play_json(p.play(i));
    c["payoffs"] = pair_json(p.u(i), p.v(k));
    couples.push_back(c);
  }
  j["couples"] = couples;
  j["u"] = std::vector<double>(p.man_payoffs().begin(), p.man_payoffs().end());
  j["v"] = std::vector<double>(p.woman_payoffs().begin(), p.woman_payoffs().end());
  return dump(j);
}

EngineTrace parse_trace(std::string_view text) {
  Reader in(text, "trace");
  EngineTrace trace;
  trace.iterations = in.count(Pointer("/iterations"));
  trace.sweeps = in.count(Pointer("/sweeps"));
  constexpr std::size_t any = std::numeric_limits<std::size_t>::max();
  const Json& events = in.array(Pointer("/events"));
  for (std::size_t k = 0; k < events.size(); ++k) {
    const Pointer e = Pointer("/events") / k;
    in.object(e);
    const std::string type = in.text_of(e / "event");
    if (type == "propose") {
      trace.events.emplace_back(ProposeEvent{in.index(e / "man", any), in.maybe_index(e / "woman", any),
                                             in.number(e / "value")});
    } else if (type == "accept") {
      trace.events.emplace_back(AcceptEvent{in.index(e / "man", any), in.index(e / "woman", any), in.play(e / "play"),
                                            in.payoffs(e / "payoffs")});
    } else if (type == "compete") {
      trace.events.emplace_back(CompeteEvent{in.index(e / "proposer", any), in.index(e / "incumbent", any),
                                             in.index(e / "woman", any), in.number(e / "proposer_reservation"),
                                             in.number(e / "incumbent_reservation"), in.maybe_number(e / "proposer_bid"),
                                             in.maybe_number(e / "incumbent_bid")});
    } else if (type == "settle") {
      trace.events.emplace_back(SettleEvent{in.index(e / "winner", any), in.index(e / "loser", any),
                                            in.index(e / "woman", any), in.number(e / "level"), in.play(e / "play"),
                                            in.payoffs(e / "payoffs")});
    } else if (type == "single") {
      trace.events.emplace_back(GoSingleEvent{in.index(e / "man", any)});
    } else if (type == "update") {
      trace.events.emplace_back(CoupleUpdateEvent{in.index(e / "man", any), in.index(e / "woman", any),
                                                  in.count(e / "sweep"), in.options(e / "options"),
                                                  in.payoffs(e / "before"), in.payoffs(e / "after"),
                                                  in.play(e / "play")});
    } else {
      in.fail(e / "event", "unknown event '" + type + "'");
    }
  }
  return trace;
}

std::string emit_trace(const EngineTrace& trace) {
  Json j = header("trace");
  j["iterations"] = trace.iterations;
  j["sweeps"] = trace.sweeps;
  Json events = Json::array();
  for (const auto& event : trace.events) {
    Json e;
    std::visit(Overloaded{
                   [&](const ProposeEvent& x) {
                     e["event"] = "propose";
                     e["man"] = x.man;
                     e["woman"] = optional_json(x.woman);
                     e["value"] = number_json(x.value);
                   },
                   [&](const AcceptEvent& x) {
                     e["event"] = "accept";
                     e["man"] = x.man;
                     e["woman"] = x.woman;
                     e["play"] = play_json(x.play);
                     e["payoffs"] = pair_json(x.pay.u, x.pay.v);
                   },
                   [&](const CompeteEvent& x) {
                     e["event"] = "compete";
                     e["proposer"] = x.proposer;
                     e["incumbent"] = x.incumbent;
                     e["woman"] = x.woman;
                     e["proposer_reservation"] = number_json(x.proposer_reservation);
                     e["incumbent_reservation"] = number_json(x.incumbent_reservation);
                     e["proposer_bid"] = optional_json(x.proposer_bid);
                     e["incumbent_bid"] = optional_json(x.incumbent_bid);
                   },
                   [&](const SettleEvent& x) {
                     e["event"] = "settle";
                     e["winner"] = x.winner;
                     e["loser"] = x.loser;
                     e["woman"] = x.woman;
                     e["level"] = number_json(x.level);
                     e["play"] = play_json(x.play);
                     e["payoffs"] = pair_json(x.pay.u, x.pay.v);
                   },
                   [&](const GoSingleEvent& x) {
                     e["event"] = "single";
                     e["man"] = x.man;
                   },
                   [&](const CoupleUpdateEvent& x) {
                     e["event"] = "update";
                     e["man"] = x.man;
                     e["woman"] = x.woman;
                     e["sweep"] = x.sweep;
                     e["options"] = pair_json(x.options.u_eps, x.options.v_eps);
                     e["before"] = pair_json(x.before.u, x.before.v);
                     e["after"] = pair_json(x.after.u, x.after.v);
                     e["play"] = play_json(x.play);
                   },
               },
               event);
    events.push_back(e);
  }
  j["events"] = events;
  return dump(j);
}

std::string emit_report(const StabilityReport& report) {
  Json j = header("report");
  j["eps"] = report.eps;
  j["tolerance"] = report.tolerance;
  j["green"] = report.green();
  j["externally_stable"] = report.externally_stable;
  Json pairs = Json::array();
  for (const auto& b : report.blocking_pairs) {
    Json x;
    x["man"] = agent_json(b.man);
    x["woman"] = agent_json(b.woman);
    x["witness"] = pair_json(b.witness.u, b.witness.v);
    x["margin"] = number_json(b.margin);
    pairs.push_back(x);
  }
  j["blocking_pairs"] = pairs;
  j["internally_stable"] = report.internally_stable;
  Json residuals = Json::array();
  for (const auto& r : report.cne_residuals) {
    Json x;
    x["man"] = r.man;
    x["woman"] = r.woman;
    x["man_gain"] = number_json(r.man_gain);
    x["woman_gain"] = number_json(r.woman_gain);
    residuals.push_back(x);
  }
  j["cne_residuals"] = residuals;
  return dump(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace matchgame
