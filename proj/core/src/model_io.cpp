#include "ctmc/model_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "ctmc/errors.hpp"

namespace ctmc {

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

struct Entry {
  std::size_t key_line = 0;
  std::vector<Line> lines;  // value fragments with their line numbers
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<double> to_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
  return v;
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : source_(std::move(source)) {
    split(text);
  }

  Model build() {
    for (const char* key : {"states", "generator", "rates"}) {
      if (!entries_.count(key)) fail(last_line_, std::string("missing required key '") + key + "'");
    }
    const StateSpace states = parse_states();
    const auto n = states.size();

    // Generator rows, tracking the line each row came from.
    const Entry& ge = entries_.at("generator");
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
    for (const auto& line : ge.lines) {
      std::stringstream ss(line.text);
      std::string part;
      while (std::getline(ss, part, ';')) {
        const auto tokens = split_tokens(part);
        if (tokens.empty()) continue;
        rows.push_back(numbers(tokens, line.number, "generator"));
        row_lines.push_back(line.number);
      }
    }
    if (rows.size() != n) {
      fail(ge.key_line, "generator has " + std::to_string(rows.size()) + " rows, expected " +
                            std::to_string(n));
    }
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) {
        fail(row_lines[i], "generator row " + std::to_string(i + 1) + " has " +
                               std::to_string(rows[i].size()) + " entries, expected " +
                               std::to_string(n));
      }
      for (std::size_t j = 0; j < n; ++j) g(i, j) = rows[i][j];
    }

    const Entry& re = entries_.at("rates");
    std::vector<double> rate_values;
    std::vector<std::size_t> rate_lines;
    for (const auto& line : re.lines) {
      for (double v : numbers(split_tokens(line.text), line.number, "rates")) {
        rate_values.push_back(v);
        rate_lines.push_back(line.number);
      }
    }
    if (rate_values.size() != n) {
      fail(re.key_line, "rates has " + std::to_string(rate_values.size()) +
                            " entries, expected " + std::to_string(n));
    }
    Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r(i) = rate_values[i];

    const auto report = validate_model(g, r, states);
    if (!report.ok()) {
      std::ostringstream os;
      for (std::size_t k = 0; k < report.violations.size(); ++k) {
        const auto& v = report.violations[k];
        std::size_t line = ge.key_line;
        if (v.kind == ViolationKind::kNegativeRate ||
            (v.kind == ViolationKind::kNonFinite && v.row && rate_lines.size() > *v.row &&
             !std::isfinite(r(*v.row)))) {
          line = v.row ? rate_lines[*v.row] : re.key_line;
        } else if (v.row) {
          line = row_lines[*v.row];
        }
        if (k) os << '\n';
        os << source_ << ':' << line << ": " << v.message;
      }
      throw ValidationError(os.str());
    }
    return Model(states, std::move(g), std::move(r));
  }

 private:
  void split(std::string_view text) {
    std::size_t number = 0;
    std::string current_key;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++number;
      std::string line(raw);
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      last_line_ = number;
      if (const auto eq = line.find('='); eq != std::string::npos) {
        current_key = trim(line.substr(0, eq));
        if (current_key.empty()) fail(number, "missing key before '='");
        if (current_key != "states" && current_key != "generator" && current_key != "rates") {
          fail(number, "unknown key '" + current_key + "'");
        }
        if (entries_.count(current_key)) fail(number, "duplicate key '" + current_key + "'");
        Entry& e = entries_[current_key];
        e.key_line = number;
        const auto value = trim(line.substr(eq + 1));
        if (!value.empty()) e.lines.push_back({number, value});
      } else {
        if (current_key.empty()) fail(number, "expected 'key = value'");
        entries_[current_key].lines.push_back({number, line});
      }
    }
    if (last_line_ == 0) last_line_ = 1;
  }

  StateSpace parse_states() {
    const Entry& e = entries_.at("states");
    std::vector<std::string> tokens;
    for (const auto& l : e.lines) {
      for (auto& t : split_tokens(l.text)) tokens.push_back(std::move(t));
    }
    if (tokens.empty()) fail(e.key_line, "states needs a count or a list of labels");
    if (tokens.size() == 1) {
      const auto& t = tokens.front();
      std::size_t n = 0;
      const auto res = std::from_chars(t.data(), t.data() + t.size(), n);
      if (res.ec == std::errc{} && res.ptr == t.data() + t.size()) {
        if (n == 0) fail(e.key_line, "states must be at least 1");
        return StateSpace(n);
      }
    }
    try {
      return StateSpace(std::move(tokens));
    } catch (const InputError& err) {
      fail(e.key_line, err.what());
    }
  }

  std::vector<double> numbers(const std::vector<std::string>& tokens, std::size_t line,
                              const char* key) {
    std::vector<double> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
      const auto v = to_double(t);
      if (!v) fail(line, std::string(key) + ": '" + t + "' is not a number");
      out.push_back(*v);
    }
    return out;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw InputError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::size_t last_line_ = 0;
};

}  // namespace

Model parse_model(std::string_view text, const std::string& source) {
  return Parser(text, source).build();
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path.string());
}

std::string format_model(const Model& model) {
  std::ostringstream os;
  os.precision(17);
  const auto n = model.size();
  os << "states = ";
  if (model.states().has_labels()) {
    for (State i = 0; i < n; ++i) os << (i ? ", " : "") << model.states().label(i);
  } else {
    os << n;
  }
  os << "\ngenerator =\n";
  for (State i = 0; i < n; ++i) {
    os << " ";
    for (State j = 0; j < n; ++j) os << ' ' << model.generator()(i, j);
    os << '\n';
  }
  os << "rates =";
  for (State i = 0; i < n; ++i) os << ' ' << model.rates()(i);
  os << '\n';
  return os.str();
}

}  // namespace ctmc
