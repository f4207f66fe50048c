#include "gapcert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

BlockSaddle read_block_saddle(std::istream& in) {
  std::string sections[3];
  bool seen[3] = {false, false, false};
  long long zero_k = -1;
  int current = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty()) {
      if (current >= 0) sections[current] += '\n';
      continue;
    }
    std::istringstream words(s);
    std::string head;
    words >> head;
    if (head == "A" || head == "B" || head == "C") {
      int idx = head[0] - 'A';
      if (seen[idx]) throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": duplicate section " + head);
      seen[idx] = true;
      current = idx;
      std::string word;
      if (words >> word) {
        std::string extra;
        if (idx != 2 || word != "zero" || !(words >> zero_k) || zero_k < 1 || (words >> extra)) {
          throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": bad section header '" + s + "'");
        }
        current = -1;
      }
      continue;
    }
    if (current < 0) throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": content outside a section");
    sections[current] += s + '\n';
  }
  if (!seen[0] || !seen[1]) throw Error(ErrorCode::Parse, "missing section A or B");
  auto parse_section = [&](int idx) {
    try {
      return parse_matrix(sections[idx]);
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, std::string("section ") + char('A' + idx) + ": " + e.what());
    }
  };
  BlockSaddle H;
  H.A = parse_section(0);
  H.B = parse_section(1);
  if (seen[2] && zero_k < 0) {
    H.C = parse_section(2);
  } else {
    std::size_t k = zero_k > 0 ? static_cast<std::size_t>(zero_k) : H.B.cols();
    H.C = Matrix(k, k);
  }
  return H;
}

BlockSaddle parse_block_saddle(const std::string& text) {
  std::istringstream in(text);
  return read_block_saddle(in);
}

BlockSaddle load_block_saddle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  return read_block_saddle(in);
}

nlohmann::ordered_json to_json(const GapCertificate& g) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(g.method));
  j["interval"] = {number(g.lo), number(g.hi)};
  j["claim"] = std::string(to_string(g.claim));
  j["inv_norm_bound"] = g.inv_norm_bound ? number(*g.inv_norm_bound) : nlohmann::ordered_json();
  nlohmann::ordered_json q = nlohmann::ordered_json::object();
  for (const auto& [k, v] : g.quantities) q[k] = number(v);
  j["quantities"] = q;
  return j;
}

nlohmann::ordered_json to_json(const IntervalPair& p) {
  nlohmann::ordered_json j;
  j["source"] = std::string(to_string(p.source));
  j["i_minus"] = {number(p.i_minus.lo), number(p.i_minus.hi)};
  j["i_plus"] = {number(p.i_plus.lo), number(p.i_plus.hi)};
  return j;
}

nlohmann::ordered_json to_json(const SecularRoots& r) {
  nlohmann::ordered_json j;
  j["trig_roots"] = nlohmann::ordered_json::array();
  for (double a : r.trig_roots) j["trig_roots"].push_back(number(a));
  if (r.hyp_root) {
    j["hyp_root"] = {{"alpha1", number(r.hyp_root->alpha1)},
                     {"delta", number(r.hyp_root->delta)},
                     {"log_lambda1", number(r.hyp_root->log_lambda1)}};
  } else {
    j["hyp_root"] = nullptr;
  }
  j["alpha_hat"] = r.alpha_hat ? number(*r.alpha_hat) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json to_json(const SpuriousEstimate& e) {
  nlohmann::ordered_json j;
  j["alpha0"] = number(e.alpha0);
  j["log_lambda_est"] = number(e.log_lambda_est);
  j["log_sigma_est"] = number(e.log_sigma_est);
  j["log_lambda_first_order"] = number(e.log_lambda_first_order);
  j["log_sigma_first_order"] = number(e.log_sigma_first_order);
  return j;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
  out << '\n';
}

}  // namespace gapcert
