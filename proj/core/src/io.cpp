#include "wwm/io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "wwm/errors.hpp"

namespace wwm {

namespace {

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Presentation parse_presentation(std::istream& in) {
  std::string line;
  int m = -1;
  std::vector<Word> relators;
  while (std::getline(in, line)) {
    std::string s = strip(line);
    if (s.empty()) continue;
    if (m < 0) {
      std::istringstream hs(s);
      std::string tag;
      hs >> tag;
      if (tag != "m" && tag != "m!")
        throw InputError("presentation must start with a generator count line 'm <count>'");
      if (!(hs >> m) || m < 1) throw InputError("invalid generator count");
      std::string rest;
      if (hs >> rest) throw InputError("trailing tokens after generator count");
      continue;
    }
    relators.push_back(parse_word(s, m));
  }
  if (m < 0) throw InputError("empty presentation input");
  return Presentation::make(m, relators);
}

Presentation parse_presentation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file: " + path);
  return parse_presentation(in);
}

std::string format_presentation(const Presentation& p) {
  std::ostringstream os;
  os << (p.m <= 26 ? "m " : "m! ") << p.m << "\n";
  for (const Word& r : p.relators) os << word_string(r, p.m) << "\n";
  return os.str();
}

WeightVector parse_weights(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid weight JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("m") || !j.contains("weights"))
    throw InputError("weight JSON needs fields \"m\" and \"weights\"");
  if (!j["m"].is_number_integer()) throw InputError("\"m\" must be an integer");
  int m = j["m"].get<int>();
  if (!j["weights"].is_array()) throw InputError("\"weights\" must be an array");

  std::vector<Rat> per;
  for (const auto& entry : j["weights"]) {
    if (entry.is_string())
      per.push_back(parse_rat(entry.get<std::string>()));
    else if (entry.is_number_integer())
      per.push_back(Rat(entry.get<long>()));
    else
      throw InputError("weight entries must be rational strings like \"1/4\" or integers");
  }
  WeightVector w = WeightVector::of(m, std::move(per));

  if (j.contains("normalized")) {
    if (!j["normalized"].is_boolean()) throw InputError("\"normalized\" must be a boolean");
    if (j["normalized"].get<bool>() != w.normalized())
      throw InputError("\"normalized\" claim does not match the weights (exact check)");
  }
  return w;
}

WeightVector parse_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open weight file: " + path);
  return parse_weights(in);
}

std::string format_weights(const WeightVector& w) {
  nlohmann::json j;
  j["m"] = w.m;
  std::vector<std::string> entries;
  for (const Rat& q : w.per_generator) entries.push_back(rat_string(q));
  j["weights"] = entries;
  j["normalized"] = w.normalized();
  return j.dump(2) + "\n";
}

}  // namespace wwm
