// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/checkpoint.hpp"

#include "text_format.hpp"
#include "trajlift/error.hpp"

#include <fstream>
#include <sstream>

namespace trajlift {

std::string format_network_config(const NetworkConfig& c) {
  std::ostringstream os;
  os << "frames=" << c.frames << " bases=" << c.bases << " joints=" << c.joints
     << " feat_layers=" << c.feat_layers << " feat_width=" << c.feat_width
     << " feat_dropout=" << text::format_double(c.feat_dropout)
     << " reg_layers=" << c.reg_layers << " reg_width=" << c.reg_width
     << " reg_dropout=" << text::format_double(c.reg_dropout)
     << " pool_window=" << c.pool_window
     << " dense_connections=" << (c.dense_connections ? 1 : 0)
     << " bn_momentum=" << text::format_double(c.bn_momentum)
     << " bn_epsilon=" << text::format_double(c.bn_epsilon)
     << " seed=" << c.seed;
  return os.str();
}

void write_model(const Model& model, std::ostream& os) {
  os << "TRAJNET v1\n";
  os << "config " << format_network_config(model.params.config) << '\n';
  os << "basis family=" << to_string(model.basis.family())
     << " F=" << model.basis.frames() << " K=" << model.basis.count() << '\n';
  for (Eigen::Index f = 0; f < model.basis.frames(); ++f) {
    const Eigen::RowVectorXd row = model.basis.theta().row(f);
    text::write_row(os, row.data(), static_cast<std::size_t>(row.size()));
  }
  const auto& sk = model.skeleton;
  os << "skeleton root=" << sk.root_index() << " names=";
  for (int i = 0; i < sk.joint_count(); ++i)
    os << (i ? "," : "") << sk.joint_names()[i];
  os << " pairs=";
  for (std::size_t i = 0; i < sk.lr_pairs().size(); ++i)
    os << (i ? "," : "") << sk.lr_pairs()[i].first << ':'
       << sk.lr_pairs()[i].second;
  os << '\n';
  NetworkParams copy = model.params;
  for (const auto& t : all_tensors(copy)) {
    os << "tensor " << t.name << ' ' << t.size << '\n';
    text::write_row(os, t.data, static_cast<std::size_t>(t.size));
  }
  os << "end\n";
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& is, std::string source)
      : is_(is), source_(std::move(source)) {}

  std::string next(const char* what) {
    std::string line;
    if (!std::getline(is_, line))
      throw ParseError(source_, line_no_ + 1,
                       std::string("unexpected end of file, expected ") + what);
    ++line_no_;
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_, line_no_, msg);
  }

  const std::string& source() const { return source_; }

 private:
  std::istream& is_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

Model read_model(std::istream& is, const std::string& source) {
  LineReader in(is, source);
  if (text::split(in.next("header")) !=
      std::vector<std::string_view>{"TRAJNET", "v1"})
    in.fail("expected 'TRAJNET v1' header");

  Model model;
  NetworkConfig cfg;
  {
    const std::string line = in.next("config line");
    const auto tokens = text::split(line);
    if (tokens.empty() || tokens[0] != "config") in.fail("expected config line");
    const auto fields = text::parse_fields(tokens, 1);
    if (!fields) in.fail("malformed config field");
    TrainConfig unused;
    try {
      apply_config(*fields, cfg, unused);
      cfg.validate();
    } catch (const ParameterError& e) {
      in.fail(e.what());
    }
  }

  {
    std::string block = in.next("basis header");
    const auto tokens = text::split(block);
    if (tokens.size() != 4 || tokens[0] != "basis") in.fail("expected basis line");
    const auto fields = text::parse_fields(tokens, 1);
    if (!fields || !fields->contains("F")) in.fail("malformed basis line");
    const auto frames = text::parse_int(fields->at("F"));
    if (!frames || *frames < 1) in.fail("invalid basis F");
    std::ostringstream basis_text;
    basis_text << "TRAJBASIS v1";
    for (std::size_t i = 1; i < tokens.size(); ++i) basis_text << ' ' << tokens[i];
    basis_text << '\n';
    for (long long f = 0; f < *frames; ++f) basis_text << in.next("basis row") << '\n';
    std::istringstream bis(basis_text.str());
    model.basis = read_basis(bis, source + " (basis)");
  }
  if (model.basis.frames() != cfg.frames || model.basis.count() != cfg.bases)
    in.fail("basis shape does not match network config");

  {
    const std::string line = in.next("skeleton line");
    const auto tokens = text::split(line);
    if (tokens.empty() || tokens[0] != "skeleton") in.fail("expected skeleton line");
    auto fields = text::parse_fields(tokens, 1);
    if (!fields || !fields->contains("root") || !fields->contains("names"))
      in.fail("malformed skeleton line");
    const auto root = text::parse_int(fields->at("root"));
    if (!root) in.fail("invalid skeleton root");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : split_list((*fields)["pairs"], ',')) {
      const auto colon = p.find(':');
      const auto l = text::parse_int(std::string_view(p).substr(0, colon));
      const auto r = colon == std::string::npos
                         ? std::nullopt
                         : text::parse_int(std::string_view(p).substr(colon + 1));
      if (!l || !r) in.fail("invalid skeleton pair '" + p + "'");
      pairs.emplace_back(static_cast<int>(*l), static_cast<int>(*r));
    }
    try {
      model.skeleton = SkeletonConfig(split_list(fields->at("names"), ','),
                                      static_cast<int>(*root), std::move(pairs));
    } catch (const ParameterError& e) {
      in.fail(e.what());
    }
  }
  if (model.skeleton.joint_count() != cfg.joints)
    in.fail("skeleton joint count does not match network config");

  model.params = init_network(cfg);
  for (auto& t : all_tensors(model.params)) {
    const std::string header = in.next("tensor header");
    const auto head = text::split(header);
    if (head.size() != 3 || head[0] != "tensor" || head[1] != t.name)
      in.fail("expected tensor " + t.name);
    const auto size = text::parse_int(head[2]);
    if (!size || *size != t.size)
      in.fail("tensor " + t.name + " should have " + std::to_string(t.size) +
              " values");
    const std::string values = in.next("tensor values");
    const auto tokens = text::split(values);
    if (static_cast<Eigen::Index>(tokens.size()) != t.size)
      in.fail("tensor " + t.name + " has " + std::to_string(tokens.size()) +
              " values, expected " + std::to_string(t.size));
    for (Eigen::Index i = 0; i < t.size; ++i) {
      const auto v = text::parse_double(tokens[i]);
      if (!v || !std::isfinite(*v)) in.fail("bad value in tensor " + t.name);
      t.data[i] = *v;
    }
  }
  if (text::split(in.next("end marker")) != std::vector<std::string_view>{"end"})
    in.fail("expected 'end'");
  model.params.mode = Mode::kEval;
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_model(model, os);
  if (!os) throw IoError("failed writing " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_model(is, path.string());
}

}  // namespace trajlift
