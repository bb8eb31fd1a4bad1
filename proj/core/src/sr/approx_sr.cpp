#include "needreplay/sr/approx_sr.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "needreplay/errors.hpp"

namespace needreplay {

namespace {

constexpr const char* kCheckpointFormat = "needreplay.linear_sr";
constexpr int kCheckpointVersion = 1;

void add_block(Eigen::VectorXd& flat, Eigen::Index offset, const Eigen::MatrixXd& block) {
  flat.segment(offset, block.size()) += Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
}

}  // namespace

SRLossReport& SRLossReport::operator+=(const SRLossReport& other) {
  loss_g += other.loss_g;
  loss_u += other.loss_u;
  if (gradients.size() == 0) {
    gradients = other.gradients;
  } else {
    if (gradients.size() != other.gradients.size()) throw ShapeError("gradient sizes differ");
    gradients += other.gradients;
  }
  return *this;
}

LinearApproxSR::LinearApproxSR(int input_dim, int feature_dim, int action_count, double gamma, double step_size)
    : encoder_(Eigen::MatrixXd::Zero(feature_dim, input_dim)),
      decoder_(Eigen::MatrixXd::Zero(input_dim, feature_dim)),
      heads_(static_cast<std::size_t>(action_count), Eigen::MatrixXd::Zero(feature_dim, feature_dim)),
      gamma_(gamma),
      step_size_(step_size) {
  if (input_dim <= 0 || feature_dim <= 0 || action_count <= 0) {
    throw ContractViolation("approximator dimensions must be positive");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in [0, 1)");
  if (!(step_size >= 0.0)) throw ContractViolation("step size must be >= 0");
}

LinearApproxSR LinearApproxSR::random(int input_dim, int feature_dim, int action_count, double gamma,
                                      double step_size, Rng& rng, double scale) {
  LinearApproxSR sr(input_dim, feature_dim, action_count, gamma, step_size);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd flat(sr.parameter_count());
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = normal(rng);
  sr.set_parameters(flat);
  return sr;
}

LinearApproxSR LinearApproxSR::one_hot(int state_count, int action_count, double gamma, double step_size) {
  LinearApproxSR sr(state_count, state_count, action_count, gamma, step_size);
  sr.encoder_.setIdentity();
  sr.decoder_.setIdentity();
  for (auto& head : sr.heads_) head.setIdentity();
  sr.encoder_frozen_ = true;
  return sr;
}

Eigen::VectorXd LinearApproxSR::encode(const Eigen::VectorXd& state) const {
  if (state.size() != input_dim()) throw ShapeError("state has wrong dimension for encoder");
  return encoder_ * state;
}

Eigen::VectorXd LinearApproxSR::decode(const Eigen::VectorXd& features) const {
  if (features.size() != feature_dim()) throw ShapeError("feature vector has wrong dimension for decoder");
  return decoder_ * features;
}

Eigen::VectorXd LinearApproxSR::sr_vector(const Eigen::VectorXd& features, ActionId action) const {
  if (features.size() != feature_dim()) throw ShapeError("feature vector has wrong dimension for SR head");
  return head(action) * features;
}

const Eigen::MatrixXd& LinearApproxSR::head(ActionId a) const {
  if (a < 0 || a >= action_count()) throw RangeError("SR head action out of range");
  return heads_[static_cast<std::size_t>(a)];
}

Eigen::MatrixXd& LinearApproxSR::head(ActionId a) {
  if (a < 0 || a >= action_count()) throw RangeError("SR head action out of range");
  return heads_[static_cast<std::size_t>(a)];
}

SRLossReport LinearApproxSR::losses(const VectorTransition& t, ActionId greedy_next_action) const {
  if (t.state.size() != input_dim() || t.next_state.size() != input_dim()) {
    throw ShapeError("transition states do not match encoder input dimension");
  }
  const Eigen::VectorXd phi = encoder_ * t.state;
  const Eigen::MatrixXd& u = head(t.action);

  const Eigen::VectorXd recon_residual = t.state - decoder_ * phi;

  Eigen::VectorXd target = phi;
  if (!t.terminal) target += gamma_ * (head(greedy_next_action) * (encoder_ * t.next_state));
  const Eigen::VectorXd sr_residual = target - u * phi;

  SRLossReport report;
  report.loss_g = recon_residual.squaredNorm();
  report.loss_u = sr_residual.squaredNorm();
  report.gradients = Eigen::VectorXd::Zero(parameter_count());

  const Eigen::Index d = feature_dim();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  // d loss_g / dF = -2 G^T r s^T ; d loss_u / dF = 2 (I - U)^T y s^T
  const Eigen::VectorXd feature_grad = -2.0 * decoder_.transpose() * recon_residual +
                                       2.0 * (identity - u).transpose() * sr_residual;
  const Eigen::MatrixXd grad_encoder = feature_grad * t.state.transpose();
  const Eigen::MatrixXd grad_decoder = -2.0 * recon_residual * phi.transpose();
  const Eigen::MatrixXd grad_head = -2.0 * sr_residual * phi.transpose();

  Eigen::Index offset = 0;
  add_block(report.gradients, offset, grad_encoder);
  offset += encoder_.size();
  add_block(report.gradients, offset, grad_decoder);
  offset += decoder_.size();
  add_block(report.gradients, offset + static_cast<Eigen::Index>(t.action) * d * d, grad_head);
  return report;
}

void LinearApproxSR::sgd_step(const SRLossReport& report) {
  if (report.gradients.size() != parameter_count()) throw ShapeError("gradient size does not match parameters");
  if (!report.gradients.allFinite()) throw NumericalError("non-finite SR gradient");
  Eigen::VectorXd flat = parameters();
  const Eigen::Index skip = encoder_frozen_ ? encoder_.size() : 0;
  flat.tail(flat.size() - skip) -= step_size_ * report.gradients.tail(flat.size() - skip);
  set_parameters(flat);
}

int LinearApproxSR::parameter_count() const noexcept {
  return static_cast<int>(encoder_.size() + decoder_.size() +
                          static_cast<Eigen::Index>(heads_.size()) * feature_dim() * feature_dim());
}

Eigen::VectorXd LinearApproxSR::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index offset = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    flat.segment(offset, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    offset += m.size();
  };
  put(encoder_);
  put(decoder_);
  for (const auto& h : heads_) put(h);
  return flat;
}

void LinearApproxSR::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) throw ShapeError("parameter vector has wrong size");
  Eigen::Index offset = 0;
  auto take = [&](Eigen::MatrixXd& m) {
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = flat.segment(offset, m.size());
    offset += m.size();
  };
  take(encoder_);
  take(decoder_);
  for (auto& h : heads_) take(h);
}

std::string LinearApproxSR::to_json() const {
  const Eigen::VectorXd flat = parameters();
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["input_dim"] = input_dim();
  j["feature_dim"] = feature_dim();
  j["action_count"] = action_count();
  j["gamma"] = gamma_;
  j["step_size"] = step_size_;
  j["encoder_frozen"] = encoder_frozen_;
  j["params"] = std::vector<double>(flat.data(), flat.data() + flat.size());
  return j.dump();
}

LinearApproxSR LinearApproxSR::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("SR checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat) throw ParseError("unknown SR checkpoint format");
    if (j.at("version").get<int>() != kCheckpointVersion) throw ParseError("unsupported SR checkpoint version");
    LinearApproxSR sr(j.at("input_dim").get<int>(), j.at("feature_dim").get<int>(), j.at("action_count").get<int>(),
                      j.at("gamma").get<double>(), j.at("step_size").get<double>());
    sr.encoder_frozen_ = j.at("encoder_frozen").get<bool>();
    const auto params = j.at("params").get<std::vector<double>>();
    if (static_cast<int>(params.size()) != sr.parameter_count()) {
      throw ShapeError("SR checkpoint parameter count does not match its header");
    }
    sr.set_parameters(Eigen::Map<const Eigen::VectorXd>(params.data(), static_cast<Eigen::Index>(params.size())));
    return sr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed SR checkpoint: ") + e.what());
  }
}

void LinearApproxSR::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write SR checkpoint " + path.string());
  out << to_json() << '\n';
}

LinearApproxSR LinearApproxSR::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open SR checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

bool operator==(const LinearApproxSR& a, const LinearApproxSR& b) {
  return a.gamma_ == b.gamma_ && a.step_size_ == b.step_size_ && a.encoder_frozen_ == b.encoder_frozen_ &&
         a.input_dim() == b.input_dim() && a.feature_dim() == b.feature_dim() &&
         a.action_count() == b.action_count() && a.parameters() == b.parameters();
}

double need_projection(const Eigen::VectorXd& sr_vector, const Eigen::VectorXd& target_features) {
  if (sr_vector.size() != target_features.size()) throw ShapeError("SR vector and feature dimensions differ");
  const double norm2 = target_features.squaredNorm();
  if (!(norm2 > 0.0)) throw DegenerateFeatureError();
  return sr_vector.dot(target_features) / norm2;
}

std::vector<double> need_offset(std::span<const double> needs) {
  if (needs.empty()) throw ContractViolation("need_offset requires at least one value");
  const double shift = std::min(0.0, *std::min_element(needs.begin(), needs.end()));
  std::vector<double> out(needs.begin(), needs.end());
  for (double& v : out) v -= shift;
  return out;
}

}  // namespace needreplay
