#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosetlab/group.hpp"
#include "cosetlab/measurements.hpp"
#include "cosetlab/states.hpp"

namespace cosetlab {

// (n, m) with 2 <= m <= n and m | n.
struct QesParams {
  int n = 4;
  int m = 2;

  // Throws UsageError for invalid parameters.
  void validate() const;
  bool operator==(const QesParams&) const = default;
};

// The quantum encryption scheme over S_n: the key is h in K_n^m, the
// encryption-key state is the tuple (rho_h^(0), ..., rho_h^(m-1)), and the
// cipherstate of message s is rho_h^(s).
class QesScheme {
 public:
  explicit QesScheme(QesParams params, const Limits& limits = default_limits());

  const QesParams& params() const { return params_; }
  const GroupPtr& group() const { return group_; }
  const std::vector<Permutation>& keys() const { return keys_; }
  const Limits& limits() const { return limits_; }

  // Uniform draw from K_n^m.
  Permutation keygen(std::uint64_t seed) const;

  std::vector<DensityOperator> encryption_key_state(const Permutation& h) const;
  DensityOperator encrypt(const Permutation& h, int s) const;

  // Projective measurement onto the supports of rho_h^(s), s = 0..m-1
  // (labels "0", "1", ...), plus "residual".
  POVM decryption_povm(const Permutation& h) const;

  struct Decryption {
    int message = 0;
    OutcomeDistribution distribution;
  };
  // Most likely sector, lowest s on ties. Throws DomainError when the
  // residual outcome has probability above 1e-6.
  Decryption decrypt(const Permutation& h, const DensityOperator& cipher) const;

 private:
  QesParams params_;
  Limits limits_;
  GroupPtr group_;
  std::vector<Permutation> keys_;
};

struct QesBound {
  double bound = 0.0;         // sqrt(m^(mk+1) / |K_n^m|)
  std::uint64_t key_count = 0;
  double stirling_keys = 0.0;  // m^(1/2) n^(n - n/m) / e^(n - n/m)
  bool vacuous = false;        // bound > 2, the largest possible trace distance
};
QesBound qes_bound(const QesParams& params, int k);

struct SecurityOptions {
  ComputePath path = ComputePath::automatic;          // for l_s: dense, then block, then Gram
  ComputePath pairwise_path = ComputePath::automatic;  // dense or block
  bool cross_check = true;  // recompute l_0 on a second path when one fits
  double symmetry_tol = 1e-6;
  double slack = 1e-8;
};

struct SecurityReport {
  QesParams params;
  int k = 0;
  std::vector<double> l;                      // l_s for s = 0..m-1
  std::vector<std::vector<double>> pairwise;  // ||(1/|K|) sum_h (rho_h^(s) - rho_h^(s')) (x) sigma_h^k||_1
  QesBound bound;
  double symmetry_defect = 0.0;               // max_s |l_s - l_0|
  std::optional<double> l0_cross_check;       // l_0 on a second path (first of dense, Gram, block)
  std::string cross_check_path;
  std::string l_path;
  std::string pairwise_path;
  std::size_t components = 0;                 // pure components per l_s mixture
  std::vector<std::string> flags;

  double l0() const { return l.front(); }
  bool has_violation() const;
};

// Trace norms of the eavesdropper's view against the maximally mixed state
// (l_s) and between messages (pairwise), with k copies of the encryption-key
// state. Throws CapacityError when no path fits.
SecurityReport indistinguishability_norms(const QesScheme& scheme, int k, const SecurityOptions& options = {});

}  // namespace cosetlab
