#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "zslab/report.hpp"
#include "zslab/search.hpp"

namespace zslab {

/// phi: g -> m g on G = C_{mn} + C_{mn}. Ker(phi) = nG ~ C_m + C_m and
/// phi(G) = mG ~ C_n + C_n, with coordinate maps into those small groups.
class MultByM {
 public:
  MultByM(const GroupSpec& group, int m);

  const GroupSpec& group() const noexcept { return group_; }
  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }

  Index apply(Index x) const noexcept { return group_.smul(m_, x); }
  Sequence apply(const Sequence& s) const;

  const ElementSet& kernel() const noexcept { return kernel_; }
  const ElementSet& image() const noexcept { return image_; }
  bool in_kernel(Index x) const noexcept { return kernel_.contains(x); }

  /// C_m + C_m and C_n + C_n.
  const GroupSpec& kernel_group() const noexcept { return kernel_group_; }
  const GroupSpec& image_group() const noexcept { return image_group_; }
  /// (a, b) in nG -> (a/n, b/n); requires x in Ker(phi).
  Index to_kernel(Index x) const noexcept;
  Index from_kernel(Index y) const noexcept;
  /// (a, b) in mG -> (a/m, b/m); requires x in phi(G).
  Index to_image(Index x) const noexcept;
  Index from_image(Index y) const noexcept;

 private:
  GroupSpec group_;
  int m_ = 1;
  int n_ = 1;
  GroupSpec kernel_group_;
  GroupSpec image_group_;
  ElementSet kernel_;
  ElementSet image_;
};

/// Throws ShapeError unless the group is C_{mn} + C_{mn} with m | mn.
MultByM mult_by_m(const GroupSpec& group, int m);

struct ProductDecomposition {
  Sequence parent;
  int m = 2;
  /// W_0, ..., W_{2m-2}.
  std::vector<Sequence> blocks;

  std::size_t size() const noexcept { return blocks.size(); }
  Sequence product() const;
  /// |W_1| = ... = |W_{2m-2}| = n.
  bool in_omega(int n) const;

  friend bool operator==(const ProductDecomposition&, const ProductDecomposition&) = default;
};

/// S = prod W_i, 2m-1 nonempty blocks, every sigma(W_i) in Ker(phi).
bool is_product_decomposition(const ProductDecomposition& w, const MultByM& phi);

/// prod sigma(W_i), a sequence over G supported in Ker(phi).
Sequence sigma_tilde(const ProductDecomposition& w);

/// [{"role": "W_0", "sequence": ..., "sum": ...}, {"role": "W_1", ...}, ...]
nlohmann::json to_json(const ProductDecomposition& w);

enum class DecompositionFilter { omega_prime, omega, omega0 };

/// (m e1, m e2) as a basis (b1, b2) of phi(G) under which W has the normalized
/// phi-image shapes.
struct PhiBasis {
  Index b1 = 0;
  Index b2 = 0;
};

/// First basis of phi(G) (in index order of (b1, b2)) putting W in Omega_0.
std::optional<PhiBasis> omega0_basis(const ProductDecomposition& w, const MultByM& phi);
bool has_omega0_shape(const ProductDecomposition& w, const MultByM& phi, const PhiBasis& basis);

/// Visits decompositions of S in a fixed order; return false to stop.
/// Blocks W_1..W_{2m-2} are emitted in non-decreasing order, so permutations
/// of those blocks are not repeated.
void find_decompositions(const Sequence& s, int m, DecompositionFilter filter,
                         const std::function<bool(const ProductDecomposition&)>& visit,
                         const SearchOptions& options = {});
std::vector<ProductDecomposition> find_decompositions(const Sequence& s, int m,
                                                      DecompositionFilter filter,
                                                      std::size_t limit = 0,
                                                      const SearchOptions& options = {});
std::optional<ProductDecomposition> first_decomposition(const Sequence& s, int m,
                                                        DecompositionFilter filter,
                                                        const SearchOptions& options = {});

/// Bases and per-term coordinates for a W in Omega_0.
struct DecompositionContext {
  MultByM phi;
  GroupElement e1, e2;  // (m e1, m e2) is the normalizing basis of phi(G)
  GroupElement f1, f2;  // basis of Ker(phi) putting sigma_tilde(W) in Upsilon
  int interval_start = 0;  // I = [interval_start, interval_start + n - 1]
  bool nu = false;

  std::vector<std::size_t> a1 = {}, a2 = {}, a1_star = {}, a2_star = {};
  std::vector<std::size_t> c0 = {}, c1 = {}, c2 = {};
  Sequence w0_first = {};   // W_0^(1): terms with phi(x) = m e1
  Sequence w0_second = {};  // W_0^(2)

  bool in_s1(Index x) const;
  /// Offset x - e1 or x - iota(x) e1 - e2 in Ker(phi).
  Index psi(Index x) const;
  /// psi(x) = psi1 + psi2 with psi1 in <f1>, psi2 in <f2>; these work on any
  /// element of Ker(phi) too via split().
  std::pair<Index, Index> split(Index kernel_element) const;
  Index psi1(Index x) const { return split(psi(x)).first; }
  Index psi2(Index x) const { return split(psi(x)).second; }
  /// Coefficient in I; DomainError on terms of S_1.
  int iota(Index x) const;

  Index sigma_psi(const Sequence& s) const;
  long sigma_iota(const Sequence& s) const;

  bool in_a1(std::size_t i) const;
  bool in_a2(std::size_t i) const;
};

/// Validates the normalizations (NormalizationError) and fills the context.
DecompositionContext classify_blocks(const ProductDecomposition& w, const GroupElement& e1,
                                     const GroupElement& e2, const GroupElement& f1,
                                     const GroupElement& f2, int interval_start = 0);
/// Same with the least admissible bases (e1, e2 as least preimages).
DecompositionContext classify_blocks(const ProductDecomposition& w, int interval_start = 0);

struct Epsilon {
  int eps_prime = 0;  // in [1, n]
  long eps = 0;
};

Epsilon epsilon(const Sequence& x, const Sequence& y, const DecompositionContext& ctx);

enum class SwapKind { I, II, III };

struct SwapRequest {
  SwapKind kind = SwapKind::I;
  std::size_t source = 0;  // U (type II: always W_0)
  std::size_t target = 0;  // V
  Sequence x;              // X | U
  Sequence y;              // Y | V
  std::optional<Sequence> r;  // type II only, R | W_0^(1)
};

/// Returns W' with U' = X^-1 U Y, V' = Y^-1 V X (type II: V' = Y^-1 V X R,
/// W_0' = R^-1 X^-1 W_0 Y). Throws PreconditionError naming the clause; the
/// block-sum identity for the swap kind is asserted on the result.
ProductDecomposition apply_swap(const ProductDecomposition& w, const SwapRequest& req,
                                const DecompositionContext& ctx);

/// Pulls X into W_0^(2) through U in A_2* (first U that works when block is
/// unset). The lexicographically least n-term U' | X^-1 U W_0^(2) with
/// sigma(U') in Ker(phi) replaces U.
std::optional<ProductDecomposition> pull_up(const ProductDecomposition& w, const Sequence& x,
                                            const DecompositionContext& ctx,
                                            std::optional<std::size_t> block = std::nullopt);

/// phi(S) = b1^{l n - 1} prod (x_v b1 + b2) with l in [1, 2m-1], x_v in [0, n-1].
struct PhiForm {
  int ell = 0;
  std::vector<int> x;
};
std::optional<PhiForm> phi_form(const Sequence& s, const MultByM& phi, const PhiBasis& basis);

CheckReport check_proposition_4_2(int m, int n, const SearchOptions& options = {});

}  // namespace zslab
