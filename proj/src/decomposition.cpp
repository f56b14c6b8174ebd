#include "zslab/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <string>

#include "zslab/structure.hpp"
#include "zslab/zerosum.hpp"

namespace zslab {

namespace {

// x with d = x*g for x in [0, limit), or -1.
int coefficient_of(const GroupSpec& grp, Index d, Index g, int limit) {
  Index p = 0;
  for (int x = 0; x < limit; ++x, p = grp.add(p, g)) {
    if (p == d) return x;
  }
  return -1;
}

int mod(long a, int n) {
  const long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

Sequence subtract(const Sequence& s, const Sequence& part, const char* what) {
  if (!divides(part, s)) throw PreconditionError(what);
  return s.without(part);
}

}  // namespace

// MultByM -------------------------------------------------------------------

MultByM::MultByM(const GroupSpec& group, int m) : group_(group), m_(m) {
  if (group.n1() != group.n2() || m < 1 || group.n2() % m != 0) {
    throw ShapeError("multiplication by " + std::to_string(m) + " needs C_{mn} x C_{mn}, got " +
                     group.to_string());
  }
  n_ = group.n2() / m;
  kernel_group_ = GroupSpec(m_, m_);
  image_group_ = GroupSpec(n_, n_);
  kernel_ = ElementSet(group);
  image_ = ElementSet(group);
  for (Index x = 0; x < group.order(); ++x) {
    const Index y = apply(x);
    image_.insert(y);
    if (y == 0) kernel_.insert(x);
  }
}

Sequence MultByM::apply(const Sequence& s) const {
  std::vector<Index> out;
  out.reserve(s.length());
  for (Index x : s.terms()) out.push_back(apply(x));
  return Sequence(group_, std::move(out));
}

Index MultByM::to_kernel(Index x) const noexcept {
  return kernel_group_.index(group_.first(x) / n_, group_.second(x) / n_);
}
Index MultByM::from_kernel(Index y) const noexcept {
  return group_.index(kernel_group_.first(y) * n_, kernel_group_.second(y) * n_);
}
Index MultByM::to_image(Index x) const noexcept {
  return image_group_.index(group_.first(x) / m_, group_.second(x) / m_);
}
Index MultByM::from_image(Index y) const noexcept {
  return group_.index(image_group_.first(y) * m_, image_group_.second(y) * m_);
}

MultByM mult_by_m(const GroupSpec& group, int m) { return MultByM(group, m); }

// Product decompositions ----------------------------------------------------

Sequence ProductDecomposition::product() const {
  Sequence out(parent.group());
  for (const auto& b : blocks) out = out * b;
  return out;
}

bool ProductDecomposition::in_omega(int n) const {
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].length() != static_cast<std::size_t>(n)) return false;
  }
  return true;
}

bool is_product_decomposition(const ProductDecomposition& w, const MultByM& phi) {
  if (w.blocks.size() != static_cast<std::size_t>(2 * w.m - 1)) return false;
  for (const auto& b : w.blocks) {
    if (b.empty() || !phi.in_kernel(b.sum_index())) return false;
  }
  return w.product() == w.parent;
}

Sequence sigma_tilde(const ProductDecomposition& w) {
  std::vector<Index> sums;
  for (const auto& b : w.blocks) sums.push_back(b.sum_index());
  return Sequence(w.parent.group(), std::move(sums));
}

nlohmann::json to_json(const ProductDecomposition& w) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < w.blocks.size(); ++i) {
    out.push_back({{"role", "W_" + std::to_string(i)},
                   {"sequence", format_sequence(w.blocks[i])},
                   {"sum", w.blocks[i].sum().to_string()}});
  }
  return out;
}

bool has_omega0_shape(const ProductDecomposition& w, const MultByM& phi, const PhiBasis& basis) {
  const GroupSpec& g = phi.group();
  const int n = phi.n();
  const Index b1 = basis.b1, b2 = basis.b2;
  // phi(W_0) = b1^{n-1} prod (x b1 + b2), sum x = 1 mod n.
  {
    const Sequence image = phi.apply(w.blocks.at(0));
    if (image.length() != static_cast<std::size_t>(2 * n - 1)) return false;
    if (image.multiplicity(b1) != n - 1) return false;
    long total = 0;
    for (Index t : image.terms()) {
      if (t == b1) continue;
      const int x = coefficient_of(g, g.sub(t, b2), b1, n);
      if (x < 0) return false;
      total += x;
    }
    if (mod(total, n) != 1 % n) return false;
  }
  for (std::size_t i = 1; i < w.blocks.size(); ++i) {
    const Sequence image = phi.apply(w.blocks[i]);
    if (image.length() != static_cast<std::size_t>(n)) return false;
    if (image.multiplicity(b1) == n) continue;
    long total = 0;
    for (Index t : image.terms()) {
      const int y = coefficient_of(g, g.sub(t, b2), b1, n);
      if (y < 0) return false;
      total += y;
    }
    if (mod(total, n) != 0) return false;
  }
  return true;
}

namespace {

// Bases (b1, b2) of phi(G), sorted by index pair.
std::vector<PhiBasis> image_bases(const MultByM& phi) {
  std::vector<PhiBasis> out;
  for (const auto& alpha : automorphism_group(phi.image_group()).maps) {
    out.push_back({phi.from_image(alpha.image_e1().index()),
                   phi.from_image(alpha.image_e2().index())});
  }
  std::sort(out.begin(), out.end(), [](const PhiBasis& x, const PhiBasis& y) {
    return std::pair(x.b1, x.b2) < std::pair(y.b1, y.b2);
  });
  return out;
}

class DecompositionSearch {
 public:
  DecompositionSearch(const Sequence& s, int m, DecompositionFilter filter,
                      const std::function<bool(const ProductDecomposition&)>& visit,
                      const SearchOptions& options)
      : s_(s), phi_(s.group(), m), filter_(filter), visit_(visit), options_(options),
        start_(std::chrono::steady_clock::now()) {
    for (const auto& [x, k] : s.counts()) {
      support_.push_back(x);
      counts_.push_back(k);
    }
    blocks_ = static_cast<std::size_t>(2 * m - 1);
    if (filter_ == DecompositionFilter::omega0) bases_ = image_bases(phi_);
  }

  void run() {
    if (!phi_.in_kernel(s_.sum_index())) return;
    std::vector<Sequence> chosen;
    rec(counts_, chosen);
  }

 private:
  using Counts = std::vector<int>;

  int total(const Counts& c) const {
    int t = 0;
    for (int k : c) t += k;
    return t;
  }

  bool fixed_length() const { return filter_ != DecompositionFilter::omega_prime; }

  void tick() {
    ++nodes_;
    if (options_.node_cap != 0 && nodes_ > options_.node_cap) {
      throw CapExceeded("decomposition search exceeded node cap", nodes_, emitted_);
    }
    if (options_.time_cap.count() > 0 && (nodes_ & 1023) == 0 &&
        std::chrono::steady_clock::now() - start_ > options_.time_cap) {
      throw CapExceeded("decomposition search exceeded time cap", nodes_, emitted_);
    }
  }

  // Sub-multisets of c (as count vectors) usable as one of W_1..W_{2m-2}:
  // nonempty, sum in Ker(phi), length n under Omega, leaving room for the
  // remaining blocks otherwise. Sorted by their term lists.
  std::vector<Counts> candidates(const Counts& c, std::size_t left_after) const {
    const int avail = total(c);
    const int n = phi_.n();
    std::vector<Counts> out;
    Counts cur(c.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, int len, Index sum) -> void {
      if (i == c.size()) {
        if (len == 0) return;
        if (fixed_length() && len != n) return;
        if (!fixed_length() && avail - len < static_cast<int>(left_after) + 1) return;
        if (phi_.in_kernel(sum)) out.push_back(cur);
        return;
      }
      Index acc = sum;
      for (int k = 0; k <= c[i]; ++k) {
        if (fixed_length() && len + k > n) break;
        cur[i] = k;
        self(self, i + 1, len + k, acc);
        acc = phi_.group().add(acc, support_[i]);
      }
      cur[i] = 0;
    };
    rec(rec, 0, 0, 0);
    std::vector<std::pair<Sequence, Counts>> keyed;
    for (auto& x : out) keyed.emplace_back(to_sequence(x), std::move(x));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.clear();
    for (auto& [seq, cnt] : keyed) out.push_back(std::move(cnt));
    return out;
  }

  Sequence to_sequence(const Counts& c) const {
    std::vector<Index> terms;
    for (std::size_t i = 0; i < c.size(); ++i) terms.insert(terms.end(), c[i], support_[i]);
    return Sequence(s_.group(), std::move(terms));
  }

  bool remainder_ok(const Counts& c) const {
    const int len = total(c);
    if (len == 0) return false;
    if (fixed_length() &&
        len != static_cast<int>(s_.length()) - static_cast<int>(blocks_ - 1) * phi_.n()) {
      return false;
    }
    return phi_.in_kernel(to_sequence(c).sum_index());
  }

  // Order-free feasibility of splitting c into `left` blocks plus W_0,
  // memoized; a sound prune for the ordered search.
  bool feasible(const Counts& c, std::size_t left) {
    if (left == 0) return remainder_ok(c);
    auto key = std::make_pair(left, c);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = false;
    for (const auto& b : candidates(c, left - 1)) {
      tick();
      Counts rest = c;
      for (std::size_t i = 0; i < c.size(); ++i) rest[i] -= b[i];
      if (feasible(rest, left - 1)) {
        ok = true;
        break;
      }
    }
    memo_.emplace(std::move(key), ok);
    return ok;
  }

  bool rec(const Counts& c, std::vector<Sequence>& chosen) {
    tick();
    const std::size_t left = blocks_ - 1 - chosen.size();
    if (left == 0) {
      if (!remainder_ok(c)) return true;
      ProductDecomposition w{s_, phi_.m(), {}};
      w.blocks.push_back(to_sequence(c));
      w.blocks.insert(w.blocks.end(), chosen.begin(), chosen.end());
      if (filter_ == DecompositionFilter::omega0) {
        const bool any = std::any_of(bases_.begin(), bases_.end(), [&](const PhiBasis& b) {
          return has_omega0_shape(w, phi_, b);
        });
        if (!any) return true;
      }
      ++emitted_;
      return visit_(w);
    }
    for (const auto& b : candidates(c, left - 1)) {
      Sequence block = to_sequence(b);
      if (!chosen.empty() && block < chosen.back()) continue;
      Counts rest = c;
      for (std::size_t i = 0; i < c.size(); ++i) rest[i] -= b[i];
      if (!feasible(rest, left - 1)) continue;
      chosen.push_back(std::move(block));
      const bool more = rec(rest, chosen);
      chosen.pop_back();
      if (!more) return false;
    }
    return true;
  }

  const Sequence& s_;
  MultByM phi_;
  DecompositionFilter filter_;
  const std::function<bool(const ProductDecomposition&)>& visit_;
  SearchOptions options_;
  std::chrono::steady_clock::time_point start_;
  std::vector<Index> support_;
  Counts counts_;
  std::size_t blocks_ = 0;
  std::vector<PhiBasis> bases_;
  std::map<std::pair<std::size_t, Counts>, bool> memo_;
  std::uint64_t nodes_ = 0;
  std::uint64_t emitted_ = 0;
};

}  // namespace

std::optional<PhiBasis> omega0_basis(const ProductDecomposition& w, const MultByM& phi) {
  for (const auto& b : image_bases(phi)) {
    if (has_omega0_shape(w, phi, b)) return b;
  }
  return std::nullopt;
}

void find_decompositions(const Sequence& s, int m, DecompositionFilter filter,
                         const std::function<bool(const ProductDecomposition&)>& visit,
                         const SearchOptions& options) {
  DecompositionSearch search(s, m, filter, visit, options);
  search.run();
}

std::vector<ProductDecomposition> find_decompositions(const Sequence& s, int m,
                                                      DecompositionFilter filter,
                                                      std::size_t limit,
                                                      const SearchOptions& options) {
  std::vector<ProductDecomposition> out;
  find_decompositions(
      s, m, filter,
      [&](const ProductDecomposition& w) {
        out.push_back(w);
        return limit == 0 || out.size() < limit;
      },
      options);
  return out;
}

std::optional<ProductDecomposition> first_decomposition(const Sequence& s, int m,
                                                        DecompositionFilter filter,
                                                        const SearchOptions& options) {
  auto found = find_decompositions(s, m, filter, 1, options);
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

// Context -------------------------------------------------------------------

bool DecompositionContext::in_s1(Index x) const {
  return phi.apply(x) == phi.group().smul(phi.m(), e1.index());
}

namespace {

// The coefficient c in [0, n) with phi(x) = c m e1 + m e2, or -1.
int image_coefficient(const DecompositionContext& ctx, Index x) {
  const GroupSpec& g = ctx.phi.group();
  const Index me1 = g.smul(ctx.phi.m(), ctx.e1.index());
  const Index me2 = g.smul(ctx.phi.m(), ctx.e2.index());
  return coefficient_of(g, g.sub(ctx.phi.apply(x), me2), me1, ctx.phi.n());
}

}  // namespace

int DecompositionContext::iota(Index x) const {
  if (in_s1(x)) throw DomainError("iota is undefined on terms with phi(x) = m e1");
  const int c = image_coefficient(*this, x);
  if (c < 0) throw DomainError("term " + phi.group().element(x).to_string() + " is outside S_2");
  return interval_start + mod(c - interval_start, phi.n());
}

Index DecompositionContext::psi(Index x) const {
  const GroupSpec& g = phi.group();
  Index base;
  if (in_s1(x)) {
    base = e1.index();
  } else {
    base = g.add(g.smul(iota(x), e1.index()), e2.index());
  }
  return g.sub(x, base);
}

std::pair<Index, Index> DecompositionContext::split(Index k) const {
  const GroupSpec& g = phi.group();
  for (int y1 = 0; y1 < phi.m(); ++y1) {
    const Index p1 = g.smul(y1, f1.index());
    for (int y2 = 0; y2 < phi.m(); ++y2) {
      const Index p2 = g.smul(y2, f2.index());
      if (g.add(p1, p2) == k) return {p1, p2};
    }
  }
  throw DomainError(g.element(k).to_string() + " is not in Ker(phi)");
}

Index DecompositionContext::sigma_psi(const Sequence& s) const {
  Index total = 0;
  for (Index x : s.terms()) total = phi.group().add(total, psi(x));
  return total;
}

long DecompositionContext::sigma_iota(const Sequence& s) const {
  long total = 0;
  for (Index x : s.terms()) total += iota(x);
  return total;
}

bool DecompositionContext::in_a1(std::size_t i) const {
  return std::find(a1.begin(), a1.end(), i) != a1.end();
}
bool DecompositionContext::in_a2(std::size_t i) const {
  return std::find(a2.begin(), a2.end(), i) != a2.end();
}

DecompositionContext classify_blocks(const ProductDecomposition& w, const GroupElement& e1,
                                     const GroupElement& e2, const GroupElement& f1,
                                     const GroupElement& f2, int interval_start) {
  const GroupSpec& g = w.parent.group();
  MultByM phi(g, w.m);
  const int m = w.m, n = phi.n();
  if (!is_product_decomposition(w, phi) || !w.in_omega(n)) {
    throw NormalizationError("not a decomposition in Omega");
  }
  const GroupElement me1 = m * e1, me2 = m * e2;
  if (!is_basis_of(phi.image(), me1, me2)) {
    throw NormalizationError("(m e1, m e2) is not a basis of phi(G)");
  }
  if (!has_omega0_shape(w, phi, {me1.index(), me2.index()})) {
    throw NormalizationError("blocks do not have the normalized phi-image shapes");
  }
  if (!is_basis_of(phi.kernel(), f1, f2)) {
    throw NormalizationError("(f1, f2) is not a basis of Ker(phi)");
  }
  const Sequence st = sigma_tilde(w);
  {
    if (st.multiplicity(f1.index()) < m - 1) {
      throw NormalizationError("sigma_tilde(W) lacks f1^{m-1}");
    }
    const Sequence rest = st.without(Sequence(g, std::vector<Index>(m - 1, f1.index())));
    long total = 0;
    for (Index t : rest.terms()) {
      const int x = coefficient_of(g, g.sub(t, f2.index()), f1.index(), m);
      if (x < 0) throw NormalizationError("sigma_tilde(W) is not of the form relative to (f1, f2)");
      total += x;
    }
    if (mod(total, m) != 1 % m || !is_minimal_zero_sum(st)) {
      throw NormalizationError("sigma_tilde(W) is not in Upsilon(Ker(phi))");
    }
  }

  DecompositionContext ctx{
      .phi = phi, .e1 = e1, .e2 = e2, .f1 = f1, .f2 = f2, .interval_start = interval_start};
  std::vector<Index> small;
  for (Index t : st.terms()) small.push_back(phi.to_kernel(t));
  ctx.nu = upsilon_class(Sequence(phi.kernel_group(), small)) == UpsilonClass::nu;

  ctx.a1.push_back(0);
  ctx.a2.push_back(0);
  for (std::size_t i = 1; i < w.blocks.size(); ++i) {
    const Sequence image = phi.apply(w.blocks[i]);
    if (image.multiplicity(me1.index()) == n) {
      ctx.a1.push_back(i);
      ctx.a1_star.push_back(i);
    } else {
      ctx.a2.push_back(i);
      ctx.a2_star.push_back(i);
    }
  }
  // C-classes by the multiplicity of sigma(W_i) in sigma_tilde(W). For m = 2
  // every term has multiplicity 1 = m-1, so C_0 is empty.
  for (std::size_t i = 0; i < w.blocks.size(); ++i) {
    const Index sum = w.blocks[i].sum_index();
    const bool light = st.multiplicity(sum) < m - 1;
    if (light) {
      ctx.c0.push_back(i);
    } else if (!ctx.nu || sum == f1.index()) {
      ctx.c1.push_back(i);
    } else {
      ctx.c2.push_back(i);
    }
  }
  std::vector<Index> first, second;
  for (Index x : w.blocks[0].terms()) (ctx.in_s1(x) ? first : second).push_back(x);
  ctx.w0_first = Sequence(g, std::move(first));
  ctx.w0_second = Sequence(g, std::move(second));
  // Every term of S must sit in S_1 or S_2.
  for (Index x : w.parent.terms()) (void)ctx.psi(x);
  return ctx;
}

DecompositionContext classify_blocks(const ProductDecomposition& w, int interval_start) {
  const GroupSpec& g = w.parent.group();
  MultByM phi(g, w.m);
  const auto basis = omega0_basis(w, phi);
  if (!basis) throw NormalizationError("decomposition is not in Omega_0");
  // Least preimages of b1, b2 under multiplication by m.
  auto preimage = [&](Index b) {
    for (Index x = 0; x < g.order(); ++x) {
      if (phi.apply(x) == b) return g.element(x);
    }
    throw NormalizationError("no preimage");
  };
  const GroupElement e1 = preimage(basis->b1), e2 = preimage(basis->b2);
  std::vector<Index> small;
  const Sequence st = sigma_tilde(w);
  for (Index t : st.terms()) small.push_back(phi.to_kernel(t));
  const auto witness = upsilon_membership(Sequence(phi.kernel_group(), small));
  if (!witness) throw NormalizationError("sigma_tilde(W) is not in Upsilon(Ker(phi))");
  const GroupElement f1 = g.element(phi.from_kernel(witness->e1.index()));
  const GroupElement f2 = g.element(phi.from_kernel(witness->e2.index()));
  return classify_blocks(w, e1, e2, f1, f2, interval_start);
}

Epsilon epsilon(const Sequence& x, const Sequence& y, const DecompositionContext& ctx) {
  const int n = ctx.phi.n();
  const long d = ctx.sigma_iota(x) - ctx.sigma_iota(y);
  int ep = mod(d, n);
  if (ep == 0) ep = n;
  return {ep, (n - ep + d) / n};
}

// Swaps ---------------------------------------------------------------------

namespace {

void require(bool ok, const std::string& clause) {
  if (!ok) throw PreconditionError("swap precondition violated: " + clause);
}

bool all_s1(const Sequence& s, const DecompositionContext& ctx) {
  return std::all_of(s.terms().begin(), s.terms().end(), [&](Index x) { return ctx.in_s1(x); });
}

bool all_s2(const Sequence& s, const DecompositionContext& ctx) {
  return std::none_of(s.terms().begin(), s.terms().end(), [&](Index x) { return ctx.in_s1(x); });
}

}  // namespace

ProductDecomposition apply_swap(const ProductDecomposition& w, const SwapRequest& req,
                                const DecompositionContext& ctx) {
  const GroupSpec& g = w.parent.group();
  const std::size_t u = req.source, v = req.target;
  require(u < w.size() && v < w.size(), "block index in range");
  require(u != v, "source and target blocks are distinct");
  require(req.x.length() == req.y.length(), "|X| = |Y|");
  require(divides(req.x, w.blocks[u]), "X divides the source block");
  require(divides(req.y, w.blocks[v]), "Y divides the target block");

  ProductDecomposition out = w;
  const Sequence& U = w.blocks[u];
  const Sequence& V = w.blocks[v];
  Index expected = 0;

  switch (req.kind) {
    case SwapKind::I: {
      require(ctx.in_a1(u) && ctx.in_a1(v), "both blocks lie in A_1");
      require(u != 0 || all_s1(req.x, ctx), "X lies within W_0^(1)");
      require(v != 0 || all_s1(req.y, ctx), "Y lies within W_0^(1)");
      require(!req.r, "R is only used by type II swaps");
      out.blocks[u] = U.without(req.x) * req.y;
      out.blocks[v] = V.without(req.y) * req.x;
      expected = g.sub(g.add(V.sum_index(), ctx.sigma_psi(req.x)), ctx.sigma_psi(req.y));
      break;
    }
    case SwapKind::II: {
      require(u == 0, "type II swaps take X from W_0");
      require(ctx.in_a2(v) && v != 0, "target block lies in A_2*");
      require(all_s2(req.x, ctx), "X lies within W_0^(2)");
      require(req.r.has_value(), "R is given");
      const Sequence& R = *req.r;
      require(all_s1(R, ctx), "R lies within W_0^(1)");
      require(divides(R * req.x, U), "RX divides W_0");
      const Epsilon e = epsilon(req.x, req.y, ctx);
      require(R.length() == static_cast<std::size_t>(ctx.phi.n() - e.eps_prime),
              "|R| = n - eps'(X, Y)");
      out.blocks[v] = V.without(req.y) * req.x * R;
      out.blocks[0] = subtract(U, R * req.x, "RX divides W_0") * req.y;
      const Index ne1 = g.smul(e.eps * ctx.phi.n(), ctx.e1.index());
      expected = g.add(g.sub(g.add(g.add(V.sum_index(), ne1), ctx.sigma_psi(req.x)),
                             ctx.sigma_psi(req.y)),
                       ctx.sigma_psi(R));
      break;
    }
    case SwapKind::III: {
      require(ctx.in_a2(u) && ctx.in_a2(v), "both blocks lie in A_2");
      require(all_s2(req.x, ctx) && all_s2(req.y, ctx), "X and Y lie within S_2");
      require(ctx.sigma_iota(req.x) == ctx.sigma_iota(req.y), "sigma(iota(X)) = sigma(iota(Y))");
      require(!req.r, "R is only used by type II swaps");
      out.blocks[u] = U.without(req.x) * req.y;
      out.blocks[v] = V.without(req.y) * req.x;
      expected = g.sub(g.add(V.sum_index(), ctx.sigma_psi(req.x)), ctx.sigma_psi(req.y));
      break;
    }
  }

  if (out.blocks[v].sum_index() != expected) {
    throw std::logic_error("swap block-sum identity violated");
  }
  if (!is_product_decomposition(out, ctx.phi)) {
    throw std::logic_error("swap left the set of product decompositions");
  }
  return out;
}

std::optional<ProductDecomposition> pull_up(const ProductDecomposition& w, const Sequence& x,
                                            const DecompositionContext& ctx,
                                            std::optional<std::size_t> block) {
  const GroupSpec& g = w.parent.group();
  const int n = ctx.phi.n();
  std::vector<std::size_t> choices;
  if (block) {
    if (std::find(ctx.a2_star.begin(), ctx.a2_star.end(), *block) == ctx.a2_star.end()) {
      throw PreconditionError("pull-up block must lie in A_2*");
    }
    choices.push_back(*block);
  } else {
    choices = ctx.a2_star;
  }
  bool any_divides = false;
  for (std::size_t u : choices) {
    const Sequence pool_full = w.blocks[u] * ctx.w0_second;
    if (!divides(x, pool_full)) continue;
    any_divides = true;
    const Sequence pool = pool_full.without(x);
    const auto counts = pool.counts();
    // Lexicographically least n-term subsequence with sum in Ker(phi).
    std::vector<Index> cur;
    std::optional<Sequence> found;
    auto rec = [&](auto&& self, std::size_t i, int left, Index sum) -> bool {
      if (left == 0) {
        if (!ctx.phi.in_kernel(sum)) return false;
        found = Sequence(g, cur);
        return true;
      }
      for (std::size_t j = i; j < counts.size(); ++j) {
        const auto [t, k] = counts[j];
        const int used = static_cast<int>(std::count(cur.begin(), cur.end(), t));
        if (used >= k) continue;
        cur.push_back(t);
        if (self(self, used + 1 < k ? j : j + 1, left - 1, g.add(sum, t))) return true;
        cur.pop_back();
      }
      return false;
    };
    if (!rec(rec, 0, n, 0)) continue;
    ProductDecomposition out = w;
    out.blocks[u] = *found;
    out.blocks[0] = (w.blocks[0] * w.blocks[u]).without(*found);
    return out;
  }
  if (!any_divides) throw PreconditionError("X must divide U W_0^(2) for some U in A_2*");
  return std::nullopt;
}

// Proposition check ---------------------------------------------------------

std::optional<PhiForm> phi_form(const Sequence& s, const MultByM& phi, const PhiBasis& basis) {
  const GroupSpec& g = phi.group();
  const int n = phi.n(), m = phi.m();
  const Sequence image = phi.apply(s);
  const int k = image.multiplicity(basis.b1);
  if ((k + 1) % n != 0) return std::nullopt;
  const int ell = (k + 1) / n;
  if (ell < 1 || ell > 2 * m - 1) return std::nullopt;
  PhiForm out{ell, {}};
  for (Index t : image.terms()) {
    if (t == basis.b1) continue;
    const int x = coefficient_of(g, g.sub(t, basis.b2), basis.b1, n);
    if (x < 0) return std::nullopt;
    out.x.push_back(x);
  }
  std::sort(out.x.begin(), out.x.end());
  return out;
}

CheckReport check_proposition_4_2(int m, int n, const SearchOptions& options) {
  CheckReport report;
  report.check = "prop-4-2";
  ReportTimer timer(report);
  const GroupSpec g(m * n, m * n);
  const MultByM phi(g, m);
  const CheckReport small = check_property_b(n, options);
  // The proposition assumes Property B for C_n + C_n.
  if (!small.holds()) report.merge(small);

  EnumSpec spec{g, static_cast<std::size_t>(2 * m * n - 1), Constraint::minimal_zero_sum, 0, true,
                std::nullopt};
  if (options.mode == Mode::fast) spec.order_filter = m * n;
  const auto found = enumerate(spec, options);
  std::map<std::string, std::size_t> ell_counts;
  for (const auto& orbit : found.items) {
    const Sequence& s = orbit.representative;
    ++report.cases_examined;
    const auto w = first_decomposition(s, m, DecompositionFilter::omega0, options);
    if (!w) {
      report.fail(s);
      continue;
    }
    const auto basis = omega0_basis(*w, phi);
    const auto form = basis ? phi_form(s, phi, *basis) : std::nullopt;
    if (!form || !has_omega0_shape(*w, phi, *basis)) {
      report.fail(s);
      continue;
    }
    ++ell_counts[std::to_string(form->ell)];
  }
  report.params = {{"m", m},
                   {"n", n},
                   {"group", g.to_string()},
                   {"mode", options.mode == Mode::fast ? "fast" : "audit"},
                   {"property_b_small", small.holds()},
                   {"orbits", found.items.size()},
                   {"sequences", found.total_sequences()},
                   {"ell_histogram", ell_counts}};
  return report;
}

}  // namespace zslab
