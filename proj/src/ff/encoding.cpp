#include "hbn/ff/encoding.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace hbn::ff {

namespace {

// Block widths in declaration order: season, dysp, cough, nasal.
constexpr std::array<std::size_t, 4> kWidths = {2, 3, 3, 3};
constexpr std::array<std::size_t, 4> kOffsets = {0, 2, 5, 8};

std::size_t slot_for_symptom(int value, const char* name) {
  if (value == -1) return 2;  // the unobserved slot
  if (value == 0 || value == 1) return static_cast<std::size_t>(value);
  throw std::invalid_argument(std::string("unknown level ") +
                              std::to_string(value) + " for " + name);
}

// Emits the row-major outer product of the chosen variable blocks.
void emit_block(const Vec& base, std::span<const std::size_t> vars,
                std::size_t var_pos, double prod, Vec& out) {
  if (var_pos == vars.size()) {
    out.push_back(prod);
    return;
  }
  std::size_t v = vars[var_pos];
  for (std::size_t s = 0; s < kWidths[v]; ++s)
    emit_block(base, vars, var_pos + 1, prod * base[kOffsets[v] + s], out);
}

}  // namespace

TabularEncoding encode(int season, int dysp, int cough, int nasal,
                       bool with_interactions) {
  if (season != 0 && season != 1)
    throw std::invalid_argument("unknown level " + std::to_string(season) +
                                " for season");
  TabularEncoding enc;
  enc.base.assign(kBaseDims, 0.0);
  enc.base[static_cast<std::size_t>(season)] = 1.0;
  enc.base[kOffsets[1] + slot_for_symptom(dysp, "dysp")] = 1.0;
  enc.base[kOffsets[2] + slot_for_symptom(cough, "cough")] = 1.0;
  enc.base[kOffsets[3] + slot_for_symptom(nasal, "nasal")] = 1.0;
  if (with_interactions) enc.interactions = interactions_from_base(enc.base);
  return enc;
}

Vec interactions_from_base(const Vec& base) {
  if (base.size() != kBaseDims)
    throw std::invalid_argument("base encoding must have 11 dimensions");
  Vec out;
  out.reserve(kInteractionDims);
  const std::size_t n = kWidths.size();
  // Pairs, then triples, then the quadruple, tuples in lexicographic order.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::array<std::size_t, 2> vars = {a, b};
      emit_block(base, vars, 0, 1.0, out);
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        std::array<std::size_t, 3> vars = {a, b, c};
        emit_block(base, vars, 0, 1.0, out);
      }
  {
    std::array<std::size_t, 4> vars = {0, 1, 2, 3};
    emit_block(base, vars, 0, 1.0, out);
  }
  return out;
}

}  // namespace hbn::ff
