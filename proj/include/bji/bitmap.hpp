#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bji {

// Small in-memory table; all values are strings.
struct MiniTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t size() const { return rows.size(); }
  // Position of a column. Throws ValidationError when absent.
  std::size_t column(const std::string& col) const;
  // Throws ValidationError on ragged rows or duplicate column names.
  void validate() const;
};

// First line is the header. Fields may be double-quoted ("" escapes a quote).
MiniTable parse_mini_table_csv(const std::string& name, const std::string& text);
MiniTable load_mini_table_csv(const std::string& path);

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits, bool value = false);

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return words_[i / 64] >> (i % 64) & 1; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t count() const;
  std::vector<std::size_t> positions() const;

  BitVector& operator|=(const BitVector& o);
  BitVector& operator&=(const BitVector& o);
  friend bool operator==(const BitVector&, const BitVector&) = default;

  // Bit 0 first, e.g. "100101".
  std::string to_string() const;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitmapJoinIndex {
  std::string dimension;
  std::string attribute;
  std::size_t fact_rows = 0;
  std::map<std::string, BitVector> vectors;  // one per distinct dimension value

  // Empty vector of length fact_rows for a value absent from the dimension.
  BitVector vector_for(const std::string& value) const;
};

// Bit j of vectors[v] is set iff fact row j's fk matches the key of a
// dimension row whose attr is v. Dangling foreign keys leave every bit 0.
// Throws ValidationError on duplicate dimension keys or unknown columns.
BitmapJoinIndex build_bji(const MiniTable& fact, const MiniTable& dim, const std::string& fk,
                          const std::string& key, const std::string& attr);

// dimension.attribute IN values
struct AttributePredicate {
  std::string dimension;
  std::string attribute;
  std::vector<std::string> values;
};

// Conjunction over attributes.
using StarPredicate = std::vector<AttributePredicate>;

// OR of the value vectors per attribute, AND across attributes, set bits
// returned as fact row ids. Throws ValidationError if a predicate attribute
// has no index.
BitVector evaluate_vector(const MiniTable& fact, const std::vector<BitmapJoinIndex>& indexes,
                          const StarPredicate& pred);
std::vector<std::size_t> evaluate(const MiniTable& fact, const std::vector<BitmapJoinIndex>& indexes,
                                  const StarPredicate& pred);

struct DimensionLink {
  const MiniTable* table;
  std::string fk;   // fact column
  std::string key;  // dimension column
};

// Nested-loop join and filter. A predicate on a dimension without a link is
// a ValidationError.
std::vector<std::size_t> naive_join_oracle(const MiniTable& fact, const std::vector<DimensionLink>& dims,
                                           const StarPredicate& pred);

// A star instance with its indexed attributes and a query predicate.
struct ToyStar {
  MiniTable fact;
  std::vector<MiniTable> dims;
  std::vector<std::string> fks;   // fact column joining dims[i]
  std::vector<std::string> keys;  // key column of dims[i]
  std::vector<std::string> attrs; // indexed attribute of dims[i]
  StarPredicate predicate;

  std::vector<DimensionLink> links() const;
  std::vector<BitmapJoinIndex> build_indexes() const;
};

// Ventes(Client, Temps, Produit), 12 fact rows. The first sale is made by a
// client from Poitiers. Predicate: Ville IN (Poitiers, Nantes) AND
// Mois = Mars AND Type IN (Jouet, Beaute).
ToyStar ventes_example();

// Random star: 1..3 dimensions, fact_rows rows, some dangling foreign keys,
// random value lists (possibly empty or naming absent values).
ToyStar random_star(std::size_t fact_rows, std::uint64_t seed);

}  // namespace bji
