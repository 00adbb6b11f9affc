#include "bji/bitmap.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bji/error.hpp"

namespace bji {

std::size_t MiniTable::column(const std::string& col) const {
  auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw ValidationError("table " + name + " has no column " + col);
  return static_cast<std::size_t>(it - columns.begin());
}

void MiniTable::validate() const {
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c).second) throw ValidationError("table " + name + ": duplicate column " + c);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns.size()) {
      throw ValidationError("table " + name + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " fields, expected " +
                            std::to_string(columns.size()));
    }
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", lineno, line.size() + 1);
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

MiniTable parse_mini_table_csv(const std::string& name, const std::string& text) {
  MiniTable t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line, lineno);
    if (header) {
      t.columns = std::move(fields);
      header = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  if (header) throw ValidationError("table " + name + ": missing header row");
  t.validate();
  return t;
}

MiniTable load_mini_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return parse_mini_table_csv(stem, ss.str());
}

BitVector::BitVector(std::size_t bits, bool value) : bits_(bits), words_((bits + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && bits % 64 != 0) words_.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
}

std::size_t BitVector::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> BitVector::positions() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (auto bits = words_[w]; bits != 0; bits &= bits - 1) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
    }
  }
  return out;
}

BitVector& BitVector::operator|=(const BitVector& o) {
  if (o.bits_ != bits_) throw std::invalid_argument("bit-vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& o) {
  if (o.bits_ != bits_) throw std::invalid_argument("bit-vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

std::string BitVector::to_string() const {
  std::string s(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

BitVector BitmapJoinIndex::vector_for(const std::string& value) const {
  auto it = vectors.find(value);
  return it == vectors.end() ? BitVector(fact_rows) : it->second;
}

BitmapJoinIndex build_bji(const MiniTable& fact, const MiniTable& dim, const std::string& fk,
                          const std::string& key, const std::string& attr) {
  fact.validate();
  dim.validate();
  std::size_t fk_col = fact.column(fk);
  std::size_t key_col = dim.column(key);
  std::size_t attr_col = dim.column(attr);

  BitmapJoinIndex idx;
  idx.dimension = dim.name;
  idx.attribute = attr;
  idx.fact_rows = fact.size();

  std::unordered_map<std::string, const std::string*> value_of_key;
  for (const auto& row : dim.rows) {
    if (!value_of_key.emplace(row[key_col], &row[attr_col]).second) {
      throw ValidationError("table " + dim.name + ": duplicate key " + row[key_col]);
    }
    idx.vectors.try_emplace(row[attr_col], fact.size());
  }
  for (std::size_t j = 0; j < fact.size(); ++j) {
    auto it = value_of_key.find(fact.rows[j][fk_col]);
    if (it != value_of_key.end()) idx.vectors.at(*it->second).set(j);
  }
  return idx;
}

BitVector evaluate_vector(const MiniTable& fact, const std::vector<BitmapJoinIndex>& indexes,
                          const StarPredicate& pred) {
  BitVector result(fact.size(), true);
  for (const auto& p : pred) {
    auto idx = std::find_if(indexes.begin(), indexes.end(), [&](const BitmapJoinIndex& i) {
      return i.dimension == p.dimension && i.attribute == p.attribute;
    });
    if (idx == indexes.end()) {
      throw ValidationError("no bitmap join index on " + p.dimension + "." + p.attribute);
    }
    if (idx->fact_rows != fact.size()) {
      throw ValidationError("index on " + p.dimension + "." + p.attribute + " was built for another fact table");
    }
    BitVector vb(fact.size());
    for (const auto& v : p.values) vb |= idx->vector_for(v);
    result &= vb;
  }
  return result;
}

std::vector<std::size_t> evaluate(const MiniTable& fact, const std::vector<BitmapJoinIndex>& indexes,
                                  const StarPredicate& pred) {
  return evaluate_vector(fact, indexes, pred).positions();
}

std::vector<std::size_t> naive_join_oracle(const MiniTable& fact, const std::vector<DimensionLink>& dims,
                                           const StarPredicate& pred) {
  struct Check {
    std::size_t fk_col;
    const MiniTable* dim;
    std::size_t key_col;
    std::size_t attr_col;
    const std::vector<std::string>* values;
  };
  std::vector<Check> checks;
  for (const auto& p : pred) {
    auto link = std::find_if(dims.begin(), dims.end(),
                             [&](const DimensionLink& l) { return l.table->name == p.dimension; });
    if (link == dims.end()) throw ValidationError("no dimension " + p.dimension);
    checks.push_back({fact.column(link->fk), link->table, link->table->column(link->key),
                      link->table->column(p.attribute), &p.values});
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < fact.size(); ++j) {
    bool keep = true;
    for (const auto& c : checks) {
      bool hit = false;
      for (const auto& row : c.dim->rows) {
        if (row[c.key_col] != fact.rows[j][c.fk_col]) continue;
        const auto& v = row[c.attr_col];
        if (std::find(c.values->begin(), c.values->end(), v) != c.values->end()) hit = true;
      }
      if (!hit) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(j);
  }
  return out;
}

std::vector<DimensionLink> ToyStar::links() const {
  std::vector<DimensionLink> out;
  for (std::size_t i = 0; i < dims.size(); ++i) out.push_back({&dims[i], fks[i], keys[i]});
  return out;
}

std::vector<BitmapJoinIndex> ToyStar::build_indexes() const {
  std::vector<BitmapJoinIndex> out;
  for (std::size_t i = 0; i < dims.size(); ++i) out.push_back(build_bji(fact, dims[i], fks[i], keys[i], attrs[i]));
  return out;
}

ToyStar ventes_example() {
  ToyStar s;
  s.dims.push_back(parse_mini_table_csv("Client",
                                        "CID,Nom,Ville\n"
                                        "C1,Dupont,Poitiers\n"
                                        "C2,Martin,Paris\n"
                                        "C3,Bernard,Nantes\n"
                                        "C4,Petit,Poitiers\n"));
  s.dims.push_back(parse_mini_table_csv("Temps",
                                        "TID,Mois\n"
                                        "T1,Janvier\n"
                                        "T2,Mars\n"
                                        "T3,Juin\n"));
  s.dims.push_back(parse_mini_table_csv("Produit",
                                        "PID,Type\n"
                                        "P1,Jouet\n"
                                        "P2,Beauté\n"
                                        "P3,Sport\n"
                                        "P4,Jouet\n"));
  s.fact = parse_mini_table_csv("Ventes",
                                "CID,PID,TID,Montant\n"
                                "C1,P1,T2,120\n"
                                "C2,P2,T2,80\n"
                                "C3,P4,T2,45\n"
                                "C4,P3,T1,60\n"
                                "C1,P2,T3,30\n"
                                "C3,P1,T2,75\n"
                                "C2,P1,T2,90\n"
                                "C4,P2,T2,55\n"
                                "C3,P3,T2,40\n"
                                "C1,P4,T1,65\n"
                                "C2,P3,T3,20\n"
                                "C4,P1,T2,110\n");
  s.fks = {"CID", "TID", "PID"};
  s.keys = {"CID", "TID", "PID"};
  s.attrs = {"Ville", "Mois", "Type"};
  s.predicate = {{"Client", "Ville", {"Poitiers", "Nantes"}},
                 {"Temps", "Mois", {"Mars"}},
                 {"Produit", "Type", {"Jouet", "Beauté"}}};
  return s;
}

ToyStar random_star(std::size_t fact_rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  ToyStar s;
  std::size_t ndims = 1 + pick(3);
  std::vector<std::size_t> dim_rows;
  for (std::size_t d = 0; d < ndims; ++d) {
    MiniTable t;
    t.name = "D" + std::to_string(d);
    t.columns = {"k", "a"};
    std::size_t rows = 1 + pick(8);
    std::size_t domain = 1 + pick(4);
    for (std::size_t r = 0; r < rows; ++r) {
      t.rows.push_back({"k" + std::to_string(r), "v" + std::to_string(pick(domain))});
    }
    dim_rows.push_back(rows);
    s.dims.push_back(std::move(t));
    s.fks.push_back("fk" + std::to_string(d));
    s.keys.push_back("k");
    s.attrs.push_back("a");
  }
  s.fact.name = "F";
  s.fact.columns = s.fks;
  for (std::size_t j = 0; j < fact_rows; ++j) {
    std::vector<std::string> row;
    // One extra key value that matches no dimension row.
    for (std::size_t d = 0; d < ndims; ++d) row.push_back("k" + std::to_string(pick(dim_rows[d] + 1)));
    s.fact.rows.push_back(std::move(row));
  }
  for (std::size_t d = 0; d < ndims; ++d) {
    if (pick(10) < 3) continue;
    AttributePredicate p{s.dims[d].name, "a", {}};
    for (std::size_t v = 0; v < 5; ++v) {
      if (pick(2) == 0) p.values.push_back("v" + std::to_string(v));
    }
    s.predicate.push_back(std::move(p));
  }
  return s;
}

}  // namespace bji
