#pragma once

#include <utility>
#include <vector>

#include "delta2d/arith.hpp"

namespace delta2d {

// The 3x2 embedding M(w): r -> (r1/sqrt(Q), r2/sqrt(Q), Q * w.perp(r)).
// Full rank for every w since the first two rows are Q^{-1/2} * I.
struct WeightedEmbedding {
  double w1 = 0.0;
  double w2 = 0.0;
  double Q = 1.0;

  double wdot_perp(const Vec2i& v) const {
    return w1 * double(v.y) - w2 * double(v.x);  // w . perp(v)
  }
  double gram(const Vec2i& u, const Vec2i& v) const {
    return double(u.dot(v)) / Q + Q * Q * wdot_perp(u) * wdot_perp(v);
  }
  double norm2(const Vec2i& v) const { return gram(v, v); }
  double norm(const Vec2i& v) const;
};

// meas(M [0,1]^2) = sqrt(Q^{-2} + Q (w1^2 + w2^2)), exactly.
double parallelogram_measure(const WeightedEmbedding& e);

// Lambda(a,q) = Z a + q Z^2 = { r : q | r . perp(a) }, covolume q.
struct Lattice2D {
  Vec2i a;   // canonical residue: lexicographically least of its unit-scaling class
  i64 q = 1;
  Vec2i b1, b2;  // Euclidean size-reduced basis, |det(b1|b2)| = q

  bool contains(const Vec2i& r) const { return mod_pos(r.dot(a.perp()), q) == 0; }
};

// Requires gcd(a, q) = 1 (gcd of both coordinates and q).
Lattice2D lattice_from(Vec2i a, i64 q);

// Same-q lattices; decided by integer basis-change solvability.
bool lattice_equal(const Lattice2D& l1, const Lattice2D& l2);

// q | r . perp(a); documented (and tested) to coincide with basis membership.
bool membership_characterization_check(const Lattice2D& l, const Vec2i& r);

// Shortest nonzero vector under the embedding, by exhaustive enumeration in
// the ball |M v| <= |M x1_reduced|. Ties: sign-canonical representative, then
// lexicographic (|v|^2, x, y).
struct ShortestVector {
  double mu = 0.0;
  Vec2i v;
};
ShortestVector shortest_vector(const Lattice2D& l, const WeightedEmbedding& e);

// x1 = shortest vector; x2 completes the basis (|det| = q) with minimal |M x2|.
std::pair<Vec2i, Vec2i> reduced_basis(const Lattice2D& l, const WeightedEmbedding& e);

// All r in the lattice with rmin < |r| < rmax (strict), sorted by (x, y).
std::vector<Vec2i> annulus_points(const Lattice2D& l, double rmin, double rmax);

// Lexicographically least member of { lambda * a mod q : gcd(lambda, q) = 1 }.
Vec2i canonical_residue(Vec2i a, i64 q);

// One canonical representative per unit-scaling class of primitive residues.
std::vector<Vec2i> residue_class_reps(i64 q);

// #{ a in [0,q)^2 : gcd(a, q) = 1 } = q^2 prod_{p|q} (1 - p^{-2}).
i64 primitive_residue_count(i64 q);

}  // namespace delta2d
