//! Centrally symmetric polytope unit balls.
//!
//! A ball is given by its vertex list (the V-representation is canonical
//! here); facet functionals are recovered lazily by enumerating affinely
//! independent vertex subsets, which is exact and entirely adequate at desk
//! scale. Norm and dual norm are the support functions over facets and
//! vertices respectively.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand_core::RngCore;
use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rational::{
    matrix_rank, solve_linear_system, LinearSolve, RatMatrix, RatVector, Rational,
};
use crate::simplex::{solve_lp, LinearProgram, LpSolution};

/// A rational covector; `Y = ker f` when used as a hyperplane.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Functional(RatVector);

impl Functional {
    pub fn new(coeffs: RatVector) -> Self {
        Functional(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Functional(RatVector::from_ints(coeffs))
    }

    pub fn coeffs(&self) -> &RatVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn apply(&self, x: &RatVector) -> Rational {
        self.0.dot(x)
    }

    pub fn neg(&self) -> Functional {
        Functional(self.0.neg())
    }

    pub fn scale(&self, c: &Rational) -> Functional {
        Functional(self.0.scale(c))
    }

    /// Primitive-integer representative of the ray {c·f : c > 0} with the
    /// first nonzero coordinate positive; identifies hyperplanes up to sign
    /// and scaling.
    pub fn canonical(&self) -> Functional {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.0.iter() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        let lead_negative = ints
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| v.is_negative())
            .unwrap_or(false);
        if lead_negative {
            g = -g;
        }
        Functional(RatVector::new(
            ints.iter().map(|v| Rational::from_integer(v / &g)).collect(),
        ))
    }
}

/// A full-dimensional centrally symmetric polytope, the unit ball of a
/// polyhedral norm. Vertices are stored sorted and deduplicated; the list
/// must be closed under negation and is rejected (not symmetrized) otherwise.
#[derive(Debug)]
pub struct SymmetricPolytope {
    dim: usize,
    vertices: Vec<RatVector>,
    facets: OnceLock<Vec<Functional>>,
}

impl Clone for SymmetricPolytope {
    fn clone(&self) -> Self {
        SymmetricPolytope {
            dim: self.dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
        }
    }
}

impl PartialEq for SymmetricPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for SymmetricPolytope {}

impl SymmetricPolytope {
    pub fn new(dim: usize, vertices: Vec<RatVector>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::input("polytope dimension must be at least 2"));
        }
        if vertices.is_empty() {
            return Err(Error::input("polytope needs at least one vertex"));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::input(format!(
                    "vertex of length {} in a dimension-{dim} polytope",
                    v.len()
                )));
            }
        }
        let set: BTreeSet<RatVector> = vertices.into_iter().collect();
        for v in &set {
            if !set.contains(&v.neg()) {
                return Err(Error::input(format!(
                    "vertex list is not closed under negation: missing -{v:?}"
                )));
            }
        }
        let vertices: Vec<RatVector> = set.into_iter().collect();
        let rank = matrix_rank(&RatMatrix::from_rows(vertices.clone()));
        if rank < dim {
            return Err(Error::input(format!(
                "vertices span only {rank} dimensions, polytope must be full-dimensional"
            )));
        }
        Ok(SymmetricPolytope {
            dim,
            vertices,
            facets: OnceLock::new(),
        })
    }

    /// The unit ball of the max norm: all sign vectors.
    pub fn cube(dim: usize) -> Result<Self> {
        if dim < 2 || dim > 16 {
            return Err(Error::input("cube supported for dimensions 2..=16"));
        }
        let mut vertices = Vec::with_capacity(1 << dim);
        for mask in 0..(1u32 << dim) {
            vertices.push(RatVector::new(
                (0..dim)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            -Rational::one()
                        } else {
                            Rational::one()
                        }
                    })
                    .collect(),
            ));
        }
        Self::new(dim, vertices)
    }

    /// The unit ball of the sum norm: signed standard basis vectors.
    pub fn cross_polytope(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::input("cross-polytope needs dimension at least 2"));
        }
        let mut vertices = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let e = RatVector::unit(dim, i);
            vertices.push(e.neg());
            vertices.push(e);
        }
        Self::new(dim, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// One vertex per antipodal pair (the lexicographically larger one).
    pub fn vertex_representatives(&self) -> Vec<&RatVector> {
        self.vertices
            .iter()
            .filter(|v| **v >= v.neg())
            .collect()
    }

    /// Facet functionals `g`, normalized so each facet is `{x : g(x) = 1}`,
    /// sorted lexicographically; the list is closed under negation.
    pub fn facets(&self) -> &[Functional] {
        self.facets.get_or_init(|| {
            let n = self.dim;
            let ones = RatVector::new(vec![Rational::one(); n]);
            let mut found: BTreeSet<RatVector> = BTreeSet::new();
            for subset in (0..self.vertices.len()).combinations(n) {
                let m =
                    RatMatrix::from_rows(subset.iter().map(|&i| self.vertices[i].clone()).collect());
                let LinearSolve::Unique(g) = solve_linear_system(&m, &ones)
                    .expect("square system dimensions are consistent")
                else {
                    continue;
                };
                if self.vertices.iter().all(|v| g.dot(v) <= Rational::one()) {
                    found.insert(g);
                }
            }
            found.into_iter().map(Functional::new).collect()
        })
    }

    /// The polyhedral norm: `min{t >= 0 : x in t * ball}`, evaluated as the
    /// maximum of the facet functionals.
    pub fn norm_of(&self, x: &RatVector) -> Result<Rational> {
        if x.len() != self.dim {
            return Err(Error::input(format!(
                "norm_of: vector of length {} in dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut best = Rational::zero();
        for g in self.facets() {
            let val = g.apply(x);
            if val > best {
                best = val;
            }
        }
        Ok(best)
    }

    /// Dual norm of a functional: max of `|f(v)|` over vertices.
    pub fn dual_norm_of(&self, f: &Functional) -> Result<Rational> {
        if f.len() != self.dim {
            return Err(Error::input(format!(
                "dual_norm_of: functional of length {} in dimension {}",
                f.len(),
                self.dim
            )));
        }
        let mut best = Rational::zero();
        for v in self.vertex_representatives() {
            let val = f.apply(v).abs();
            if val > best {
                best = val;
            }
        }
        Ok(best)
    }

    pub fn contains(&self, x: &RatVector) -> Result<bool> {
        Ok(self.norm_of(x)? <= Rational::one())
    }

    /// Drops every listed point that is a convex combination of the others,
    /// leaving exactly the extreme points of the hull.
    pub fn reduce_to_extreme(&self) -> Result<SymmetricPolytope> {
        let kept: Vec<RatVector> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, v)| !self.in_hull_of_others(*i, v))
            .map(|(_, v)| v.clone())
            .collect();
        SymmetricPolytope::new(self.dim, kept)
    }

    /// Membership of `v` in the hull of all other listed vertices, decided by
    /// an exact feasibility program over convex weights.
    fn in_hull_of_others(&self, skip: usize, v: &RatVector) -> bool {
        let others: Vec<&RatVector> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, w)| w)
            .collect();
        let k = others.len();
        if k == 0 {
            return false;
        }
        let mut lp = LinearProgram::minimize(RatVector::zeros(k));
        for coord in 0..self.dim {
            let row = RatVector::new(others.iter().map(|w| w[coord].clone()).collect());
            lp = lp.eq(row, v[coord].clone());
        }
        lp = lp.eq(RatVector::new(vec![Rational::one(); k]), Rational::one());
        for j in 0..k {
            let mut row = RatVector::zeros(k);
            row[j] = -Rational::one();
            lp = lp.leq(row, Rational::zero());
        }
        matches!(
            solve_lp(&lp).expect("membership program is well-formed"),
            LpSolution::Optimal { .. }
        )
    }

    /// A facet functional equal to 1 on every given point, or `None`.
    /// Each point must lie on the unit sphere of the ball.
    pub fn facet_containing(&self, pts: &[RatVector]) -> Result<Option<Functional>> {
        for p in pts {
            if self.norm_of(p)? != Rational::one() {
                return Err(Error::input(format!(
                    "facet_containing: point {p:?} does not have norm 1"
                )));
            }
        }
        for g in self.facets() {
            if pts.iter().all(|p| g.apply(p) == Rational::one()) {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    /// Image of the ball under an invertible linear map.
    pub fn map(&self, m: &RatMatrix) -> Result<SymmetricPolytope> {
        SymmetricPolytope::new(
            self.dim,
            self.vertices.iter().map(|v| m.mul_vec(v)).collect(),
        )
    }
}

/// Samples a full-dimensional symmetric polytope with `pairs` random
/// antipodal vertex pairs, already reduced to its extreme points. Fails when
/// the sampled points are not full-dimensional; callers resample.
pub fn random_ball(rng: &mut dyn RngCore, dim: usize, pairs: usize) -> Result<SymmetricPolytope> {
    let mut vertices = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        let mut coords = Vec::with_capacity(dim);
        for _ in 0..dim {
            let num = (rng.next_u64() % 13) as i64 - 6;
            let den = (rng.next_u64() % 4) as i64 + 1;
            coords.push(Rational::new(BigInt::from(num), BigInt::from(den)));
        }
        let v = RatVector::new(coords);
        if v.is_zero() {
            continue;
        }
        vertices.push(v.neg());
        vertices.push(v);
    }
    if vertices.is_empty() {
        return Err(Error::input("sampled only zero vectors"));
    }
    SymmetricPolytope::new(dim, vertices)?.reduce_to_extreme()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn v(entries: &[i64]) -> RatVector {
        RatVector::from_ints(entries)
    }

    #[test]
    fn cross_polytope_facets_are_sign_vectors() {
        let p = SymmetricPolytope::cross_polytope(3).unwrap();
        let facets = p.facets();
        assert_eq!(facets.len(), 8);
        for g in facets {
            assert!(g.coeffs().iter().all(|c| c.abs() == rat_int(1)));
        }
    }

    #[test]
    fn cube_facets_are_coordinate_functionals() {
        let p = SymmetricPolytope::cube(3).unwrap();
        let facets = p.facets();
        assert_eq!(facets.len(), 6);
        let mut expected: Vec<Functional> = Vec::new();
        for i in 0..3 {
            expected.push(Functional::new(RatVector::unit(3, i)));
            expected.push(Functional::new(RatVector::unit(3, i).neg()));
        }
        expected.sort();
        assert_eq!(facets, expected.as_slice());
    }

    #[test]
    fn parallelotope_facets() {
        // Signed unit vectors plus the pair (1,1,1), (-1,-1,-1): a
        // parallelotope, bounded by x1 + x2 - x3 = ±1 and its rotations.
        let mut vertices = vec![v(&[1, 1, 1]), v(&[-1, -1, -1])];
        for i in 0..3 {
            vertices.push(RatVector::unit(3, i));
            vertices.push(RatVector::unit(3, i).neg());
        }
        let p = SymmetricPolytope::new(3, vertices).unwrap();
        let mut expected = vec![
            Functional::from_ints(&[1, 1, -1]),
            Functional::from_ints(&[1, -1, 1]),
            Functional::from_ints(&[-1, 1, 1]),
            Functional::from_ints(&[-1, -1, 1]),
            Functional::from_ints(&[-1, 1, -1]),
            Functional::from_ints(&[1, -1, -1]),
        ];
        expected.sort();
        assert_eq!(p.facets(), expected.as_slice());
    }

    #[test]
    fn norms_on_named_balls() {
        let cube = SymmetricPolytope::cube(3).unwrap();
        assert_eq!(cube.norm_of(&v(&[1, 1, 1])).unwrap(), rat_int(1));
        let cross = SymmetricPolytope::cross_polytope(3).unwrap();
        assert_eq!(cross.norm_of(&v(&[1, 1, 1])).unwrap(), rat_int(3));
        assert_eq!(cross.norm_of(&v(&[1, 1, -2])).unwrap(), rat_int(4));
        assert_eq!(cross.norm_of(&RatVector::zeros(3)).unwrap(), rat_int(0));
    }

    #[test]
    fn dual_norms_on_named_balls() {
        let cube = SymmetricPolytope::cube(3).unwrap();
        assert_eq!(
            cube.dual_norm_of(&Functional::from_ints(&[1, 1, 1])).unwrap(),
            rat_int(3)
        );
        let cross = SymmetricPolytope::cross_polytope(3).unwrap();
        assert_eq!(
            cross.dual_norm_of(&Functional::from_ints(&[1, 1, 1])).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            cross.dual_norm_of(&Functional::from_ints(&[0, 0, 0])).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn asymmetric_input_rejected() {
        let err = SymmetricPolytope::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[0, -1])]);
        assert!(err.is_err());
    }

    #[test]
    fn flat_input_rejected() {
        let err = SymmetricPolytope::new(3, vec![v(&[1, 0, 0]), v(&[-1, 0, 0])]);
        assert!(err.is_err());
    }

    #[test]
    fn reduce_drops_origin_and_midpoints() {
        let mut vertices = SymmetricPolytope::cube(3).unwrap().vertices().to_vec();
        vertices.push(RatVector::zeros(3));
        let p = SymmetricPolytope::new(3, vertices).unwrap();
        let reduced = p.reduce_to_extreme().unwrap();
        assert_eq!(reduced, SymmetricPolytope::cube(3).unwrap());

        let mut vertices = SymmetricPolytope::cube(3).unwrap().vertices().to_vec();
        vertices.push(v(&[1, 1, 0]));
        vertices.push(v(&[-1, -1, 0]));
        let p = SymmetricPolytope::new(3, vertices).unwrap();
        assert_eq!(
            p.reduce_to_extreme().unwrap(),
            SymmetricPolytope::cube(3).unwrap()
        );

        let cross = SymmetricPolytope::cross_polytope(3).unwrap();
        assert_eq!(cross.reduce_to_extreme().unwrap(), cross);
    }

    #[test]
    fn facet_containing_examples() {
        let cube = SymmetricPolytope::cube(3).unwrap();
        let pts = vec![v(&[-1, -1, 1]), v(&[1, -1, 1]), v(&[-1, 1, 1])];
        let g = cube.facet_containing(&pts).unwrap().unwrap();
        assert_eq!(g, Functional::from_ints(&[0, 0, 1]));

        let cross = SymmetricPolytope::cross_polytope(3).unwrap();
        let pts = vec![
            RatVector::unit(3, 0),
            RatVector::unit(3, 1),
            RatVector::unit(3, 2),
        ];
        let g = cross.facet_containing(&pts).unwrap().unwrap();
        assert_eq!(g, Functional::from_ints(&[1, 1, 1]));

        let antipodal = vec![v(&[1, 1, 1]), v(&[-1, -1, -1])];
        assert_eq!(cube.facet_containing(&antipodal).unwrap(), None);

        let interior = vec![RatVector::new(vec![rat(1, 2), rat_int(0), rat_int(0)])];
        assert!(cube.facet_containing(&interior).is_err());
    }

    #[test]
    fn extreme_vertices_have_norm_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut produced = 0;
        while produced < 5 {
            let Ok(ball) = random_ball(&mut rng, 3, 5) else {
                continue;
            };
            produced += 1;
            for v in ball.vertices() {
                assert_eq!(ball.norm_of(v).unwrap(), rat_int(1));
            }
            for g in ball.facets() {
                assert_eq!(ball.dual_norm_of(g).unwrap(), rat_int(1));
            }
        }
    }

    /// Duality round-trip: enumerating the vertices of the half-space
    /// intersection `{x : g(x) <= 1 for all facets g}` directly (an
    /// independent H-to-V conversion) recovers exactly the extreme vertex
    /// set of the ball.
    #[test]
    fn facet_halfspaces_recover_the_vertex_set() {
        use itertools::Itertools;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut produced = 0;
        while produced < 4 {
            let Ok(ball) = random_ball(&mut rng, 3, 4) else {
                continue;
            };
            produced += 1;
            let facets = ball.facets();
            let ones = RatVector::new(vec![rat_int(1); 3]);
            let mut recovered: BTreeSet<RatVector> = BTreeSet::new();
            for subset in (0..facets.len()).combinations(3) {
                let m = RatMatrix::from_rows(
                    subset.iter().map(|&i| facets[i].coeffs().clone()).collect(),
                );
                let Ok(LinearSolve::Unique(x)) = solve_linear_system(&m, &ones) else {
                    continue;
                };
                if facets.iter().all(|g| g.apply(&x) <= rat_int(1)) {
                    recovered.insert(x);
                }
            }
            let expected: BTreeSet<RatVector> = ball.vertices().iter().cloned().collect();
            assert_eq!(recovered, expected);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn norm_is_homogeneous_and_subadditive(
            a in -12i64..12, b in -12i64..12, c in -12i64..12,
            d in -12i64..12, e in -12i64..12, f in -12i64..12,
            num in -6i64..6, den in 1i64..5,
        ) {
            let ball = SymmetricPolytope::new(
                3,
                vec![
                    v(&[1, 1, 1]), v(&[-1, -1, -1]),
                    v(&[1, -2, 0]), v(&[-1, 2, 0]),
                    v(&[0, 1, -2]), v(&[0, -1, 2]),
                    v(&[2, 0, 1]), v(&[-2, 0, -1]),
                ],
            ).unwrap();
            let x = RatVector::new(vec![rat(a, 3), rat(b, 2), rat(c, 5)]);
            let y = RatVector::new(vec![rat(d, 4), rat(e, 3), rat(f, 2)]);
            let s = rat(num, den);
            prop_assert_eq!(ball.norm_of(&x.scale(&s)).unwrap(), s.abs() * ball.norm_of(&x).unwrap());
            prop_assert!(ball.norm_of(&x.add(&y)).unwrap() <= ball.norm_of(&x).unwrap() + ball.norm_of(&y).unwrap());
        }
    }
}
