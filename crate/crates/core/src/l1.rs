//! Closed-form projection constants for hyperplanes of the sum norm.
//!
//! `lambda_l1` evaluates the exact three-branch formula for the minimal
//! projection norm onto `ker f` in the sum-norm space, `is_max_l1` decides
//! the equality case (all coordinates of equal modulus), and `l12_threshold`
//! evaluates the rigorous threshold `r(A)` below which the third coordinate
//! forces the constant under `4/3 - A` in dimension 3.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{refine_to_width, Interval, DEFAULT_PRECISION_CEILING};
use crate::polytope::Functional;
use crate::rational::{rat, RatVector, Rational};

/// Which branch of the closed formula produced the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L1Branch {
    /// At most two nonzero coordinates: the constant is 1.
    KLe2,
    /// `a_l < l - 2`.
    ALt,
    /// `a_l >= l - 2`.
    AGe,
}

impl L1Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            L1Branch::KLe2 => "k_le_2",
            L1Branch::ALt => "a_lt",
            L1Branch::AGe => "a_ge",
        }
    }
}

/// Full evaluation record of the closed formula.
///
/// `f_sorted` is the normalized functional (1 = f_1 >= ... >= f_n >= 0); `k`
/// counts its positive entries; `a[i-1]` and `b[i-1]` hold the partial sums
/// of the entries and of their reciprocals for i = 1..=k; `beta[i-3]` holds
/// `b_i / (i-2)` for i = 3..=k. `l` is the largest index in `3..=k` whose
/// defining inequalities hold (`None` when `k <= 2`), and
/// `l_candidates_contiguous` records whether the satisfying set was an
/// unbroken range `3..=l`.
#[derive(Clone, Debug)]
pub struct L1FormulaTrace {
    pub f_sorted: RatVector,
    pub k: usize,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub l: Option<usize>,
    pub l_candidates_contiguous: bool,
    pub branch: L1Branch,
    pub lambda: Rational,
}

/// Exact projection constant of `ker f` in the dimension-`n` sum-norm space.
///
/// The input is normalized internally (absolute values, sorted descending,
/// scaled so the largest entry is 1); signed permutations are isometries of
/// the sum norm, so this does not change the constant.
pub fn lambda_l1(f: &Functional, n: usize) -> Result<(Rational, L1FormulaTrace)> {
    if n < 3 {
        return Err(Error::input("lambda_l1 requires dimension at least 3"));
    }
    if f.len() != n {
        return Err(Error::input(format!(
            "functional has length {}, expected {n}",
            f.len()
        )));
    }
    if f.is_zero() {
        return Err(Error::input("lambda_l1: functional must be nonzero"));
    }

    let mut sorted: Vec<Rational> = f.coeffs().iter().map(|c| c.abs()).collect();
    sorted.sort();
    sorted.reverse();
    let scale = sorted[0].clone();
    for c in sorted.iter_mut() {
        *c /= scale.clone();
    }
    let f_sorted = RatVector::new(sorted);

    let k = f_sorted.iter().filter(|c| c.is_positive()).count();

    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    let mut sum = Rational::zero();
    let mut inv_sum = Rational::zero();
    for i in 0..k {
        sum += &f_sorted[i];
        inv_sum += f_sorted[i].recip();
        a.push(sum.clone());
        b.push(inv_sum.clone());
    }
    let beta: Vec<Rational> = (3..=k)
        .map(|i| &b[i - 1] / Rational::from_integer((i as i64 - 2).into()))
        .collect();

    if k <= 2 {
        let lambda = Rational::one();
        return Ok((
            lambda.clone(),
            L1FormulaTrace {
                f_sorted,
                k,
                a,
                b,
                beta,
                l: None,
                l_candidates_contiguous: true,
                branch: L1Branch::KLe2,
                lambda,
            },
        ));
    }

    // l is the largest index in 3..=k with both f_l * b_{l-1} > l - 3 and
    // a_{l-1} > l - 3; l = 3 always qualifies, so the set is nonempty.
    let qualifies = |l: usize| -> bool {
        let bound = Rational::from_integer((l as i64 - 3).into());
        &f_sorted[l - 1] * &b[l - 2] > bound && a[l - 2] > bound
    };
    let satisfying: Vec<usize> = (3..=k).filter(|&l| qualifies(l)).collect();
    debug_assert!(satisfying.contains(&3));
    let l = *satisfying.last().expect("l = 3 always satisfies");
    let contiguous = satisfying == (3..=l).collect::<Vec<_>>();

    let l_rat = Rational::from_integer((l as i64).into());
    let a_l = &a[l - 1];
    let beta_l = &beta[l - 3];
    let f_l_inv = f_sorted[l - 1].recip();
    let l_minus_2 = Rational::from_integer((l as i64 - 2).into());

    let (branch, x) = if *a_l < l_minus_2 {
        let denom = (beta_l - &f_l_inv) * &l_minus_2 + a_l * &f_l_inv - &l_rat;
        (L1Branch::ALt, rat(2, 1) / denom)
    } else {
        let denom = a_l * beta_l - &l_rat;
        (L1Branch::AGe, rat(2, 1) / denom)
    };
    let lambda = Rational::one() + x;

    debug_assert!(lambda >= Rational::one());
    debug_assert!(lambda <= rat(2, 1) - rat(2, n as i64));

    Ok((
        lambda.clone(),
        L1FormulaTrace {
            f_sorted,
            k,
            a,
            b,
            beta,
            l: Some(l),
            l_candidates_contiguous: contiguous,
            branch,
            lambda,
        },
    ))
}

/// Equality case of the Bohnenblust bound in the sum-norm space: the
/// constant is maximal exactly when all coordinate moduli agree.
pub fn is_max_l1(f: &Functional) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::input("is_max_l1: functional must be nonzero"));
    }
    let first = f.coeffs()[0].abs();
    Ok(f.coeffs().iter().all(|c| c.abs() == first))
}

/// Rigorous enclosures for the threshold pair of the dimension-3 bound.
#[derive(Clone, Debug)]
pub struct ThresholdTrace {
    pub a: Rational,
    pub b_val: Interval,
    pub r_val: Interval,
    pub sqrt_digits_used: u32,
}

/// Evaluates `b = 3*sqrt((1-A)/(1-3A)) - 1` and `r = ((b - sqrt(b^2-4))/2)^2`
/// at the given sqrt precision. `b >= 2` so the inner radicand is
/// nonnegative; at `A = 0` everything collapses to the exact point `r = 1`.
pub(crate) fn threshold_intervals(a: &Rational, sqrt_digits: u32) -> Result<(Interval, Interval)> {
    let one = Rational::one();
    let ratio = (&one - a) / (&one - &(a * rat(3, 1)));
    let b = Interval::point(ratio)
        .sqrt(sqrt_digits)?
        .scale(&rat(3, 1))
        .add_rat(&rat(-1, 1));
    let disc = b.mul(&b).add_rat(&rat(-4, 1));
    let root = disc.sqrt(sqrt_digits)?;
    let half = b.sub(&root).scale(&rat(1, 2));
    let r = half.mul(&half);
    Ok((b, r))
}

/// The threshold `r(A)` for `0 <= A < 1/3`, enclosed to `10^-digits`.
pub fn l12_threshold(a: &Rational, precision_digits: u32) -> Result<ThresholdTrace> {
    if precision_digits < 15 {
        return Err(Error::input(
            "l12_threshold requires at least 15 precision digits",
        ));
    }
    if a.is_negative() || *a >= rat(1, 3) {
        return Err(Error::domain(format!(
            "threshold parameter must lie in [0, 1/3), got {a}"
        )));
    }
    let (r_val, used) = refine_to_width(
        |d| threshold_intervals(a, d).map(|(_, r)| r),
        precision_digits,
        DEFAULT_PRECISION_CEILING,
    )?;
    let (b_val, _) = threshold_intervals(a, used)?;
    Ok(ThresholdTrace {
        a: a.clone(),
        b_val,
        r_val,
        sqrt_digits_used: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::pow10_neg;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    fn f(coeffs: &[i64]) -> Functional {
        Functional::from_ints(coeffs)
    }

    fn fr(coeffs: &[(i64, i64)]) -> Functional {
        Functional::new(RatVector::new(
            coeffs.iter().map(|&(p, q)| rat(p, q)).collect(),
        ))
    }

    #[test]
    fn all_equal_reaches_the_bound() {
        let (lambda, trace) = lambda_l1(&f(&[1, 1, 1]), 3).unwrap();
        assert_eq!(lambda, rat(4, 3));
        assert_eq!(trace.branch, L1Branch::AGe);
        assert_eq!(trace.l, Some(3));
    }

    #[test]
    fn two_nonzero_entries_give_one() {
        let (lambda, trace) = lambda_l1(&f(&[1, 1, 0]), 3).unwrap();
        assert_eq!(lambda, rat_int(1));
        assert_eq!(trace.branch, L1Branch::KLe2);
        assert_eq!(trace.k, 2);
        assert_eq!(trace.l, None);
    }

    #[test]
    fn small_tail_exercises_the_alt_branch() {
        // Confirmed against the minimax program oracle in the acceptance
        // and projection test suites.
        let (lambda, trace) = lambda_l1(&fr(&[(1, 1), (1, 10), (1, 10), (1, 10)]), 4).unwrap();
        assert_eq!(lambda, rat(11, 10));
        assert_eq!(trace.branch, L1Branch::ALt);
        assert_eq!(trace.l, Some(4));
    }

    #[test]
    fn halves_exercise_the_age_branch() {
        let (lambda, trace) = lambda_l1(&fr(&[(1, 1), (1, 2), (1, 2)]), 3).unwrap();
        assert_eq!(lambda, rat(9, 7));
        assert_eq!(trace.branch, L1Branch::AGe);
    }

    #[test]
    fn input_errors() {
        assert!(lambda_l1(&f(&[0, 0, 0]), 3).is_err());
        assert!(lambda_l1(&f(&[1, 1]), 2).is_err());
        assert!(lambda_l1(&f(&[1, 1, 1]), 4).is_err());
        assert!(is_max_l1(&f(&[0, 0])).is_err());
    }

    #[test]
    fn maximality_criterion() {
        assert!(is_max_l1(&f(&[1, -1, 1])).unwrap());
        assert!(!is_max_l1(&fr(&[(1, 1), (1, 2), (1, 2)])).unwrap());
        assert!(!is_max_l1(&f(&[1, 1, 0])).unwrap());
    }

    #[test]
    fn threshold_at_zero_is_exactly_one() {
        let trace = l12_threshold(&rat_int(0), 20).unwrap();
        assert!(trace.r_val.is_point());
        assert_eq!(*trace.r_val.lo(), rat_int(1));
        assert!(trace.b_val.is_point());
        assert_eq!(*trace.b_val.lo(), rat_int(2));
    }

    #[test]
    fn threshold_at_one_twentyfirst() {
        let trace = l12_threshold(&rat(1, 21), 15).unwrap();
        assert!(trace.r_val.width() < pow10_neg(15));
        // r(1/21) = 0.44918...
        assert!(trace.r_val.strictly_above(&rat(4491, 10000)));
        assert!(trace.r_val.strictly_below(&rat(4492, 10000)));
    }

    #[test]
    fn threshold_is_decreasing() {
        let grid = [
            rat_int(0),
            rat(1, 100),
            rat(1, 21),
            rat(1, 10),
            rat(1, 5),
            rat(3, 10),
            rat(33, 100),
        ];
        let traces: Vec<ThresholdTrace> =
            grid.iter().map(|a| l12_threshold(a, 20).unwrap()).collect();
        for pair in traces.windows(2) {
            assert!(
                pair[1].r_val.strictly_left_of(&pair[0].r_val),
                "r must strictly decrease along the grid"
            );
        }
        // b >= 2 and 0 < r <= 1 throughout.
        for t in &traces {
            assert!(t.b_val.hi() >= &rat_int(2));
            assert!(t.r_val.lo() > &rat_int(0));
            assert!(t.r_val.hi() <= &rat_int(1));
        }
    }

    #[test]
    fn threshold_domain_errors() {
        assert!(l12_threshold(&rat(1, 3), 20).is_err());
        assert!(l12_threshold(&rat(-1, 10), 20).is_err());
        assert!(l12_threshold(&rat(1, 10), 10).is_err());
    }

    /// Small tails below the threshold keep the constant under `4/3 - A`:
    /// the threshold enclosure and the exact formula must agree.
    #[test]
    fn threshold_consistent_with_closed_formula() {
        let margins = [rat(1, 100)];
        for a in [rat_int(0), rat(1, 50), rat(1, 21), rat(1, 8), rat(1, 5)] {
            let trace = l12_threshold(&a, 20).unwrap();
            for margin in &margins {
                // Any rational f3 <= r.lo * (1 - margin) is certainly <= r.
                let cap = trace.r_val.lo() * (rat_int(1) - margin);
                if !cap.is_positive() {
                    continue;
                }
                for f3_scale in [rat(1, 1), rat(1, 2), rat(1, 7)] {
                    let f3 = &cap * &f3_scale;
                    for f2 in [rat_int(1), rat(1, 2), f3.clone()] {
                        if f2 < f3 {
                            continue;
                        }
                        let func = Functional::new(RatVector::new(vec![
                            rat_int(1),
                            f2.clone(),
                            f3.clone(),
                        ]));
                        let (lambda, _) = lambda_l1(&func, 3).unwrap();
                        assert!(
                            lambda <= rat(4, 3) - &a,
                            "lambda {lambda} exceeds 4/3 - {a}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        /// Signed permutations leave the constant unchanged, and the value
        /// always lies in [1, 2 - 2/n] with equality exactly for all-equal
        /// moduli.
        #[test]
        fn signed_permutation_invariance_and_bounds(
            coeffs in proptest::collection::vec((-9i64..=9, 1i64..=4), 3..=5),
            perm_seed in 0u64..1000,
            signs in 0u32..32,
        ) {
            let n = coeffs.len();
            let raw: Vec<Rational> = coeffs.iter().map(|&(p, q)| rat(p, q)).collect();
            prop_assume!(raw.iter().any(|c| !c.is_zero()));
            let func = Functional::new(RatVector::new(raw.clone()));
            let (lambda, _) = lambda_l1(&func, n).unwrap();

            prop_assert!(lambda >= rat_int(1));
            prop_assert!(lambda <= rat(2, 1) - rat(2, n as i64));
            prop_assert_eq!(lambda == rat(2, 1) - rat(2, n as i64), is_max_l1(&func).unwrap());

            // A deterministic permutation from the seed plus sign flips.
            let mut order: Vec<usize> = (0..n).collect();
            let mut s = perm_seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s as usize) % (i + 1));
            }
            let permuted: Vec<Rational> = order
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    if signs >> i & 1 == 1 { -&raw[j] } else { raw[j].clone() }
                })
                .collect();
            let (lambda2, _) = lambda_l1(&Functional::new(RatVector::new(permuted)), n).unwrap();
            prop_assert_eq!(lambda, lambda2);
        }
    }
}
